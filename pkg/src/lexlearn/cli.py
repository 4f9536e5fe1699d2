"""Command line interface: gen, train, eval, and parse subcommands."""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from .core import (ConfigError, LearnerConfig, LexlearnError, Symbols,
                   dump_dictionary, load_dictionary, make_utterance)
from .corpus import (GenConfig, dump_corpus, dump_gold_lexicon,
                     generate_synthetic, load_corpus, load_gold_lexicon)
from .evaluate import evaluate, format_report
from .learner import train
from .matching import match_word_at, retained
from .parsing import parse
from .rng import ROLE_FIRST_PARSE


def _coerce(raw: str, kind: type):
    if kind is bool:
        low = raw.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise ConfigError(f"expected a boolean, got {raw!r}")
    return kind(raw)


def load_config_file(path) -> dict:
    """Flat ``key = value`` file -> LearnerConfig keyword dict.

    Unknown keys are rejected rather than ignored, so typos fail loudly.
    """
    by_name = {f.name: f.type for f in fields(LearnerConfig)}
    kinds = {"float": float, "int": int, "bool": bool}
    out = {}
    with open(path, encoding="utf-8") as f:
        for line_no, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {line_no}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in by_name:
                raise ConfigError(f"line {line_no}: unknown key {key!r}")
            try:
                out[key] = _coerce(value, kinds[by_name[key]])
            except ValueError as exc:
                raise ConfigError(f"line {line_no}: {exc}") from exc
    return out


def _cmd_gen(args) -> int:
    cfg = GenConfig(word_count=args.words, alphabet_size=args.alphabet,
                    word_len_min=args.len_min, word_len_max=args.len_max,
                    utterance_count=args.utterances,
                    utterance_words_min=args.utt_words_min,
                    utterance_words_max=args.utt_words_max,
                    homonym_pairs=args.homonym_pairs,
                    synonym_pairs=args.synonym_pairs,
                    noise_rate=args.noise_rate,
                    zipf_exponent=args.zipf, seed=args.seed)
    symbols = Symbols()
    gold, utterances = generate_synthetic(cfg, symbols)
    dump_corpus(utterances, symbols, args.corpus_out)
    dump_gold_lexicon(gold, args.gold_out)
    print(f"wrote {len(utterances)} utterances to {args.corpus_out}, "
          f"{len(gold)} gold entries to {args.gold_out}")
    return 0


def _cmd_train(args) -> int:
    overrides = load_config_file(args.config) if args.config else {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.epochs is not None:
        overrides["epochs"] = args.epochs
    config = LearnerConfig(**overrides)
    symbols = Symbols()
    corpus = load_corpus(args.corpus, symbols)

    stats_file = open(args.stats, "w", encoding="utf-8") if args.stats else None

    def on_utterance(d, result):
        t = d.utterance_counter
        if stats_file:
            stats_file.write(f"{t}\t{result.first_parse.error:.6f}"
                             f"\t{result.reparse.error:.6f}\t{len(d)}\n")
        if args.dump_every and t % args.dump_every == 0:
            dump_dictionary(d, f"{args.out}.u{t:06d}")

    try:
        d, stats = train(corpus, config, symbols, on_utterance=on_utterance,
                         workers=args.workers)
    finally:
        if stats_file:
            stats_file.close()
    dump_dictionary(d, args.out)
    print(f"processed {stats.utterances_processed} utterances; "
          f"created {stats.words_created}, added {stats.words_added}, "
          f"gc-deleted {stats.words_gc_deleted}, reduced {stats.words_reduced}; "
          f"{len(d)} words live, dumped to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    symbols = Symbols()
    d = load_dictionary(args.dict, symbols)
    gold = load_gold_lexicon(args.gold)
    text = format_report(evaluate(d, gold))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _render_word(word, symbols) -> str:
    ph = "".join(symbols.phonemes.token(p) for p in word.phonemes)
    sem = " ".join(sorted(symbols.sememes.token(s) for s in word.sememes))
    return f"/{ph}/ {{{sem}}}"


def _cmd_parse(args) -> int:
    symbols = Symbols()
    d = load_dictionary(args.dict, symbols)
    u = make_utterance(args.phonemes.split(),
                       args.sememes.split() if args.sememes else [],
                       symbols)
    config = LearnerConfig(seed=args.seed)

    scored = [match_word_at(w, u, offset)
              for w in d.live_words() for offset in range(len(u.phonemes))]
    kept = [m for m in scored if retained(m, config)]
    kept.sort(key=lambda m: (m.offset, m.word.stable_id))
    result = parse(u, kept, (config.seed, 1, ROLE_FIRST_PARSE), config)

    names = {m: _render_word(m.word, symbols) for m in scored}
    width = max((len(n) for n in names.values()), default=4)
    print(f"{'word':<{width}}  pos  {'PM':<{len(u.phonemes) + 2}}  "
          f"{'SM':<{len(u.sememe_ids) + 2}}  PM~  SM~  kept")
    for m in scored:
        pm = "<" + "".join(str(int(v)) for v in m.pm) + ">"
        sm = "<" + "".join(str(int(v)) for v in m.sm) + ">"
        flag = "yes" if m in kept else "no"
        print(f"{names[m]:<{width}}  {m.offset:<3}  {pm}  {sm}  "
              f"{m.pm_bar:<3}  {m.sm_bar:<3}  {flag}")
    print("activations:")
    for m, alpha in zip(kept, result.activations):
        print(f"  {names[m]} @ {m.offset}: {alpha:.12f}")
    print("dP = <" + " ".join(f"{v:.3f}" for v in result.delta_p) + ">")
    print("dS = <" + " ".join(f"{v:.3f}" for v in result.delta_s) + ">")
    print(f"E = {result.error:.12f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexlearn",
        description="Learn a lexicon from unsegmented phoneme sequences "
                    "paired with sememe bags.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic corpus and gold lexicon")
    g.add_argument("--words", type=int, default=30)
    g.add_argument("--alphabet", type=int, default=20)
    g.add_argument("--len-min", type=int, default=2)
    g.add_argument("--len-max", type=int, default=5)
    g.add_argument("--utterances", type=int, default=3000)
    g.add_argument("--utt-words-min", type=int, default=3)
    g.add_argument("--utt-words-max", type=int, default=8)
    g.add_argument("--homonym-pairs", type=int, default=0)
    g.add_argument("--synonym-pairs", type=int, default=0)
    g.add_argument("--noise-rate", type=float, default=0.0)
    g.add_argument("--zipf", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--corpus-out", required=True)
    g.add_argument("--gold-out", required=True)
    g.set_defaults(func=_cmd_gen)

    t = sub.add_parser("train", help="train a dictionary on a corpus file")
    t.add_argument("--corpus", required=True)
    t.add_argument("--config", help="flat 'key = value' learner config file")
    t.add_argument("--seed", type=int)
    t.add_argument("--epochs", type=int)
    t.add_argument("--out", required=True, help="dictionary dump path")
    t.add_argument("--dump-every", type=int, default=0, metavar="N",
                   help="also dump every N utterances to OUT.uNNNNNN")
    t.add_argument("--stats", help="write per-utterance error trace here")
    t.add_argument("--workers", type=int, default=1,
                   help="threads for parse restarts (same result any value)")
    t.set_defaults(func=_cmd_train)

    e = sub.add_parser("eval", help="score a dictionary dump against gold")
    e.add_argument("--dict", required=True)
    e.add_argument("--gold", required=True)
    e.add_argument("--report", help="write the report here instead of stdout")
    e.set_defaults(func=_cmd_eval)

    p = sub.add_parser("parse", help="show matches and activations for one utterance")
    p.add_argument("--dict", required=True)
    p.add_argument("--phonemes", required=True, help="space-separated tokens")
    p.add_argument("--sememes", default="", help="space-separated tokens")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_parse)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LexlearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
