"""Corpus I/O and a synthetic-language generator with a gold lexicon.

File format, one utterance per line:

    phoneme tokens separated by spaces <TAB> sememe tokens separated by spaces

The sememe field may be empty; repeated sememe tokens mean multiplicity.
Lines that are blank or start with ``#`` are skipped.  The same layout minus
temperature and counters serves for gold lexicon files.

The generator builds a vocabulary of random words (optionally with homonym
pairs sharing phonemes and synonym pairs sharing sememes), then emits
utterances by concatenating Zipf-sampled words; the sememe bag is the union
of the chosen words' sememe sets, with optional semantic noise.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .core import (FormatError, GenerationError, InputError, Symbols,
                   Utterance, make_utterance)


def parse_corpus_line(line: str, symbols: Symbols,
                      line_no: int | None = None) -> Utterance:
    """One corpus line -> Utterance. Raises FormatError on bad layout."""
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 2:
        raise FormatError("expected 'phonemes<TAB>sememes'", line_no)
    phonemes = parts[0].split()
    if not phonemes:
        raise FormatError("empty phoneme field", line_no)
    return make_utterance(phonemes, parts[1].split(), symbols,
                          source_line=line.rstrip("\n"))


def load_corpus(path, symbols: Symbols) -> list[Utterance]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line_no, raw in enumerate(f, 1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            out.append(parse_corpus_line(raw, symbols, line_no))
    return out


def dump_corpus(utterances, symbols: Symbols, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for u in utterances:
            ph = " ".join(symbols.phonemes.token(p) for p in u.phonemes)
            sems = []
            for sid, count in zip(u.sememe_ids, u.sememe_counts):
                sems.extend([symbols.sememes.token(sid)] * count)
            f.write(f"{ph}\t{' '.join(sems)}\n")


@dataclass(eq=False)
class GoldLexicon:
    """Reference vocabulary: (phoneme tokens, sememe token set) entries."""

    entries: list[tuple[tuple[str, ...], frozenset[str]]]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.entries)) != len(self.entries):
            raise InputError("duplicate gold lexicon entry")

    def entry_set(self) -> frozenset:
        return frozenset(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GoldLexicon):
            return NotImplemented
        return self.entry_set() == other.entry_set()

    def __len__(self) -> int:
        return len(self.entries)


def dump_gold_lexicon(gold: GoldLexicon, path) -> None:
    lines = sorted((ph, tuple(sorted(sem))) for ph, sem in gold.entries)
    with open(path, "w", encoding="utf-8") as f:
        for ph, sem in lines:
            f.write(f"{' '.join(ph)}\t{' '.join(sem)}\n")


def load_gold_lexicon(path) -> GoldLexicon:
    entries = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for line_no, raw in enumerate(f, 1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            parts = raw.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise FormatError("expected 'phonemes<TAB>sememes'", line_no)
            ph = tuple(parts[0].split())
            sem = frozenset(parts[1].split())
            if not ph:
                raise FormatError("empty phoneme field", line_no)
            if not sem:
                raise FormatError("empty sememe field", line_no)
            if (ph, sem) in seen:
                raise FormatError("duplicate gold lexicon entry", line_no)
            seen.add((ph, sem))
            entries.append((ph, sem))
    return GoldLexicon(entries)


@dataclass
class GenConfig:
    """Synthetic corpus profile; the defaults are the desk-scale profile."""

    word_count: int = 30
    alphabet_size: int = 20
    word_len_min: int = 2
    word_len_max: int = 5
    utterance_count: int = 3000
    utterance_words_min: int = 3
    utterance_words_max: int = 8
    homonym_pairs: int = 0
    synonym_pairs: int = 0
    noise_rate: float = 0.0
    zipf_exponent: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.word_count < 1 or self.alphabet_size < 1:
            raise GenerationError("word_count and alphabet_size must be >= 1")
        if not 1 <= self.word_len_min <= self.word_len_max:
            raise GenerationError("need 1 <= word_len_min <= word_len_max")
        if self.utterance_count < 0:
            raise GenerationError("utterance_count must be >= 0")
        if not 1 <= self.utterance_words_min <= self.utterance_words_max:
            raise GenerationError("need 1 <= utterance_words_min <= utterance_words_max")
        if self.homonym_pairs < 0 or self.synonym_pairs < 0:
            raise GenerationError("pair counts must be >= 0")
        if 2 * (self.homonym_pairs + self.synonym_pairs) > self.word_count:
            raise GenerationError("not enough words for the requested pairs")
        if not 0.0 <= self.noise_rate <= 1.0:
            raise GenerationError("noise_rate must lie in [0, 1]")
        if self.zipf_exponent < 0:
            raise GenerationError("zipf_exponent must be >= 0")
        if self.seed < 0:
            raise GenerationError("seed must be >= 0")


def _alphabet(size: int) -> list[str]:
    letters = list(string.ascii_lowercase)
    if size <= len(letters):
        return letters[:size]
    return letters + [f"c{i}" for i in range(size - len(letters))]


def _sample_vocabulary(cfg: GenConfig, rng) -> list[tuple[str, ...]]:
    alphabet = _alphabet(cfg.alphabet_size)
    capacity = sum(cfg.alphabet_size ** L
                   for L in range(cfg.word_len_min, cfg.word_len_max + 1))
    if capacity < cfg.word_count:
        raise GenerationError("alphabet too small for that many distinct words")
    seen = set()
    words = []
    attempts = 0
    while len(words) < cfg.word_count:
        attempts += 1
        if attempts > 200 * cfg.word_count + 1000:
            raise GenerationError("could not sample enough distinct words")
        length = int(rng.integers(cfg.word_len_min, cfg.word_len_max + 1))
        ph = tuple(alphabet[i] for i in rng.integers(0, cfg.alphabet_size, length))
        if ph in seen:
            continue
        seen.add(ph)
        words.append(ph)
    return words


def generate_with_trace(cfg: GenConfig, symbols: Symbols):
    """(gold, utterances, trace); trace[t] is the tuple of word indices
    concatenated to build utterance t, before noise."""
    rng = np.random.default_rng(cfg.seed)
    phonemes = _sample_vocabulary(cfg, rng)
    sememes = [frozenset({f"S{i:02d}"}) for i in range(cfg.word_count)]

    order = [int(i) for i in rng.permutation(cfg.word_count)]
    for k in range(cfg.homonym_pairs):
        a, b = order[2 * k], order[2 * k + 1]
        phonemes[b] = phonemes[a]
    base = 2 * cfg.homonym_pairs
    for k in range(cfg.synonym_pairs):
        a, b = order[base + 2 * k], order[base + 2 * k + 1]
        sememes[b] = sememes[a]

    entries = list(zip(phonemes, sememes))
    gold = GoldLexicon(entries, meta={"config": cfg})
    inventory = sorted({s for _, sem in entries for s in sem})

    weights = np.arange(1, cfg.word_count + 1, dtype=float) ** -cfg.zipf_exponent
    weights /= weights.sum()

    utterances = []
    trace = []
    for _ in range(cfg.utterance_count):
        k = int(rng.integers(cfg.utterance_words_min, cfg.utterance_words_max + 1))
        chosen = [int(i) for i in rng.choice(cfg.word_count, size=k, p=weights)]
        ph_tokens = [tok for i in chosen for tok in entries[i][0]]
        sem_tokens = [s for i in chosen for s in sorted(entries[i][1])]
        if cfg.noise_rate and rng.random() < cfg.noise_rate:
            if rng.random() < 0.5 and sem_tokens:
                sem_tokens.pop(int(rng.integers(len(sem_tokens))))
            else:
                sem_tokens.append(inventory[int(rng.integers(len(inventory)))])
        utterances.append(make_utterance(ph_tokens, sem_tokens, symbols))
        trace.append(tuple(chosen))
    return gold, utterances, trace


def generate_synthetic(cfg: GenConfig, symbols: Symbols):
    """(gold lexicon, utterances) for the given profile, deterministically."""
    gold, utterances, _ = generate_with_trace(cfg, symbols)
    return gold, utterances
