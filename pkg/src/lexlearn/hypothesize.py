"""Dictionary growth: fixed variants of matched words, new words from residue.

After a parse, two kinds of candidates are generated.  Fixes copy a matched
word with one aspect changed (sememes removed or added, mismatched phonemes
dropped, the phoneme sequence extended sideways); the original word is never
touched.  Proposals carve wholly new words out of maximal runs of underparsed
phoneme positions.  Every candidate starts life at the initial temperature.

Whether a word participates in fixes is decided by chance: per match, a
semantic trial fires with probability alpha * temperature and a phonemic
trial with probability alpha.  A frozen word (temperature 0) therefore never
volunteers semantic changes.  Trials consume randomness in match-list order,
semantic before phonemic, so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Dictionary, LearnerConfig, Utterance


@dataclass(frozen=True)
class UnderparsedRun:
    start: int
    end: int  # exclusive

    @property
    def length(self) -> int:
        return self.end - self.start


def find_underparsed_runs(delta_p, threshold: float) -> list[UnderparsedRun]:
    """Maximal runs of positions with residual above the threshold."""
    runs = []
    start = None
    for i, d in enumerate(delta_p):
        if d > threshold:
            if start is None:
                start = i
        elif start is not None:
            runs.append(UnderparsedRun(start, i))
            start = None
    if start is not None:
        runs.append(UnderparsedRun(start, len(delta_p)))
    return runs


def _semantic_candidates(u, match, parse, runs, config):
    word = match.word
    c = config.delta_threshold
    slot = {s: j for j, s in enumerate(u.sememe_ids)}
    out = []
    # drop sememes the utterance does not support
    offending = {s for s in word.sememes
                 if s not in slot or parse.delta_s[slot[s]] < -c}
    if offending:
        kept = word.sememes - offending
        if kept:
            out.append((word.phonemes, kept))
    # absorb unexplained sememes, but only when the phonemes are all accounted
    # for; otherwise the residue likely belongs to a missing word instead
    if not runs:
        missing = {s for s, j in slot.items()
                   if parse.delta_s[j] > c and s not in word.sememes}
        if missing:
            out.append((word.phonemes, word.sememes | missing))
    return out


def _phonemic_candidates(u, match, parse, config):
    word = match.word
    c = config.delta_threshold
    n = len(u.phonemes)
    out = []
    # alteration: drop every mismatched or overparsed position at once
    kept = []
    dropped = False
    for k, p in enumerate(word.phonemes):
        pos = match.offset + k
        mismatch = pos >= n or match.pm[pos] == 0.0
        if mismatch or parse.delta_p[pos] < -c:
            dropped = True
        else:
            kept.append(p)
    if dropped and kept:
        out.append((tuple(kept), word.sememes))
    # extensions: swallow adjacent underparsed phonemes, one maximal
    # candidate per side
    grow = 0
    while (grow < config.max_extension_len and match.left - 1 - grow >= 0
           and parse.delta_p[match.left - 1 - grow] > c):
        grow += 1
    if grow:
        out.append((u.phonemes[match.left - grow:match.left] + word.phonemes,
                    word.sememes))
    grow = 0
    while (grow < config.max_extension_len and match.right + grow < n
           and parse.delta_p[match.right + grow] > c):
        grow += 1
    if grow:
        out.append((word.phonemes + u.phonemes[match.right:match.right + grow],
                    word.sememes))
    return out


def fix_words(u: Utterance, matches, parse, rng, d: Dictionary,
              config: LearnerConfig) -> list:
    """Fixed variants of matched words whose trials fire.

    ``rng`` may be None when config.force_fix_trials is set.
    """
    runs = find_underparsed_runs(parse.delta_p, config.delta_threshold)
    out = []
    for alpha, match in zip(parse.activations, matches):
        p_semantic = float(alpha) * match.word.temperature
        p_phonemic = float(alpha)
        if config.force_fix_trials:
            semantic = p_semantic > 0.0
            phonemic = p_phonemic > 0.0
        else:
            semantic = rng.random() < p_semantic
            phonemic = rng.random() < p_phonemic
        candidates = []
        if semantic:
            candidates += _semantic_candidates(u, match, parse, runs, config)
        if phonemic:
            candidates += _phonemic_candidates(u, match, parse, config)
        for phonemes, sememes in candidates:
            if phonemes and sememes:
                out.append(d.mint(phonemes, sememes, config.initial_temperature))
    return out


def propose_new_words(u: Utterance, parse, d: Dictionary,
                      config: LearnerConfig) -> list:
    """New words carved from underparsed runs.

    Fires only for one or two runs, each short enough to be a word; every
    proposal receives the full set of underparsed sememes, to be whittled
    down by later fixes.  No unexplained sememes, no proposals.
    """
    runs = find_underparsed_runs(parse.delta_p, config.delta_threshold)
    if not runs or len(runs) > 2:
        return []
    if any(r.length > config.max_new_word_len for r in runs):
        return []
    sememes = {u.sememe_ids[j] for j in range(len(u.sememe_ids))
               if parse.delta_s[j] > config.delta_threshold}
    if not sememes:
        return []
    return [d.mint(u.phonemes[r.start:r.end], sememes,
                   config.initial_temperature) for r in runs]


def create_new_words(u: Utterance, matches, parse, rng, d: Dictionary,
                     config: LearnerConfig) -> list:
    """Union of fixes and proposals, deduplicated by content.

    Duplicates within the batch and words already in the dictionary are
    dropped; semanticless candidates never make it out of the generators.
    """
    out = []
    seen = set()
    for w in fix_words(u, matches, parse, rng, d, config) \
            + propose_new_words(u, parse, d, config):
        if w.content in seen or d.contains_content(*w.content):
            continue
        seen.add(w.content)
        out.append(w)
    return out
