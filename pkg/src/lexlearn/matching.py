"""Scoring of word placements inside an utterance.

A match records, for a word placed at some offset, which utterance phoneme
positions it reproduces (pm), which distinct utterance sememes it carries
(sm), and how much of the word finds no support: pm_bar counts word phonemes
that disagree with the utterance or hang past its end, sm_bar counts word
sememes absent from the bag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LearnerConfig, Utterance, Word


@dataclass(eq=False)
class Match:
    word: Word
    offset: int
    pm: np.ndarray
    sm: np.ndarray
    pm_bar: int
    sm_bar: int

    @property
    def left(self) -> int:
        return self.offset

    @property
    def right(self) -> int:
        """One past the last position the word claims (may overhang)."""
        return self.offset + len(self.word.phonemes)


def match_word_at(word: Word, u: Utterance, offset: int) -> Match:
    """Score one placement. ``offset`` must satisfy 0 <= offset < len(u)."""
    n = len(u.phonemes)
    if not 0 <= offset < n:
        raise ValueError(f"offset {offset} outside [0, {n})")
    pm = np.zeros(n)
    hits = 0
    for k, p in enumerate(word.phonemes):
        pos = offset + k
        if pos < n and u.phonemes[pos] == p:
            pm[pos] = 1.0
            hits += 1
    sm = np.zeros(len(u.sememe_ids))
    for j, s in enumerate(u.sememe_ids):
        if s in word.sememes:
            sm[j] = 1.0
    sm_bar = len(word.sememes) - int(sm.sum())
    return Match(word, offset, pm, sm, len(word.phonemes) - hits, sm_bar)


def retained(match: Match, config: LearnerConfig) -> bool:
    """Filter rule: few enough mismatches, enough of the word matched."""
    length = len(match.word.phonemes)
    hits = length - match.pm_bar
    return (match.pm_bar <= config.match_max_mismatch
            and hits / length >= config.match_min_coverage)


def match_words(u: Utterance, words, config: LearnerConfig) -> list[Match]:
    """All retained placements of ``words`` in ``u``.

    Output is ordered by (offset, word stable id), so it does not depend on
    the iteration order of ``words``.
    """
    n = len(u.phonemes)
    out = []
    for word in sorted(words, key=lambda w: w.stable_id):
        length = len(word.phonemes)
        for offset in range(n):
            # cheap prefilter: bail out once too many positions miss
            misses = 0
            for k in range(length):
                pos = offset + k
                if pos >= n or u.phonemes[pos] != word.phonemes[k]:
                    misses += 1
                    if misses > config.match_max_mismatch:
                        break
            if misses > config.match_max_mismatch:
                continue
            m = match_word_at(word, u, offset)
            if retained(m, config):
                out.append(m)
    out.sort(key=lambda m: (m.offset, m.word.stable_id))
    return out
