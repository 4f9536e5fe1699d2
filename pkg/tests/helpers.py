"""Builders shared across test modules.

`random_parse_instance` manufactures small utterance/dictionary pairs whose
match sets stay small enough for exhaustive activation search, so optimizer
results can be checked against the brute-force oracle.
"""

import numpy as np

from lexlearn import LearnerConfig, Symbols, Word, make_utterance
from lexlearn.matching import match_words

PH_POOL = list("abcdef")
SEM_POOL = [f"S{i}" for i in range(10)]


def build_word(sym, phonemes, sememes, temperature=0.5, stable_id=0,
               created_at=0, good_parse_count=0):
    """Intern token sequences and wrap them in a Word."""
    return Word(
        phonemes=tuple(sym.phonemes.intern(p) for p in phonemes),
        sememes=frozenset(sym.sememes.intern(s) for s in sememes),
        temperature=temperature,
        created_at=created_at,
        stable_id=stable_id,
        good_parse_count=good_parse_count,
    )


def random_parse_instance(rng, sym, config=None, max_matches=12):
    """Random utterance plus candidate words, with the retained match list.

    Words are biased toward genuine substrings of the utterance (sometimes
    corrupted in one position) and toward sememes drawn from the utterance
    bag, so the match lists mix near-perfect covers with decoys.
    """
    config = config or LearnerConfig()
    n_ph = int(rng.integers(4, 13))
    phonemes = [PH_POOL[i] for i in rng.integers(0, len(PH_POOL), size=n_ph)]
    n_sem = int(rng.integers(1, 5))
    sememes = list(rng.choice(SEM_POOL, size=n_sem, replace=False))
    u = make_utterance(phonemes, sememes, sym)

    words = []
    n_words = int(rng.integers(3, 10))
    for wid in range(n_words):
        length = int(rng.integers(2, 6))
        if rng.random() < 0.7 and length <= n_ph:
            start = int(rng.integers(0, n_ph - length + 1))
            w_ph = phonemes[start:start + length]
        else:
            w_ph = [PH_POOL[i]
                    for i in rng.integers(0, len(PH_POOL), size=length)]
        if rng.random() < 0.1:
            pos = int(rng.integers(0, length))
            w_ph = list(w_ph)
            w_ph[pos] = PH_POOL[int(rng.integers(0, len(PH_POOL)))]
        n_ws = int(rng.integers(1, 4))
        w_sem = set()
        for _ in range(n_ws):
            if sememes and rng.random() < 0.8:
                w_sem.add(sememes[int(rng.integers(0, len(sememes)))])
            else:
                w_sem.add(SEM_POOL[int(rng.integers(0, len(SEM_POOL)))])
        words.append(build_word(sym, w_ph, w_sem,
                                temperature=float(rng.random()),
                                stable_id=wid))

    matches = match_words(u, words, config)[:max_matches]
    return u, words, matches


def stack_match_vectors(matches):
    """Stack per-match vectors into (pm, sm, pm_bar, sm_bar) arrays."""
    pm = np.stack([m.pm for m in matches])
    sm = np.stack([m.sm for m in matches])
    pm_bar = np.array([m.pm_bar for m in matches], dtype=float)
    sm_bar = np.array([m.sm_bar for m in matches], dtype=float)
    return pm, sm, pm_bar, sm_bar
