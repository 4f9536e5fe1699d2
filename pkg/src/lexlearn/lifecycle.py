"""Word lifecycle: cooling, admission, garbage collection, reduction.

Temperature only ever falls.  A word cools when one of its matches sits
cleanly inside a parse; how much it cools depends on how good the whole
parse was.  Fresh candidates enter the dictionary only if they cooled in
the reparse of the utterance that spawned them.  Warm words that outlive
their trial period are deleted at random with probability equal to their
temperature; stable words whose content is expressible by the rest of the
dictionary are reduced away.
"""

from __future__ import annotations

import math

from .core import Dictionary, LearnerConfig, Utterance
from .matching import match_words
from .parsing import parse
from .rng import ROLE_REDUCE

# words at least this warm are never considered for reduction
REDUCIBLE_TEMPERATURE = 0.1


def cooling_factor(error: float, config: LearnerConfig) -> float:
    """Multiplier applied to temperature: 1 - kappa * exp(-E / E0).

    Rises from 1 - kappa at a perfect parse toward 1 as error grows, so
    poor parses barely confirm anything.
    """
    return 1.0 - config.cooling_kappa * math.exp(-error / config.cooling_e0)


def cool_words(matches, parse_result, config: LearnerConfig) -> set[int]:
    """Cool every match that is fully supported and cleanly bounded.

    Conditions: no mismatched phonemes, no unsupported sememes, both
    neighboring positions well parsed (out-of-range neighbors count as well
    parsed), and activation above the threshold.  Cooled words also gain a
    good_parse_count when the parse error, normalized by utterance size, is
    small.  Returns the stable ids that cooled.
    """
    factor = cooling_factor(parse_result.error, config)
    size = len(parse_result.delta_p) + len(parse_result.delta_s)
    good = parse_result.error / size < config.good_parse_norm_threshold
    n = len(parse_result.delta_p)
    cooled: set[int] = set()
    for alpha, m in zip(parse_result.activations, matches):
        if m.pm_bar != 0 or m.sm_bar != 0:
            continue
        if alpha <= config.activation_threshold:
            continue
        if m.left - 1 >= 0 and parse_result.delta_p[m.left - 1] >= config.neighbor_threshold:
            continue
        if m.right < n and parse_result.delta_p[m.right] >= config.neighbor_threshold:
            continue
        m.word.temperature *= factor
        if good:
            m.word.good_parse_count += 1
        cooled.add(m.word.stable_id)
    return cooled


def add_cooled_words(new_matches, d: Dictionary, cooled: set[int]) -> list[int]:
    """Admit candidates whose match cooled in the reparse.

    Content duplicates fall out silently.  Returns inserted stable ids.
    """
    added = []
    for m in new_matches:
        if m.word.stable_id in cooled and m.word.stable_id not in d:
            if d.upsert(m.word):
                added.append(m.word.stable_id)
    return added


def garbage_collect(d: Dictionary, rng, config: LearnerConfig) -> list[int]:
    """Delete each word past its trial period with probability temperature.

    Words are visited in stable-id order, one draw per eligible word, so a
    given generator state always deletes the same set.  Frozen words
    (temperature 0) are never deleted.
    """
    doomed = []
    for w in d.live_words():
        if d.utterance_counter - w.created_at <= config.trial_period:
            continue
        if rng.random() < w.temperature:
            doomed.append(w.stable_id)
    for sid in doomed:
        d.remove(sid)
    return doomed


def reduce_dictionary(d: Dictionary, config: LearnerConfig,
                      key_tag: int | None = None) -> list[int]:
    """Delete stable words the rest of the dictionary can already express.

    Each candidate (temperature below 0.1, longest first) gets a synthetic
    utterance made of its own phonemes and sememes (multiplicity 1), parsed
    against the dictionary minus the candidate; deletion follows when that
    parse is near-perfect.  Probes see earlier deletions from the same pass,
    so a surviving word's support cannot have been reduced away under it.
    """
    if key_tag is None:
        key_tag = d.utterance_counter
    candidates = sorted(
        (w for w in d.live_words() if w.temperature < REDUCIBLE_TEMPERATURE),
        key=lambda w: (-len(w.phonemes), w.stable_id))
    deleted = []
    for w in candidates:
        others = [x for x in d.live_words() if x.stable_id != w.stable_id]
        synthetic = Utterance(w.phonemes, tuple(sorted(w.sememes)),
                              (1,) * len(w.sememes))
        ms = match_words(synthetic, others, config)
        result = parse(synthetic, ms,
                       (config.seed, key_tag, ROLE_REDUCE, w.stable_id), config)
        if result.error < config.reduce_error_threshold:
            d.remove(w.stable_id)
            deleted.append(w.stable_id)
    return deleted
