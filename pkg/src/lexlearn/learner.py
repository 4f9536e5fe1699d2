"""Online training loop.

Each utterance is processed in a fixed order: match the dictionary, parse,
generate candidate words from the parse, match the candidates, reparse with
everything, cool matches against the reparse, admit the candidates that
cooled, then (on their periods) garbage-collect and reduce.  Randomized
steps draw from streams keyed by (seed, utterance counter, role), so a run
is fully determined by the corpus and the config.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Dictionary, LearnerConfig, Symbols, Utterance
from .hypothesize import create_new_words
from .lifecycle import add_cooled_words, cool_words, garbage_collect, reduce_dictionary
from .matching import match_words
from .parsing import parse
from .rng import ROLE_FIRST_PARSE, ROLE_FIXES, ROLE_GC, ROLE_REPARSE, stream


@dataclass
class UtteranceResult:
    """Everything one processing step saw and did; handy for tests and traces."""

    first_parse: object
    reparse: object
    matches: list
    new_matches: list
    new_words: list
    cooled_ids: set[int]
    added_ids: list[int]
    gc_deleted: list[int]
    reduced: list[int]


@dataclass
class TrainStats:
    utterances_processed: int = 0
    words_created: int = 0
    words_added: int = 0
    words_gc_deleted: int = 0
    words_reduced: int = 0
    # (first-parse error, reparse error, dictionary size) per utterance
    error_trace: list[tuple[float, float, int]] | None = None


def process_utterance(u: Utterance, d: Dictionary, config: LearnerConfig,
                      *, workers: int = 1) -> UtteranceResult:
    d.utterance_counter += 1
    t = d.utterance_counter
    matches = match_words(u, d.candidate_words(u), config)
    first = parse(u, matches, (config.seed, t, ROLE_FIRST_PARSE), config,
                  workers=workers)
    new_words = create_new_words(u, matches, first,
                                 stream(config.seed, t, ROLE_FIXES), d, config)
    new_matches = match_words(u, new_words, config)
    combined = matches + new_matches
    second = parse(u, combined, (config.seed, t, ROLE_REPARSE), config,
                   workers=workers)
    cooled = cool_words(combined, second, config)
    added = add_cooled_words(new_matches, d, cooled)
    gc_deleted = []
    if t % config.gc_period == 0:
        gc_deleted = garbage_collect(d, stream(config.seed, t, ROLE_GC), config)
    reduced = []
    if t % config.reduce_period == 0:
        reduced = reduce_dictionary(d, config)
    return UtteranceResult(first, second, matches, new_matches, new_words,
                           cooled, added, gc_deleted, reduced)


def train(corpus, config: LearnerConfig, symbols: Symbols, *,
          trace: bool = False, on_utterance=None,
          workers: int = 1) -> tuple[Dictionary, TrainStats]:
    """Run the learner over the corpus (config.epochs passes).

    Ends with one extra garbage-collection and reduction sweep so the
    returned dictionary is already pruned.  ``on_utterance(d, result)`` is
    called after every utterance when given.
    """
    d = Dictionary(symbols)
    stats = TrainStats(error_trace=[] if trace else None)
    for _ in range(config.epochs):
        for u in corpus:
            result = process_utterance(u, d, config, workers=workers)
            stats.utterances_processed += 1
            stats.words_created += len(result.new_words)
            stats.words_added += len(result.added_ids)
            stats.words_gc_deleted += len(result.gc_deleted)
            stats.words_reduced += len(result.reduced)
            if stats.error_trace is not None:
                stats.error_trace.append((result.first_parse.error,
                                          result.reparse.error, len(d)))
            if on_utterance is not None:
                on_utterance(d, result)
    stats.words_gc_deleted += len(
        garbage_collect(d, stream(config.seed, 0, ROLE_GC), config))
    stats.words_reduced += len(reduce_dictionary(d, config, key_tag=0))
    return d, stats
