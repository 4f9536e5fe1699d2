"""Core domain types: symbol interning, utterances, words, and the dictionary.

An utterance pairs an unsegmented phoneme sequence with an unordered bag of
sememes (semantic tokens, possibly repeated).  A word is a hypothesis pairing
a phoneme sequence with a sememe set, carrying a temperature in [0, 1] that
expresses how unsettled the hypothesis still is (1 = freshly guessed,
near 0 = frozen).  The dictionary is the mutable set of current hypotheses.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, fields

import numpy as np


class LexlearnError(Exception):
    """Base class for errors raised by this package."""


class InputError(LexlearnError):
    """Rejected input value (empty phoneme sequence, bad token, ...)."""


class FormatError(LexlearnError):
    """Malformed file content; carries a line number when one is known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ConfigError(LexlearnError):
    """Invalid configuration value or unknown configuration key."""


class GenerationError(LexlearnError):
    """Synthetic corpus generation cannot satisfy its constraints."""


class OracleCapacityError(LexlearnError):
    """Brute-force oracle asked to enumerate too many activation vectors."""


class SymbolTable:
    """Bijective mapping between string tokens and dense integer ids."""

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._tokens: list[str] = []

    def intern(self, token: str) -> int:
        """Return the id for a token, assigning the next free id if new."""
        sid = self._ids.get(token)
        if sid is not None:
            return sid
        if not token or any(ch.isspace() for ch in token):
            raise InputError(f"bad symbol token: {token!r}")
        sid = len(self._tokens)
        self._ids[token] = sid
        self._tokens.append(token)
        return sid

    def token(self, sid: int) -> str:
        return self._tokens[sid]

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._ids


class Symbols:
    """Paired interning tables for phonemes and sememes."""

    def __init__(self):
        self.phonemes = SymbolTable()
        self.sememes = SymbolTable()


@dataclass(frozen=True)
class Utterance:
    """One input observation.

    ``sememe_ids`` lists the distinct sememes in order of first appearance;
    ``sememe_counts`` gives each one's multiplicity in the bag.  That order
    fixes the slot indexing used by match vectors and parse residuals.
    """

    phonemes: tuple[int, ...]
    sememe_ids: tuple[int, ...]
    sememe_counts: tuple[int, ...]
    source_line: str | None = None

    def __post_init__(self):
        if not self.phonemes:
            raise InputError("utterance needs at least one phoneme")
        if len(self.sememe_ids) != len(self.sememe_counts):
            raise InputError("sememe ids and counts must align")
        if len(set(self.sememe_ids)) != len(self.sememe_ids):
            raise InputError("sememe ids must be distinct")
        if any(c < 1 for c in self.sememe_counts):
            raise InputError("sememe multiplicities must be >= 1")

    @property
    def bag(self) -> dict[int, int]:
        """Sememe id -> multiplicity."""
        return dict(zip(self.sememe_ids, self.sememe_counts))


def make_utterance(phoneme_tokens, sememe_tokens, symbols: Symbols,
                   source_line: str | None = None) -> Utterance:
    """Intern token sequences into an Utterance.

    Repeated sememe tokens accumulate multiplicity; distinct sememes keep
    their order of first appearance.
    """
    phoneme_tokens = list(phoneme_tokens)
    if not phoneme_tokens:
        raise InputError("empty phoneme sequence")
    ph = tuple(symbols.phonemes.intern(t) for t in phoneme_tokens)
    counts = Counter(symbols.sememes.intern(t) for t in sememe_tokens)
    return Utterance(ph, tuple(counts.keys()), tuple(counts.values()),
                     source_line=source_line)


def semantic_target(u: Utterance) -> np.ndarray:
    """Multiplicity target vector over the utterance's distinct sememes."""
    return np.array(u.sememe_counts, dtype=float)


@dataclass(eq=False)
class Word:
    """A lexical hypothesis. ``stable_id`` orders words deterministically."""

    phonemes: tuple[int, ...]
    sememes: frozenset[int]
    temperature: float
    created_at: int
    stable_id: int
    good_parse_count: int = 0

    @property
    def content(self) -> tuple[tuple[int, ...], frozenset[int]]:
        return (self.phonemes, self.sememes)


def _check_word(word: Word) -> None:
    if not word.phonemes:
        raise InputError("word needs at least one phoneme")
    if not word.sememes:
        raise InputError("semanticless word rejected")
    if not 0.0 <= word.temperature <= 1.0:
        raise InputError(f"temperature out of [0, 1]: {word.temperature}")


class Dictionary:
    """Mutable store of word hypotheses, keyed by stable id.

    Content (phonemes, sememes) is unique across live words; upserting a
    duplicate is a no-op.  The phoneme index maps each phoneme id to the
    words containing it and only serves to narrow match candidates.
    """

    def __init__(self, symbols: Symbols):
        self.symbols = symbols
        self.words: dict[int, Word] = {}
        self.utterance_counter = 0
        self._by_content: dict[tuple, int] = {}
        self._phoneme_index: dict[int, set[int]] = {}
        self._next_id = 0

    def mint(self, phonemes, sememes, temperature: float,
             good_parse_count: int = 0, created_at: int | None = None) -> Word:
        """Allocate a Word with a fresh stable id, without inserting it."""
        if created_at is None:
            created_at = self.utterance_counter
        word = Word(tuple(phonemes), frozenset(sememes), temperature,
                    created_at, self._next_id, good_parse_count)
        _check_word(word)
        self._next_id += 1
        return word

    def upsert(self, word: Word) -> bool:
        """Insert a word; returns False (and changes nothing) on duplicate content."""
        _check_word(word)
        if word.content in self._by_content:
            return False
        if word.stable_id in self.words:
            raise InputError(f"stable id {word.stable_id} already live")
        self.words[word.stable_id] = word
        self._by_content[word.content] = word.stable_id
        for p in set(word.phonemes):
            self._phoneme_index.setdefault(p, set()).add(word.stable_id)
        return True

    def remove(self, stable_id: int) -> Word:
        word = self.words.pop(stable_id)
        del self._by_content[word.content]
        for p in set(word.phonemes):
            bucket = self._phoneme_index[p]
            bucket.discard(stable_id)
            if not bucket:
                del self._phoneme_index[p]
        return word

    def live_words(self) -> list[Word]:
        """All words, in stable-id order."""
        return [self.words[i] for i in sorted(self.words)]

    def contains_content(self, phonemes, sememes) -> bool:
        return (tuple(phonemes), frozenset(sememes)) in self._by_content

    def candidate_words(self, u: Utterance) -> list[Word]:
        """Words sharing at least one phoneme with the utterance.

        Any match that can survive filtering has at least one aligned
        phoneme hit, so this narrowing never drops a retainable match.
        """
        ids: set[int] = set()
        for p in set(u.phonemes):
            ids.update(self._phoneme_index.get(p, ()))
        return [self.words[i] for i in sorted(ids)]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, stable_id: int) -> bool:
        return stable_id in self.words


@dataclass
class LearnerConfig:
    """All learner knobs, with the committed defaults."""

    # parse error weights: underparsed phonemes / sememes, overparsed
    # (mismatched) word phonemes / sememes
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 2.0
    c4: float = 2.0
    # penalty bump height; rewards committing residuals to 0 or 1
    epsilon: float = 0.25
    # residual above this counts as underparsed, below minus it as overparsed
    delta_threshold: float = 0.5
    # match filter
    match_max_mismatch: int = 1
    match_min_coverage: float = 0.5
    # projected gradient descent
    learning_rate: float = 0.1
    max_iterations: int = 300
    convergence_tol: float = 1e-4
    restarts: int = 3
    # cooling
    activation_threshold: float = 0.8
    neighbor_threshold: float = 0.3
    cooling_kappa: float = 0.5
    cooling_e0: float = 1.0
    initial_temperature: float = 0.95
    good_parse_norm_threshold: float = 0.05
    # lifecycle
    trial_period: int = 200
    gc_period: int = 50
    reduce_period: int = 500
    reduce_error_threshold: float = 0.05
    # hypothesis limits
    max_new_word_len: int = 7
    max_extension_len: int = 2
    # when set, fix trials fire whenever their probability is positive
    # (test mode); otherwise they are Bernoulli draws
    force_fix_trials: bool = False
    epochs: int = 1
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for name in ("c1", "c2", "c3", "c4", "epsilon"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        for name in ("delta_threshold", "match_min_coverage",
                     "activation_threshold", "neighbor_threshold",
                     "good_parse_norm_threshold"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1)")
        if not 0.0 < self.initial_temperature <= 1.0:
            raise ConfigError("initial_temperature must lie in (0, 1]")
        if not 0.0 <= self.cooling_kappa < 1.0:
            raise ConfigError("cooling_kappa must lie in [0, 1)")
        if self.cooling_e0 <= 0:
            raise ConfigError("cooling_e0 must be > 0")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be > 0")
        if self.convergence_tol <= 0:
            raise ConfigError("convergence_tol must be > 0")
        for name in ("trial_period", "gc_period", "reduce_period",
                     "max_iterations", "restarts", "max_new_word_len",
                     "epochs"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        for name in ("match_max_mismatch", "max_extension_len", "seed"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.reduce_error_threshold <= 0:
            raise ConfigError("reduce_error_threshold must be > 0")


def config_field_names() -> list[str]:
    return [f.name for f in fields(LearnerConfig)]


def word_content_tokens(word: Word, symbols: Symbols):
    """(phoneme tokens, sememe token set) for a word."""
    ph = tuple(symbols.phonemes.token(p) for p in word.phonemes)
    sem = frozenset(symbols.sememes.token(s) for s in word.sememes)
    return ph, sem


def dumps_dictionary(d: Dictionary) -> str:
    """Serialize a dictionary.

    One word per line, tab-separated: temperature (6 decimal places),
    space-joined phoneme tokens, space-joined sememe tokens (sorted),
    good_parse_count, created_at.  Lines are ordered by descending
    good_parse_count, then phonemes, then sememes, so equal states
    serialize to identical bytes.
    """
    rows = []
    for w in d.live_words():
        ph = tuple(d.symbols.phonemes.token(p) for p in w.phonemes)
        sem = tuple(sorted(d.symbols.sememes.token(s) for s in w.sememes))
        rows.append((-w.good_parse_count, ph, sem, w))
    rows.sort(key=lambda r: r[:3])
    lines = []
    for _, ph, sem, w in rows:
        lines.append(f"{w.temperature:.6f}\t{' '.join(ph)}\t{' '.join(sem)}"
                     f"\t{w.good_parse_count}\t{w.created_at}")
    return "".join(line + "\n" for line in lines)


def dump_dictionary(d: Dictionary, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_dictionary(d))


def load_dictionary(path, symbols: Symbols) -> Dictionary:
    """Load a dictionary dump; format errors carry their line number."""
    d = Dictionary(symbols)
    with open(path, encoding="utf-8") as f:
        for line_no, raw in enumerate(f, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise FormatError("expected 5 tab-separated fields", line_no)
            try:
                temp = float(parts[0])
                gpc = int(parts[3])
                created = int(parts[4])
            except ValueError as exc:
                raise FormatError(str(exc), line_no) from exc
            if not 0.0 <= temp <= 1.0:
                raise FormatError("temperature out of [0, 1]", line_no)
            if gpc < 0 or created < 0:
                raise FormatError("counters must be >= 0", line_no)
            ph_tokens = parts[1].split()
            sem_tokens = parts[2].split()
            if not ph_tokens:
                raise FormatError("empty phoneme field", line_no)
            if not sem_tokens:
                raise FormatError("empty sememe field", line_no)
            word = d.mint((symbols.phonemes.intern(t) for t in ph_tokens),
                          (symbols.sememes.intern(t) for t in sem_tokens),
                          temp, good_parse_count=gpc, created_at=created)
            if not d.upsert(word):
                raise FormatError("duplicate dictionary entry", line_no)
    d.utterance_counter = max((w.created_at for w in d.live_words()), default=0)
    return d
