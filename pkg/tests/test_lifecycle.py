"""Cooling, admission of cooled candidates, garbage collection, reduction."""

import math

import numpy as np
import pytest

from lexlearn import (Dictionary, LearnerConfig, ParseResult, Symbols,
                      add_cooled_words, cool_words, cooling_factor,
                      garbage_collect, make_utterance, reduce_dictionary)
from lexlearn.lifecycle import REDUCIBLE_TEMPERATURE
from lexlearn.matching import match_words

from helpers import build_word


def presult(activations, delta_p, delta_s, error):
    return ParseResult(error, np.asarray(activations, float),
                       np.asarray(delta_p, float),
                       np.asarray(delta_s, float))


class TestCoolingFactor:
    def test_perfect_parse_cools_hardest(self):
        cfg = LearnerConfig()
        assert cooling_factor(0.0, cfg) == pytest.approx(1 - cfg.cooling_kappa)

    def test_factor_rises_with_error(self):
        cfg = LearnerConfig()
        es = [0.0, 0.5, 1.0, 5.0]
        fs = [cooling_factor(e, cfg) for e in es]
        assert fs == sorted(fs)
        assert fs[-1] < 1.0
        assert cooling_factor(0.5, cfg) == pytest.approx(
            1 - 0.5 * math.exp(-0.5))


class TestCoolWords:
    def setup_method(self):
        self.sym = Symbols()
        self.cfg = LearnerConfig()
        self.u = make_utterance("abcd", ["X", "Y"], self.sym)

    def _match(self, phonemes, sememes, temperature=0.8, stable_id=0):
        w = build_word(self.sym, phonemes, sememes,
                       temperature=temperature, stable_id=stable_id)
        ms = match_words(self.u, [w], self.cfg)
        assert len(ms) == 1
        return ms[0]

    def test_clean_interior_match_cools_and_scores(self):
        m = self._match("ab", ["X"])
        res = presult([1.0], [0, 0, 0, 0], [0, 0], 0.0)
        cooled = cool_words([m], res, self.cfg)
        assert cooled == {m.word.stable_id}
        assert m.word.temperature == pytest.approx(
            0.8 * (1 - self.cfg.cooling_kappa))
        assert m.word.good_parse_count == 1

    def test_noisy_parse_cools_without_scoring(self):
        m = self._match("ab", ["X"])
        # residue far from the word; its immediate neighbor stays quiet
        res = presult([1.0], [0, 0, 0.2, 0.9], [0, 0], 2.0)
        cooled = cool_words([m], res, self.cfg)
        assert cooled and m.word.good_parse_count == 0
        assert m.word.temperature == pytest.approx(
            0.8 * cooling_factor(2.0, self.cfg))

    def test_mismatched_word_never_cools(self):
        m = self._match("az", ["X"])  # pm_bar = 1
        res = presult([1.0], [0, 0, 0, 0], [0, 0], 0.0)
        assert cool_words([m], res, self.cfg) == set()
        assert m.word.temperature == 0.8

    def test_stray_sememe_blocks_cooling(self):
        m = self._match("ab", ["X", "Z"])  # Z not in bag
        res = presult([1.0], [0, 0, 0, 0], [0, 0], 0.0)
        assert cool_words([m], res, self.cfg) == set()

    def test_weak_activation_blocks_cooling(self):
        m = self._match("ab", ["X"])
        res = presult([0.8], [0, 0, 0, 0], [0, 0], 0.0)  # not strictly above
        assert cool_words([m], res, self.cfg) == set()

    def test_hot_neighbor_blocks_cooling(self):
        m = self._match("bc", ["X"])  # interior: neighbors at 0 and 3
        ok = presult([1.0], [0.2, 0, 0, 0.2], [0, 0], 0.5)
        assert cool_words([m], ok, self.cfg)
        m2 = self._match("bc", ["X"], stable_id=1)
        left_hot = presult([1.0], [0.3, 0, 0, 0.2], [0, 0], 0.5)
        assert cool_words([m2], left_hot, self.cfg) == set()
        m3 = self._match("bc", ["X"], stable_id=2)
        right_hot = presult([1.0], [0.2, 0, 0, 0.3], [0, 0], 0.5)
        assert cool_words([m3], right_hot, self.cfg) == set()

    def test_utterance_edges_count_as_quiet(self):
        m = self._match("abcd", ["X"])  # flush with both edges
        res = presult([1.0], [0, 0, 0, 0], [0, 0], 0.0)
        assert cool_words([m], res, self.cfg) == {m.word.stable_id}

    def test_temperature_never_rises(self):
        m = self._match("ab", ["X"])
        res = presult([1.0], [0, 0, 0, 0], [0, 0], 50.0)  # terrible parse
        cool_words([m], res, self.cfg)
        assert m.word.temperature <= 0.8


class TestAddCooledWords:
    def test_only_cooled_and_absent_words_enter(self):
        sym = Symbols()
        d = Dictionary(sym)
        u = make_utterance("abcd", ["X", "Y"], sym)
        cfg = LearnerConfig()
        fresh = [d.mint([sym.phonemes.intern(c) for c in "ab"],
                        {sym.sememes.intern("X")}, 0.9),
                 d.mint([sym.phonemes.intern(c) for c in "cd"],
                        {sym.sememes.intern("Y")}, 0.9)]
        ms = match_words(u, fresh, cfg)
        added = add_cooled_words(ms, d, cooled={fresh[0].stable_id})
        assert added == [fresh[0].stable_id]
        assert len(d) == 1
        # repeat admission is a no-op: the id is already live
        assert add_cooled_words(ms, d, cooled={fresh[0].stable_id}) == []

    def test_content_duplicates_fall_out(self):
        sym = Symbols()
        d = Dictionary(sym)
        cfg = LearnerConfig()
        u = make_utterance("ab", ["X"], sym)
        live = d.mint([sym.phonemes.intern(c) for c in "ab"],
                      {sym.sememes.intern("X")}, 0.5)
        d.upsert(live)
        twin = d.mint([sym.phonemes.intern(c) for c in "ab"],
                      {sym.sememes.intern("X")}, 0.9)
        ms = match_words(u, [twin], cfg)
        assert add_cooled_words(ms, d, cooled={twin.stable_id}) == []
        assert len(d) == 1


class TestGarbageCollect:
    def _dictionary(self, temps, created_at=0):
        sym = Symbols()
        d = Dictionary(sym)
        for i, t in enumerate(temps):
            d.upsert(d.mint((sym.phonemes.intern(f"p{i}"),),
                            {sym.sememes.intern(f"S{i}")}, t,
                            created_at=created_at))
        return d

    def test_words_in_trial_period_are_safe(self):
        cfg = LearnerConfig()
        d = self._dictionary([1.0, 1.0], created_at=0)
        d.utterance_counter = cfg.trial_period  # age == trial period: safe
        rng = np.random.default_rng(0)
        assert garbage_collect(d, rng, cfg) == []
        assert len(d) == 2

    def test_hot_words_eventually_die(self):
        cfg = LearnerConfig()
        d = self._dictionary([1.0, 1.0])
        d.utterance_counter = cfg.trial_period + 1
        deleted = garbage_collect(d, np.random.default_rng(0), cfg)
        assert deleted == [0, 1]  # p = 1: certain deletion, stable-id order
        assert len(d) == 0

    def test_frozen_words_survive(self):
        cfg = LearnerConfig()
        d = self._dictionary([0.0, 1.0])
        d.utterance_counter = 10_000
        garbage_collect(d, np.random.default_rng(1), cfg)
        assert [w.stable_id for w in d.live_words()] == [0]

    def test_same_generator_state_same_outcome(self):
        cfg = LearnerConfig()
        outcomes = []
        for _ in range(2):
            d = self._dictionary([0.5, 0.5, 0.5, 0.5])
            d.utterance_counter = 1_000
            outcomes.append(garbage_collect(d, np.random.default_rng(42), cfg))
        assert outcomes[0] == outcomes[1]


class TestReduce:
    def _seeded(self):
        sym = Symbols()
        d = Dictionary(sym)
        cfg = LearnerConfig()

        def add(phonemes, sememes, temp):
            w = d.mint([sym.phonemes.intern(c) for c in phonemes],
                       {sym.sememes.intern(s) for s in sememes}, temp)
            d.upsert(w)
            return w

        return sym, d, cfg, add

    def test_expressible_composite_is_deleted(self):
        sym, d, cfg, add = self._seeded()
        add("ab", ["X"], 0.0)
        add("cd", ["Y"], 0.0)
        composite = add("abcd", ["X", "Y"], 0.05)
        deleted = reduce_dictionary(d, cfg)
        assert deleted == [composite.stable_id]
        assert len(d) == 2

    def test_warm_composite_is_not_considered(self):
        sym, d, cfg, add = self._seeded()
        add("ab", ["X"], 0.0)
        add("cd", ["Y"], 0.0)
        add("abcd", ["X", "Y"], REDUCIBLE_TEMPERATURE)  # not strictly below
        assert reduce_dictionary(d, cfg) == []

    def test_unique_content_survives(self):
        sym, d, cfg, add = self._seeded()
        add("ab", ["X"], 0.0)
        add("cd", ["Y"], 0.0)
        assert reduce_dictionary(d, cfg) == []
        assert len(d) == 2

    def test_semantic_mismatch_protects(self):
        sym, d, cfg, add = self._seeded()
        add("ab", ["X"], 0.0)
        add("cd", ["Y"], 0.0)
        # phonemes are expressible but the sememe Z is not
        survivor = add("abcd", ["X", "Z"], 0.05)
        assert reduce_dictionary(d, cfg) == []
        assert survivor.stable_id in d

    def test_second_pass_is_a_fixpoint(self):
        sym, d, cfg, add = self._seeded()
        add("ab", ["X"], 0.0)
        add("cd", ["Y"], 0.0)
        add("abcd", ["X", "Y"], 0.05)
        assert reduce_dictionary(d, cfg, key_tag=0) != []
        assert reduce_dictionary(d, cfg, key_tag=0) == []

    def test_longest_candidates_go_first(self):
        sym, d, cfg, add = self._seeded()
        add("ab", ["X"], 0.0)
        add("cd", ["Y"], 0.0)
        add("ef", ["Z"], 0.0)
        short = add("abcd", ["X", "Y"], 0.05)
        longer = add("abcdef", ["X", "Y", "Z"], 0.05)
        deleted = reduce_dictionary(d, cfg, key_tag=0)
        # the longer composite is probed (and removed) before the shorter
        assert deleted == [longer.stable_id, short.stable_id]
