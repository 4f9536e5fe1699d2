"""Scoring a learned dictionary against the reference vocabulary."""

import pytest

from lexlearn import (Dictionary, EvalReport, GoldLexicon, Symbols, evaluate,
                      format_report)


def _dict(entries):
    """entries: (phonemes, sememes, good_parse_count) triples."""
    sym = Symbols()
    d = Dictionary(sym)
    for phonemes, sememes, gpc in entries:
        d.upsert(d.mint([sym.phonemes.intern(c) for c in phonemes],
                        {sym.sememes.intern(s) for s in sememes}, 0.5,
                        good_parse_count=gpc))
    return d


GOLD = GoldLexicon([(("a", "b"), frozenset({"S00"})),
                    (("c", "d"), frozenset({"S01"})),
                    (("e", "f"), frozenset({"S02"}))])


def test_counts_and_ratios():
    d = _dict([
        ("ab", ["S00"], 4),   # correct, used
        ("cd", ["S01"], 1),   # correct, used
        ("ef", ["S02"], 0),   # correct but never earned a good parse
        ("zz", ["S00"], 2),   # wrong, used
        ("qq", ["S09"], 0),   # wrong, unused
    ])
    rep = evaluate(d, GOLD)
    assert rep.learned_total == 5
    assert rep.learned_used == 3
    assert rep.exact_correct == 2
    assert rep.precision_used == pytest.approx(2 / 3)
    assert rep.recall_gold == pytest.approx(2 / 3)
    assert rep.error_list == [(("z", "z"), ("S00",))]


def test_exact_content_match_required():
    d = _dict([
        ("ab", ["S00", "S01"], 3),  # extra sememe: not the gold entry
        ("abx", ["S00"], 3),        # extra phoneme: not the gold entry
    ])
    rep = evaluate(d, GOLD)
    assert rep.exact_correct == 0
    assert rep.precision_used == 0.0
    assert rep.recall_gold == 0.0


def test_unused_entries_do_not_hurt_precision():
    d = _dict([("ab", ["S00"], 1), ("junk", ["S05"], 0)])
    rep = evaluate(d, GOLD)
    assert rep.precision_used == 1.0
    assert rep.recall_gold == pytest.approx(1 / 3)


def test_vacuous_cases_score_perfect():
    rep = evaluate(_dict([]), GOLD)
    assert rep.precision_used == 1.0  # nothing used, nothing wrong
    assert rep.recall_gold == 0.0
    empty_gold = evaluate(_dict([("ab", ["S00"], 1)]), GoldLexicon([]))
    assert empty_gold.recall_gold == 1.0  # nothing to recall
    assert empty_gold.precision_used == 0.0


def test_format_report_layout():
    d = _dict([("ab", ["S00"], 1), ("zz", ["S03"], 1)])
    text = format_report(evaluate(d, GOLD))
    lines = text.splitlines()
    assert "learned_total\t2" in lines
    assert "learned_used\t2" in lines
    assert "exact_correct\t1" in lines
    assert any(line.startswith("precision_used\t0.5000") for line in lines)
    assert any(line.startswith("recall_gold\t0.3333") for line in lines)
    assert any("z z" in line and "S03" in line for line in lines)
