"""Exact-match scoring of a learned dictionary against a gold lexicon.

Only entries that were ever used in a low-error parse (good_parse_count > 0)
are judged; the rest are transient hypotheses.  Precision is the fraction of
used entries whose (phonemes, sememes) content appears in gold, recall the
fraction of gold entries recovered among the used ones.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Dictionary, word_content_tokens
from .corpus import GoldLexicon


@dataclass
class EvalReport:
    learned_total: int
    learned_used: int
    exact_correct: int
    precision_used: float
    recall_gold: float
    # used entries not in gold, as (phoneme tokens, sorted sememe tokens)
    error_list: list[tuple[tuple[str, ...], tuple[str, ...]]]


def evaluate(d: Dictionary, gold: GoldLexicon) -> EvalReport:
    gold_set = gold.entry_set()
    used = {word_content_tokens(w, d.symbols)
            for w in d.live_words() if w.good_parse_count > 0}
    correct = used & gold_set
    errors = sorted((ph, tuple(sorted(sem))) for ph, sem in used - gold_set)
    # vacuously perfect when nothing was used / gold is empty
    precision = len(correct) / len(used) if used else 1.0
    recall = len(correct) / len(gold) if len(gold) else 1.0
    return EvalReport(len(d), len(used), len(correct), precision, recall, errors)


def format_report(report: EvalReport) -> str:
    lines = [
        f"learned_total\t{report.learned_total}",
        f"learned_used\t{report.learned_used}",
        f"exact_correct\t{report.exact_correct}",
        f"precision_used\t{report.precision_used:.4f}",
        f"recall_gold\t{report.recall_gold:.4f}",
    ]
    if report.error_list:
        lines.append("errors:")
        for ph, sem in report.error_list:
            lines.append(f"  {' '.join(ph)}\t{' '.join(sem)}")
    return "\n".join(lines) + "\n"
