"""Mismatch dissimilarities between records, record sets and histograms.

``d4`` counts matching mass, so larger means closer; for any histogram set
``d3(H, y) + d4(H, y) == r``.
"""
from __future__ import annotations

from collections.abc import Sequence

from .core import HistogramSet, Record


def delta(x, y) -> int:
    return 0 if x == y else 1


def d1(x: Record, y: Record) -> int:
    """Number of attributes on which ``x`` and ``y`` disagree."""
    if len(x) != len(y):
        raise ValueError(f"arity mismatch: {len(x)} vs {len(y)}")
    return sum(delta(a, b) for a, b in zip(x, y))


def d2(records: Sequence[Record], y: Record) -> float:
    """Mean ``d1`` between ``y`` and the members of ``records``."""
    if not records:
        raise ValueError("d2 needs a non-empty record set")
    return sum(d1(x, y) for x in records) / len(records)


def _check_total(H: HistogramSet) -> int:
    total = H.total
    if total < 1:
        raise ValueError("histogram set is empty (total 0)")
    return total


def d3(H: HistogramSet, y: Record) -> float:
    total = _check_total(H)
    mismatched = 0
    for h, yj in zip(H, y, strict=True):
        mismatched += sum(f * delta(v, yj) for v, f in h.items())
    return mismatched / total


def d4(H: HistogramSet, y: Record) -> float:
    """Frequency of the values ``y`` shares with ``H``, over the total.

    One lookup per attribute.
    """
    total = _check_total(H)
    matched = 0
    for h, yj in zip(H, y, strict=True):
        matched += h.frequency(yj)
    return matched / total
