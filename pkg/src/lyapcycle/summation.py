"""Compensated accumulation for the trace sums.

Reductions are blocked with a fixed block size: each block is summed by a
Kahan loop and the block partials are folded, again compensated, in block
order.  Because the block boundaries never depend on the worker count,
threaded and serial reductions produce bit-identical totals.
"""

from __future__ import annotations


class KahanSum:
    """Kahan compensated accumulator; works on any floating scalar type."""

    __slots__ = ("total", "compensation")

    def __init__(self, zero=0.0):
        self.total = zero
        self.compensation = zero

    def add(self, value):
        y = value - self.compensation
        t = self.total + y
        self.compensation = (t - self.total) - y
        self.total = t


def kahan_total(values, zero=0.0):
    """Compensated sum of an iterable, left to right."""
    acc = KahanSum(zero)
    for v in values:
        acc.add(v)
    return acc.total
