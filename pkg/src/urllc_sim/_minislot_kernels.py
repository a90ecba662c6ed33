"""Earliest-fit mini-slot placement kernel (numba-compiled when enabled)."""

from __future__ import annotations

from ._accel import accelerated


def _place_arrivals(min_start_sym, sizes, preemptable, occupied, out_start):
    """Place each arrival in the earliest free preemptable run of its size.

    min_start_sym[i] is the first symbol index whose start lies strictly
    after arrival i.  occupied is mutated; out_start[i] receives the start
    symbol of the placement or -1 when nothing fits inside the horizon.
    The blocker-skip keeps the scan linear in practice.
    """
    n_symbols = preemptable.shape[0]
    for i in range(min_start_sym.shape[0]):
        size = sizes[i]
        s = min_start_sym[i]
        placed = -1
        while s + size <= n_symbols:
            blocker = -1
            for t in range(s, s + size):
                if (not preemptable[t]) or occupied[t]:
                    blocker = t
                    break
            if blocker < 0:
                placed = s
                for t in range(s, s + size):
                    occupied[t] = True
                break
            s = blocker + 1
        out_start[i] = placed


place_arrivals_kernel = accelerated(_place_arrivals)
