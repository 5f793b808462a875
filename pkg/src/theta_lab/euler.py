"""Reduced Euler characteristics of theta complexes without listing faces.

A face of the theta complex is a set missing some hyperedge, so the
non-faces are exactly the transversals (sets meeting every hyperedge), and

    chi~(theta(H)) = sum over transversals T of (-1)^|T|
                   = sum over hyperedge families F with union V of (-1)^|F|.

``subset_scan`` evaluates the first sum by a Gray-code walk over all
subsets; ``union_dp`` evaluates the second by a frontier dynamic program
over hyperedges.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from math import comb

import numpy as np

from .complex import enumerate_faces
from .errors import DomainError, ResourceError
from .faces import DEFAULT_FACE_CAP
from .hypergraph import Hypergraph, isolated_vertices, minimalize

log = logging.getLogger(__name__)

METHODS = ("auto", "subset_scan", "union_dp")
DEFAULT_MAX_STATES = 1 << 25
DEFAULT_MAX_SUBSETS = 1 << 34
_INT64_SAFE = float(2**62)
_SCAN_CHUNK = 1 << 24


def _popcount(x):
    return bin(x).count("1")


# ------------------------------------------------------------- union DP


def _edge_order(m, masks):
    """Greedy hyperedge order that keeps the set of half-processed vertices small."""
    left = [0] * m
    for e in masks:
        for v in range(m):
            if (e >> v) & 1:
                left[v] += 1
    single = sum(1 << v for v in range(m) if left[v] == 1)
    active = 0
    remaining = list(range(len(masks)))
    order = []
    while remaining:
        best = min(
            remaining,
            key=lambda i: (
                _popcount(masks[i] & ~active) - _popcount(masks[i] & single),
                _popcount(masks[i] & ~active),
                i,
            ),
        )
        remaining.remove(best)
        order.append(best)
        e = masks[best]
        active |= e
        for v in range(m):
            if (e >> v) & 1:
                left[v] -= 1
                if left[v] == 0:
                    active &= ~(1 << v)
                    single &= ~(1 << v)
                elif left[v] == 1:
                    single |= 1 << v
    return order


def _plan(m, masks):
    """Per step: (edge slot mask, retiring slot mask), plus the peak slot count."""
    order = _edge_order(m, masks)
    last = {}
    for pos, i in enumerate(order):
        for v in range(m):
            if (masks[i] >> v) & 1:
                last[v] = pos
    slot_of = {}
    free = []
    next_slot = 0
    steps = []
    for pos, i in enumerate(order):
        e = masks[i]
        emask = 0
        for v in range(m):
            if (e >> v) & 1:
                if v not in slot_of:
                    if free:
                        slot_of[v] = free.pop()
                    else:
                        slot_of[v] = next_slot
                        next_slot += 1
                emask |= 1 << slot_of[v]
        retire = 0
        for v in range(m):
            if (e >> v) & 1 and last[v] == pos:
                retire |= 1 << slot_of[v]
                free.append(slot_of.pop(v))
        steps.append((emask, retire))
    return steps, next_slot


def _union_dp_numpy(steps, max_states):
    masks = np.zeros(1, dtype=np.uint64)
    counts = np.ones(1, dtype=np.int64)
    peak = 1
    for emask, retire in steps:
        e = np.uint64(emask)
        nm = np.concatenate([masks, masks | e])
        nc = np.concatenate([counts, -counts])
        if retire:
            r = np.uint64(retire)
            keep = (nm & r) == r
            nm = nm[keep] & ~r
            nc = nc[keep]
        order = np.argsort(nm, kind="stable")
        nm = nm[order]
        nc = nc[order]
        if len(nm) == 0:
            return 0, peak
        starts = np.flatnonzero(np.concatenate([[True], nm[1:] != nm[:-1]]))
        if nc.dtype != object:
            bound = np.add.reduceat(np.abs(nc).astype(np.float64), starts).max()
            if bound >= _INT64_SAFE:
                nc = nc.astype(object)
        masks = nm[starts]
        counts = np.add.reduceat(nc, starts)
        nz = counts != 0
        masks = masks[nz]
        counts = counts[nz]
        peak = max(peak, len(masks))
        if len(masks) > max_states:
            raise ResourceError(
                f"union_dp state count {len(masks)} exceeds budget {max_states}; "
                "try method='subset_scan'"
            )
    return int(counts[masks == 0].sum()), peak


def _union_dp_dict(steps, max_states):
    states = {0: 1}
    peak = 1
    for emask, retire in steps:
        nxt = {}
        for mask, c in states.items():
            for new, sign in ((mask, c), (mask | emask, -c)):
                if new & retire != retire:
                    continue
                new &= ~retire
                nxt[new] = nxt.get(new, 0) + sign
        states = {k: v for k, v in nxt.items() if v}
        peak = max(peak, len(states))
        if len(states) > max_states:
            raise ResourceError(
                f"union_dp state count {len(states)} exceeds budget {max_states}; "
                "try method='subset_scan'"
            )
    return states.get(0, 0), peak


def union_dp(H, max_states=DEFAULT_MAX_STATES):
    """Signed count of covering hyperedge families (equals chi~ of theta)."""
    # theta only sees minimal hyperedges, and dropping the others can
    # leave a vertex uncovered
    H = minimalize(H)
    if isolated_vertices(H):
        return 0
    masks = list(H.masks)
    steps, width = _plan(H.vertex_count, masks)
    engine = _union_dp_numpy if width <= 64 else _union_dp_dict
    value, peak = engine(steps, max_states)
    log.debug("union_dp: %d steps, frontier width %d, peak states %d", len(steps), width, peak)
    return value


# ---------------------------------------------------------- subset scan

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


def _gray_scan_py(m, vptr, vedges, nedges, start, stop):
    cnt = np.zeros(nedges, dtype=np.int64)
    g = start ^ (start >> 1)
    size = 0
    for v in range(m):
        if (g >> v) & 1:
            size += 1
            for t in range(vptr[v], vptr[v + 1]):
                cnt[vedges[t]] += 1
    uncovered = 0
    for e in range(nedges):
        if cnt[e] == 0:
            uncovered += 1
    total = 0
    if uncovered == 0:
        total += 1 if size % 2 == 0 else -1
    for i in range(start + 1, stop):
        v = 0
        while not (i >> v) & 1:
            v += 1
        if (g >> v) & 1:
            size -= 1
            for t in range(vptr[v], vptr[v + 1]):
                e = vedges[t]
                cnt[e] -= 1
                if cnt[e] == 0:
                    uncovered += 1
        else:
            size += 1
            for t in range(vptr[v], vptr[v + 1]):
                e = vedges[t]
                if cnt[e] == 0:
                    uncovered -= 1
                cnt[e] += 1
        g ^= 1 << v
        if uncovered == 0:
            total += 1 if size % 2 == 0 else -1
    return total


if njit is not None:
    _gray_scan = njit(cache=True, nogil=True)(_gray_scan_py)
else:  # pragma: no cover
    _gray_scan = _gray_scan_py


def subset_scan(H, workers=1, max_subsets=DEFAULT_MAX_SUBSETS):
    """Signed count of transversals by a Gray-code walk over all subsets."""
    m = H.vertex_count
    if m > 62:
        raise ResourceError("subset_scan handles at most 62 vertices; try method='union_dp'")
    if (1 << m) > max_subsets:
        raise ResourceError(
            f"subset_scan would visit 2^{m} subsets (budget {max_subsets}); "
            "try method='union_dp'"
        )
    masks = minimalize(H).masks
    incident = [[i for i, e in enumerate(masks) if (e >> v) & 1] for v in range(m)]
    vptr = np.zeros(m + 1, dtype=np.int64)
    vptr[1:] = np.cumsum([len(x) for x in incident])
    vedges = np.array([i for x in incident for i in x], dtype=np.int64)
    total = 1 << m
    # fixed-size pieces: the sum does not depend on the worker count, and
    # control returns to Python between pieces so signals get handled
    chunks = [(lo, min(lo + _SCAN_CHUNK, total)) for lo in range(0, total, _SCAN_CHUNK)]
    workers = max(1, int(workers))

    def run(chunk):
        return int(_gray_scan(m, vptr, vedges, len(masks), chunk[0], chunk[1]))

    if workers == 1 or len(chunks) == 1:
        return sum(run(c) for c in chunks)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(run, chunks))


# ------------------------------------------------------------ front door


def reduced_euler_theta(
    H: Hypergraph,
    method="auto",
    workers=1,
    max_states=DEFAULT_MAX_STATES,
    max_subsets=DEFAULT_MAX_SUBSETS,
):
    """Exact reduced Euler characteristic of ``theta(H)``."""
    if method not in METHODS:
        raise DomainError(f"method must be one of {METHODS}")
    if not H.hyperedges:
        raise DomainError("theta is undefined for a hypergraph without hyperedges")
    if method == "union_dp":
        return union_dp(H, max_states)
    if method == "subset_scan":
        return subset_scan(H, workers, max_subsets)
    if isolated_vertices(H):
        return 0
    if H.vertex_count <= 16:
        return subset_scan(H, workers, max_subsets)
    try:
        return union_dp(H, max_states)
    except ResourceError:
        if H.vertex_count > 40:
            raise
        log.info("union_dp over budget, falling back to subset_scan")
        return subset_scan(H, workers, max_subsets)


def resolve_method(H, method):
    """The concrete method ``auto`` would use first (for reporting)."""
    if method != "auto":
        return method
    return "subset_scan" if H.vertex_count <= 16 else "union_dp"


def euler_record(family, params, H, method="auto", **kwargs):
    start = time.perf_counter()
    value = reduced_euler_theta(H, method=method, **kwargs)
    return {
        "family": family,
        "params": list(params),
        "chi_reduced": value,
        "chi": value + 1,
        "method": resolve_method(H, method),
        "seconds": round(time.perf_counter() - start, 3),
    }


def reduced_euler_bruteforce(X, cap=DEFAULT_FACE_CAP):
    """``-1 + f_0 - f_1 + ...`` from an explicit face enumeration."""
    return int(enumerate_faces(X, cap).reduced_euler())


def theta_f_vector(H, max_vertices=24):
    """f-vector of ``theta(H)`` from transversal counts over all subsets.

    ``f_k = C(m, k+1) - #{transversals of size k+1}``; independent of the
    face-table machinery.
    """
    m = H.vertex_count
    if m > max_vertices:
        raise ResourceError(f"theta_f_vector scans 2^m subsets; m={m} > {max_vertices}")
    if not H.hyperedges:
        raise DomainError("theta is undefined for a hypergraph without hyperedges")
    subsets = np.arange(1 << m, dtype=np.int64)
    transversal = np.ones(1 << m, dtype=bool)
    for e in H.masks:
        transversal &= (subsets & e) != 0
    sizes = np.zeros(1 << m, dtype=np.int64)
    for v in range(m):
        sizes += (subsets >> v) & 1
    t = np.bincount(sizes[transversal], minlength=m + 1)
    f = [comb(m, k) - int(t[k]) for k in range(m + 1)]
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def conjecture_value(n):
    """``(2n-3)!!``, the conjectured chi~ of theta(Cube(n, n-2)). A prediction."""
    if n < 2:
        raise DomainError("conjecture_value needs n >= 2")
    out = 1
    for j in range(2 * n - 3, 0, -2):
        out *= j
    return out


def engstrom_bound(m, d):
    """``floor((m-1)/(2d) - 1)``: connectivity lower bound for I(G)."""
    if m < 1 or d < 1:
        raise DomainError("engstrom_bound needs m >= 1 and d >= 1")
    return (m - 1) // (2 * d) - 1
