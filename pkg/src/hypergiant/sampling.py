"""Exact sampling of random d-uniform hypergraphs.

A hypergraph sample is drawn in two phases: first the edge count
M ~ Binomial(C(n, d), p) by inversion of the exact probability mass
function, then M distinct d-subsets uniformly at random, rejecting
duplicates.  The two-phase draw has exactly the law of including each of the
C(n, d) candidate edges independently with probability p, because given the
count the present edges form a uniform subset of the candidates.

The binomial inversion never substitutes a Poisson approximation: the pmf at
the mode is evaluated through logarithms and the walk away from the mode
uses the exact multiplicative recurrence, so the draw is exact up to float
rounding of the pmf.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .rng import RngStream

__all__ = [
    "Hypergraph",
    "count_subsets",
    "log_count_subsets",
    "sample_binomial",
    "sample_k_subset",
    "sample_hypergraph",
    "write_hgr",
    "read_hgr",
]

# Above this mean the inversion walk would be unreasonably long; callers in
# this package stay far below.
_MAX_BINOMIAL_MEAN = 1e9


def count_subsets(n: int, k: int) -> int:
    """Exact number of k-subsets of an n-set.

    Total function: returns 0 whenever k < 0, n < 0 or k > n.  Python
    integers are unbounded so the result is exact at any size.
    """
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def log_count_subsets(n: int, k: int) -> float:
    """Natural log of C(n, k); -inf when the count is zero.

    Companion to count_subsets for sizes where the exact integer would be
    wasteful to carry around.
    """
    if k < 0 or n < 0 or k > n:
        return float("-inf")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log_binom(n: int, m: int) -> float:
    """log C(n, m) computed stably for huge n and moderate m.

    Sums log(n - i) directly for m up to 1e5; beyond that uses the
    Euler-Maclaurin integral of log between the endpoints, whose relative
    error is far below float resolution for the n - m >> 1 cases that
    arise here.
    """
    m = min(m, n - m)
    if m < 0:
        return float("-inf")
    if m == 0:
        return 0.0
    if m <= 100_000:
        i = np.arange(m, dtype=np.float64)
        return float(np.sum(np.log(n - i))) - math.lgamma(m + 1)
    a, b = n - m + 0.5, n + 0.5
    integral = b * math.log(b) - b - (a * math.log(a) - a)
    return integral - math.lgamma(m + 1)


def sample_binomial(n: int, p: float, gen: np.random.Generator) -> int:
    """Exact Binomial(n, p) variate by pmf inversion from the mode.

    Accepts arbitrarily large integer n (the pmf at the mode is computed in
    log space) provided the mean n*p stays below 1e9.  The enumeration walks
    outward from the mode, alternating sides, accumulating exact pmf values
    until the uniform draw is covered; any fixed enumeration order yields an
    exact sample of the distribution.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if n == 0 or p == 0.0:
        return 0
    if p == 1.0:
        return n
    mean = n * p
    if mean > _MAX_BINOMIAL_MEAN and n - mean > _MAX_BINOMIAL_MEAN:
        raise ValueError("binomial mean too large for inversion sampling")

    mode = int((n + 1) * p)
    mode = min(max(mode, 0), n)
    log_pmf_mode = _log_binom(n, mode) + mode * math.log(p) + (n - mode) * math.log1p(-p)
    pmf_mode = math.exp(log_pmf_mode)

    u = gen.random()
    ratio = p / (1.0 - p)
    cum = pmf_mode
    if u <= cum:
        return mode

    pmf_hi, pmf_lo = pmf_mode, pmf_mode
    hi, lo = mode, mode
    # Alternate one step right, one step left, until the mass covers u.
    while True:
        advanced = False
        if hi < n:
            pmf_hi *= (n - hi) / (hi + 1.0) * ratio
            hi += 1
            cum += pmf_hi
            advanced = True
            if u <= cum:
                return hi
        if lo > 0:
            pmf_lo *= lo / ((n - lo + 1.0) * ratio)
            lo -= 1
            cum += pmf_lo
            advanced = True
            if u <= cum:
                return lo
        if not advanced or (pmf_hi == 0.0 and pmf_lo == 0.0):
            # Accumulated mass has saturated float resolution; u landed in
            # the sliver beyond it.  Return the heavier remaining side.
            return hi if pmf_hi >= pmf_lo else lo


def sample_k_subset(n: int, k: int, gen: np.random.Generator) -> np.ndarray:
    """Uniformly random k-subset of {1, ..., n}, returned sorted.

    Floyd's algorithm: k bounded integer draws, no allocation of the full
    range.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    chosen: set[int] = set()
    out = np.empty(k, dtype=np.int64)
    idx = 0
    for j in range(n - k + 1, n + 1):
        r = int(gen.integers(1, j + 1))
        if r in chosen:
            r = j
        chosen.add(r)
        out[idx] = r
        idx += 1
    out.sort()
    return out


@dataclass
class Hypergraph:
    """A d-uniform hypergraph on vertices {1, ..., n}.

    Edges are stored as an (m, d) int64 array with each row strictly
    ascending and the rows in lexicographic order, so equal hypergraphs have
    byte-identical edge arrays.  The seed field carries sampling provenance
    and does not participate in equality.
    """

    n: int
    d: int
    edges: np.ndarray
    seed: int = 0
    duplicate_rejects: int = 0          # sampler diagnostics, not identity
    _incidence: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.d < 2 or self.n < self.d:
            raise ValueError("need n >= d >= 2")
        edges = np.asarray(self.edges, dtype=np.int64)
        if edges.size == 0:
            edges = edges.reshape(0, self.d)
        if edges.ndim != 2 or edges.shape[1] != self.d:
            raise ValueError("edges must be an (m, d) array")
        if edges.size:
            if edges.min() < 1 or edges.max() > self.n:
                raise ValueError("vertex ids must lie in 1..n")
            if not (np.diff(edges, axis=1) > 0).all():
                raise ValueError("each edge must list distinct ascending vertex ids")
            order = np.lexsort(edges.T[::-1])
            edges = edges[order]
            if edges.shape[0] > 1 and (np.diff(edges, axis=0) == 0).all(axis=1).any():
                raise ValueError("duplicate edges are not allowed")
        self.edges = edges

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n == other.n and self.d == other.d
                and np.array_equal(self.edges, other.edges))

    def incidence(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR-style incidence: (offsets, edge_ids).

        Edge indices incident to vertex v occupy
        edge_ids[offsets[v]:offsets[v + 1]].  Built once and cached.
        """
        if self._incidence is None:
            flat = self.edges.ravel()
            counts = np.bincount(flat, minlength=self.n + 2)
            offsets = np.zeros(self.n + 2, dtype=np.int64)
            np.cumsum(counts[:-1], out=offsets[1:])
            edge_ids = np.argsort(flat, kind="stable") // self.d
            self._incidence = (offsets, edge_ids.astype(np.int64))
        return self._incidence


def _pack_rows(rows: np.ndarray, n: int, d: int):
    """Canonical hashable key per edge row for duplicate rejection."""
    bits = max(1, int(n).bit_length())
    if bits * d <= 63:
        shifts = (np.arange(d, dtype=np.int64)[::-1] * bits)
        return (rows.astype(np.int64) << shifts).sum(axis=1)
    # Fall back to raw bytes per row for very large n * d.
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    return np.frombuffer(rows.tobytes(), dtype=np.dtype((np.void, 8 * d)))


def sample_hypergraph(params, stream: RngStream) -> Hypergraph:
    """Draw one hypergraph from the model given by params.

    params must expose d, n (or N) and p.  Phase one draws the edge count
    from the exact binomial over all C(n, d) candidate d-subsets; phase two
    draws that many distinct uniform d-subsets, rejecting duplicates against
    the set of already accepted edges, which reproduces sequential rejection
    sampling and hence the uniform law over distinct edge sets.
    """
    d, n, p = params.d, params.n, params.p
    gen = stream.generator()
    total = count_subsets(n, d)
    m = sample_binomial(total, p, gen)

    accepted = np.empty((m, d), dtype=np.int64)
    seen: set = set()
    got = 0
    rejects = 0
    while got < m:
        batch = max(m - got, 16)
        cand = gen.integers(1, n + 1, size=(batch, d))
        cand.sort(axis=1)
        distinct = (np.diff(cand, axis=1) > 0).all(axis=1)
        cand = cand[distinct]
        rejects += int(batch - cand.shape[0])
        keys = _pack_rows(cand, n, d)
        for row, key in zip(cand, keys):
            key = key.item() if hasattr(key, "item") else key
            if key in seen:
                rejects += 1
                continue
            seen.add(key)
            accepted[got] = row
            got += 1
            if got == m:
                break
    return Hypergraph(n=n, d=d, edges=accepted, seed=stream.master_seed,
                      duplicate_rejects=rejects)


def write_hgr(h: Hypergraph, path_or_file) -> None:
    """Write the line-based HGR v1 format.

    Header line "HGR v1 N d M seed" followed by M lines of d ascending
    vertex ids separated by single spaces.
    """
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    f = open(path_or_file, "w") if own else path_or_file
    try:
        f.write(f"HGR v1 {h.n} {h.d} {h.num_edges} {h.seed}\n")
        for row in h.edges:
            f.write(" ".join(str(int(v)) for v in row) + "\n")
    finally:
        if own:
            f.close()


def read_hgr(path_or_file) -> Hypergraph:
    """Parse and validate an HGR v1 file.

    Raises ValueError on any malformed header, wrong edge count, vertex id
    out of range, non-ascending row or duplicate edge.
    """
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    f = open(path_or_file, "r") if own else path_or_file
    try:
        header = f.readline().split()
        if len(header) != 6 or header[0] != "HGR" or header[1] != "v1":
            raise ValueError("malformed HGR header, expected 'HGR v1 N d M seed'")
        try:
            n, d, m, seed = (int(x) for x in header[2:])
        except ValueError as exc:
            raise ValueError("non-integer fields in HGR header") from exc
        rows = []
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != d:
                raise ValueError(f"line {lineno}: expected {d} vertex ids")
            rows.append([int(x) for x in parts])
        if len(rows) != m:
            raise ValueError(f"edge count mismatch: header says {m}, found {len(rows)}")
        edges = np.asarray(rows, dtype=np.int64).reshape(len(rows), d)
        return Hypergraph(n=n, d=d, edges=edges, seed=seed)
    finally:
        if own:
            f.close()


def hgr_to_string(h: Hypergraph) -> str:
    """HGR v1 serialization as a string."""
    buf = io.StringIO()
    write_hgr(h, buf)
    return buf.getvalue()
