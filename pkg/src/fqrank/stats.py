"""Row/column character statistics, the entry-count decomposition identity,
exact enumeration oracles, and Monte Carlo normality checks.

The centrepiece is an algebraic identity: for any factor pair (X, Y) the
entry count ct_A(X @ Y) equals a centering constant plus a double sum of
centered character statistics weighted by transform coefficients of the
coordinate-sum indicators, minus zero-row/zero-column correction terms.
`decompose_ct` evaluates every term and reports the residual, which must
vanish up to floating-point rounding.

Monte Carlo runs derive one generator stream per sample index, so results
are independent of worker count; reductions happen on the fully assembled
sample array in index order.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import (
    BadSubset,
    CharacterTable,
    IndexSubset,
    all_subsets,
    character_table,
    component_transform_from_embedded,
    jacobi_component_trivial,
    sum_indicator,
)
from .counting import (
    MomentParams,
    RankOutOfRange,
    asymptotic_ct_mean,
    asymptotic_ct_variance,
    rank_count,
    subset_bias,
)
from .field import FieldCtx, make_field
from .matrices import (
    DimensionMismatch,
    FieldMismatch,
    MatrixFq,
    SubsetA,
    ct,
    mat_mul,
    rank,
)
from .sampling import SeedSpec, draw_factor_pair

MAX_DECOMP_RANK = 6
MAX_PAIR_ENUM = 1 << 24
MAX_DIRECT_SCAN = 1 << 22
MAX_RANK_ENUM = 1 << 20
MAX_PATTERN_TABLE = 1 << 22


class DegenerateSubset(ValueError):
    """Raised when a statistic needs a nonzero scaling variance."""


class TooLargeToEnumerate(ValueError):
    """Raised when an exact enumeration would exceed its size gate."""


# ---------------------------------------------------------------------------
# character statistics of factor matrices
# ---------------------------------------------------------------------------


def row_char_sum(
    x: MatrixFq, subset: IndexSubset, chis: tuple[int, ...], table: CharacterTable
) -> complex:
    """Sum over rows of the product of the chosen characters at the row's
    entries in the subset's columns; the empty subset gives the row count."""
    _check_stat_args(x.cols, x.field, subset, chis, table)
    prod = np.ones(x.rows, dtype=np.complex128)
    for pos, k in enumerate(subset.members()):
        prod = prod * table.mult[chis[pos], x.data[:, k]]
    return complex(prod.sum())


def col_char_sum(
    y: MatrixFq, subset: IndexSubset, chis: tuple[int, ...], table: CharacterTable
) -> complex:
    """Column version of row_char_sum: the subset selects rows of y."""
    _check_stat_args(y.rows, y.field, subset, chis, table)
    prod = np.ones(y.cols, dtype=np.complex128)
    for pos, k in enumerate(subset.members()):
        prod = prod * table.mult[chis[pos], y.data[k, :]]
    return complex(prod.sum())


def _check_stat_args(
    r: int,
    ctx: FieldCtx,
    subset: IndexSubset,
    chis: tuple[int, ...],
    table: CharacterTable,
) -> None:
    if subset.r != r:
        raise BadSubset(f"subset over range({subset.r}), matrix has inner size {r}")
    if len(chis) != subset.size:
        raise ValueError(f"{len(chis)} characters for subset of size {subset.size}")
    if table.field.q != ctx.q:
        raise FieldMismatch(f"table over GF({table.field.q}), matrix over GF({ctx.q})")
    for chi in chis:
        if not 0 <= chi < ctx.q - 1:
            raise ValueError(f"character index {chi} outside range({ctx.q - 1})")


def expected_char_sum(q: int, subset: IndexSubset, chis: tuple[int, ...], terms: int) -> Fraction:
    """Expectation of a character sum with `terms` iid uniform rows/columns:
    (1 - 1/q)^|S| * terms when every character is trivial, else 0."""
    if len(chis) != subset.size:
        raise ValueError(f"{len(chis)} characters for subset of size {subset.size}")
    if any(chis):
        return Fraction(0)
    return Fraction(q - 1, q) ** subset.size * terms


def count_zero_rows(x: MatrixFq) -> int:
    return int(x.rows - np.count_nonzero(x.data.any(axis=1)))


def count_zero_cols(y: MatrixFq) -> int:
    return int(y.cols - np.count_nonzero(y.data.any(axis=0)))


def zero_count_moments(q: int, r: int, trials: int) -> tuple[Fraction, Fraction]:
    """Mean and variance of the number of all-zero rows among `trials` iid
    uniform rows of width r (binomial with success probability q^-r)."""
    if r < 0:
        raise RankOutOfRange(f"rank {r} is negative")
    p = Fraction(1, q**r)
    return trials * p, trials * p * (1 - p)


# ---------------------------------------------------------------------------
# the decomposition identity
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _element_coefficients(
    ctx: FieldCtx, a: int, r: int
) -> tuple[tuple[int, tuple[int, ...], complex], ...]:
    """Transform coefficients of the arity-r sum indicator of element a, one
    per (subset mask, character tuple); all-trivial tuples use the rational
    closed form, the rest go through the embedded-restriction route."""
    table = character_table(ctx)
    f_a = sum_indicator(ctx, a, r)
    out = []
    for subset in all_subsets(r):
        for chis in itertools.product(range(ctx.q - 1), repeat=subset.size):
            if any(chis):
                coeff = component_transform_from_embedded(f_a, subset, chis, table)
            else:
                coeff = complex(float(jacobi_component_trivial(ctx.q, a, subset.size)))
            out.append((subset.mask, chis, coeff))
    return tuple(out)


def subset_coefficients(
    ctx: FieldCtx, subset_a: SubsetA, r: int
) -> dict[tuple[int, tuple[int, ...]], complex]:
    """Coefficients of the decomposition's double sum, aggregated over the
    entry subset: key (subset mask, character tuple)."""
    total: dict[tuple[int, tuple[int, ...]], complex] = {}
    for a in subset_a.members():
        for mask, chis, coeff in _element_coefficients(ctx, a, r):
            key = (mask, chis)
            total[key] = total.get(key, 0.0 + 0.0j) + coeff
    return total


@dataclass(frozen=True)
class Decomposition:
    """All terms of the entry-count identity for one factor pair."""

    ct_value: int
    mean_term: float
    main_term: complex
    zero_row_term: float
    zero_col_term: float

    @property
    def total(self) -> complex:
        return self.mean_term + self.main_term + self.zero_row_term + self.zero_col_term

    @property
    def residual(self) -> complex:
        return self.ct_value - self.total


def decompose_ct(
    x: MatrixFq, y: MatrixFq, subset_a: SubsetA, table: CharacterTable | None = None
) -> Decomposition:
    """Evaluate every term of the identity for ct_A(x @ y).

    x is m x r and y is r x n over the same field.  The identity is
    algebraic, valid for every pair including rank-deficient ones; the
    residual is floating-point noise only (|residual| <= 1e-6 at the sizes
    the term-count cap admits).
    """
    if x.field.q != y.field.q:
        raise FieldMismatch(f"GF({x.field.q}) vs GF({y.field.q})")
    if x.cols != y.rows:
        raise DimensionMismatch(f"inner dimensions differ: {x.shape} x {y.shape}")
    if subset_a.q != x.field.q:
        raise FieldMismatch(
            f"subset over GF({subset_a.q}), matrices over GF({x.field.q})"
        )
    ctx = x.field
    r = x.cols
    m, n = x.rows, y.cols
    if r > MAX_DECOMP_RANK or ctx.q**r > MAX_PATTERN_TABLE:
        raise TooLargeToEnumerate(
            f"decomposition over q^r = {ctx.q}^{r} character terms not supported"
        )
    if table is None:
        table = character_table(ctx)

    # the identity holds for any inner dimension r, including r > min(m, n)
    # where the rank-law MomentParams would refuse; use the raw formula
    gamma_exact = subset_bias(ctx.q, subset_a)
    mean_term = float(
        (Fraction(subset_a.size, ctx.q) - gamma_exact * Fraction(ctx.q) ** -r) * m * n
    )
    gamma = float(gamma_exact)

    main = 0.0 + 0.0j
    for (mask, chis), coeff in subset_coefficients(ctx, subset_a, r).items():
        subset = IndexSubset(r, mask)
        ex = float(expected_char_sum(ctx.q, subset, chis, m))
        ey = float(expected_char_sum(ctx.q, subset, chis, n))
        xs = row_char_sum(x, subset, chis, table)
        ys = col_char_sum(y, subset, chis, table)
        main += coeff * (xs - ex) * (ys - ey)

    ez, _ = zero_count_moments(ctx.q, r, m)
    ew, _ = zero_count_moments(ctx.q, r, n)
    zero_row_term = -gamma * n * (count_zero_rows(x) - float(ez))
    zero_col_term = -gamma * m * (count_zero_cols(y) - float(ew))

    return Decomposition(
        ct_value=ct(mat_mul(x, y), subset_a),
        mean_term=mean_term,
        main_term=main,
        zero_row_term=zero_row_term,
        zero_col_term=zero_col_term,
    )


def normalized_ct(mat: MatrixFq, subset_a: SubsetA, r: int) -> float:
    """Centered and scaled entry count (the statistic whose law approaches
    standard normal as the dimensions grow)."""
    params = MomentParams(q=mat.field.q, r=r, m=mat.rows, n=mat.cols, subset=subset_a)
    sigma2 = asymptotic_ct_variance(params)
    if sigma2 == 0:
        raise DegenerateSubset(
            f"variance scale is zero for subset of size {subset_a.size} at r={r}"
        )
    mu = float(asymptotic_ct_mean(params))
    return (ct(mat, subset_a) - mu) / math.sqrt(float(sigma2))


# ---------------------------------------------------------------------------
# fast entry counting for product matrices
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _pattern_tables(ctx: FieldCtx, r: int, amask: int) -> tuple[np.ndarray, np.ndarray]:
    """Pattern-code machinery: powers to encode a length-r row/column as an
    integer in range(q^r), and the q^r x q^r 0/1 table saying whether the
    field dot product of two patterns lands in the subset."""
    q = ctx.q
    if q ** (2 * r) > MAX_PATTERN_TABLE:
        raise TooLargeToEnumerate(f"pattern table q^2r = {q}^{2 * r} too large")
    powers = (q ** np.arange(r, dtype=np.int64)) if r else np.zeros(0, dtype=np.int64)
    codes = np.arange(q**r, dtype=np.int64)
    digits = np.empty((q**r, r), dtype=np.int16)
    tmp = codes.copy()
    for k in range(r):
        digits[:, k] = tmp % q
        tmp //= q
    dot = np.zeros((q**r, q**r), dtype=np.int16)
    for k in range(r):
        term = ctx.mul_table[digits[:, k][:, None], digits[:, k][None, :]]
        dot = ctx.add_table[dot, term]
    member = SubsetA(q, amask).member_table()
    weight = member[dot].astype(np.int64)
    return powers, weight


def product_ct(x: MatrixFq, y: MatrixFq, subset_a: SubsetA) -> int:
    """ct_A(x @ y) without forming the product, via pattern counting.

    Groups equal rows of x and equal columns of y, then sums a precomputed
    membership table over the count outer product; O(m + n + q^2r) per call
    after the cached table is built.
    """
    ctx = x.field
    r = x.cols
    powers, weight = _pattern_tables(ctx, r, subset_a.mask)
    xcodes = x.data.astype(np.int64) @ powers
    ycodes = powers @ y.data.astype(np.int64)
    nx = np.bincount(xcodes, minlength=ctx.q**r)
    ny = np.bincount(ycodes, minlength=ctx.q**r)
    return int(nx @ (weight @ ny))


# ---------------------------------------------------------------------------
# Monte Carlo normality runs
# ---------------------------------------------------------------------------


def normal_cdf(t: float) -> float:
    return 0.5 * (1.0 + math.erf(t / math.sqrt(2.0)))


def ks_distance(values: np.ndarray) -> float:
    """Exact one-sample Kolmogorov-Smirnov statistic against the standard
    normal, evaluated at the sorted sample points (both one-sided gaps)."""
    xs = np.sort(np.asarray(values, dtype=np.float64))
    n = len(xs)
    if n == 0:
        raise ValueError("need at least one sample")
    cdf = np.array([normal_cdf(v) for v in xs])
    upper = (np.arange(1, n + 1) / n - cdf).max()
    lower = (cdf - np.arange(0, n) / n).max()
    return float(max(upper, lower))


@dataclass(frozen=True)
class CltReport:
    """Summary of one Monte Carlo run of the normalised entry count."""

    q: int
    subset_members: tuple[int, ...]
    r: int
    m: int
    n: int
    num_samples: int
    seed: int
    mode: str
    mean: float
    variance: float
    skewness: float
    ks: float
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    samples: np.ndarray = field(repr=False, compare=False)

    def to_dict(self) -> dict:
        """JSON-ready view; excludes the raw samples and anything (like the
        worker count) that must not affect the report."""
        return {
            "q": self.q,
            "A": list(self.subset_members),
            "r": self.r,
            "m": self.m,
            "n": self.n,
            "N": self.num_samples,
            "seed": self.seed,
            "mode": self.mode,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "ks_distance": self.ks,
            "histogram": {
                "edges": list(self.bin_edges),
                "counts": list(self.counts),
            },
        }


def _clt_values(
    ctx: FieldCtx,
    subset_a: SubsetA,
    r: int,
    m: int,
    n: int,
    mode: str,
    seed: int,
    lo: int,
    hi: int,
) -> np.ndarray:
    params = MomentParams(q=ctx.q, r=r, m=m, n=n, subset=subset_a)
    mu = float(asymptotic_ct_mean(params))
    sigma = math.sqrt(float(asymptotic_ct_variance(params)))
    spec = SeedSpec(seed)
    fast = ctx.q ** (2 * r) <= MAX_PATTERN_TABLE
    out = np.empty(hi - lo, dtype=np.float64)
    for i in range(lo, hi):
        rng = spec.stream(i)
        left, right = draw_factor_pair(ctx, m, n, r, rng, mode)
        if fast:
            c = product_ct(left, right, subset_a)
        else:
            c = ct(mat_mul(left, right), subset_a)
        out[i - lo] = (c - mu) / sigma
    return out


def _clt_chunk(packed: tuple) -> tuple[int, np.ndarray]:
    p, e, amask, r, m, n, mode, seed, lo, hi = packed
    ctx = make_field(p, e)
    return lo, _clt_values(ctx, SubsetA(ctx.q, amask), r, m, n, mode, seed, lo, hi)


def run_clt(
    ctx: FieldCtx,
    subset_a: SubsetA,
    r: int,
    m: int,
    n: int,
    num_samples: int,
    seed: int,
    mode: str = "exact",
    workers: int = 1,
    bins: int = 81,
    hist_range: tuple[float, float] = (-4.0, 4.0),
) -> CltReport:
    """Draw matrices, normalise their entry counts, and summarise the law.

    The report is a pure function of everything except `workers`: sample i
    always comes from stream (seed, i) and the reductions run over the
    assembled array in index order.
    """
    if num_samples < 100:
        raise ValueError(f"need at least 100 samples, got {num_samples}")
    if subset_a.q != ctx.q:
        raise FieldMismatch(f"subset over GF({subset_a.q}), field is GF({ctx.q})")
    params = MomentParams(q=ctx.q, r=r, m=m, n=n, subset=subset_a)
    if asymptotic_ct_variance(params) == 0:
        raise DegenerateSubset(
            f"variance scale is zero for subset of size {subset_a.size} at r={r}"
        )
    if mode == "exact" and r > min(m, n):
        raise RankOutOfRange(f"rank {r} not in [0, {min(m, n)}]")

    if workers <= 1:
        values = _clt_values(ctx, subset_a, r, m, n, mode, seed, 0, num_samples)
    else:
        bounds = np.linspace(0, num_samples, workers + 1).astype(int)
        jobs = [
            (ctx.p, ctx.e, subset_a.mask, r, m, n, mode, seed, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        parts: dict[int, np.ndarray] = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for lo, arr in pool.map(_clt_chunk, jobs):
                parts[lo] = arr
        values = np.concatenate([parts[lo] for lo in sorted(parts)])

    mean = float(values.mean())
    variance = float(values.var())
    if variance > 0:
        skewness = float(((values - mean) ** 3).mean() / variance**1.5)
    else:
        skewness = 0.0
    lo_edge, hi_edge = hist_range
    edges = np.linspace(lo_edge, hi_edge, bins + 1)
    counts, _ = np.histogram(np.clip(values, lo_edge, hi_edge), bins=edges)
    return CltReport(
        q=ctx.q,
        subset_members=subset_a.members(),
        r=r,
        m=m,
        n=n,
        num_samples=num_samples,
        seed=seed,
        mode=mode,
        mean=mean,
        variance=variance,
        skewness=skewness,
        ks=ks_distance(values),
        bin_edges=tuple(float(v) for v in edges),
        counts=tuple(int(c) for c in counts),
        samples=values,
    )


# ---------------------------------------------------------------------------
# exact enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactDistribution:
    """Exact laws of the entry count at one parameter point.

    rank_dist is over uniform rank-r matrices; product_dist (pairs method
    only) is over products of unconditioned uniform factors; matrix_tv is
    the total variation between the two matrix-level laws.
    """

    rank_dist: dict[int, Fraction]
    product_dist: dict[int, Fraction] | None
    mean: Fraction
    variance: Fraction
    matrix_tv: Fraction | None
    method: str


def _decode_matrices(q: int, count: int, rows: int, cols: int) -> np.ndarray:
    codes = np.arange(count, dtype=np.int64)
    digits = np.empty((count, rows, cols), dtype=np.int16)
    tmp = codes.copy()
    for pos in range(rows * cols):
        digits[:, pos // cols, pos % cols] = tmp % q
        tmp //= q
    return digits


def _dist_from_counts(counts: dict[int, int], total: int) -> dict[int, Fraction]:
    return {value: Fraction(cnt, total) for value, cnt in sorted(counts.items())}


def _moments(dist: dict[int, Fraction]) -> tuple[Fraction, Fraction]:
    mean = sum((Fraction(v) * p for v, p in dist.items()), Fraction(0))
    second = sum((Fraction(v) ** 2 * p for v, p in dist.items()), Fraction(0))
    return mean, second - mean**2


def _exact_by_pairs(
    ctx: FieldCtx, m: int, n: int, r: int, subset_a: SubsetA
) -> ExactDistribution:
    q = ctx.q
    nx, ny = q ** (m * r), q ** (r * n)
    xs = _decode_matrices(q, nx, m, r)
    ys = _decode_matrices(q, ny, r, n)
    x_full = np.array([rank(MatrixFq(ctx, d)) == r for d in xs])
    y_full = np.array([rank(MatrixFq(ctx, d)) == r for d in ys])
    member = subset_a.member_table()

    track_matrices = q ** (m * n) <= MAX_PAIR_ENUM
    matrix_counts = np.zeros(q ** (m * n), dtype=np.int64) if track_matrices else None
    entry_powers = (
        q ** np.arange(m * n, dtype=np.int64) if track_matrices else None
    )

    pair_ct: dict[int, int] = {}
    rank_ct: dict[int, int] = {}
    for xi in range(nx):
        prod = np.zeros((ny, m, n), dtype=np.int16)
        for k in range(r):
            term = ctx.mul_table[xs[xi, :, k][None, :, None], ys[:, k, :][:, None, :]]
            prod = ctx.add_table[prod, term]
        cts = member[prod].sum(axis=(1, 2))
        for value, cnt in zip(*np.unique(cts, return_counts=True)):
            pair_ct[int(value)] = pair_ct.get(int(value), 0) + int(cnt)
        if x_full[xi]:
            full_cts = cts[y_full]
            for value, cnt in zip(*np.unique(full_cts, return_counts=True)):
                rank_ct[int(value)] = rank_ct.get(int(value), 0) + int(cnt)
        if matrix_counts is not None:
            codes = prod.reshape(ny, m * n).astype(np.int64) @ entry_powers
            matrix_counts += np.bincount(codes, minlength=len(matrix_counts))

    total_pairs = nx * ny
    total_full = int(x_full.sum()) * int(y_full.sum())
    rank_dist = _dist_from_counts(rank_ct, total_full)
    product_dist = _dist_from_counts(pair_ct, total_pairs)
    mean, variance = _moments(rank_dist)

    matrix_tv: Fraction | None = None
    if matrix_counts is not None:
        n_rank = rank_count(q, m, n, r)
        uniform = Fraction(1, int(n_rank)) if n_rank else Fraction(0)
        tv = Fraction(0)
        seen_rank_r = 0
        for code in np.nonzero(matrix_counts)[0]:
            digits = np.empty((m, n), dtype=np.int16)
            tmp = int(code)
            for pos in range(m * n):
                digits[pos // n, pos % n] = tmp % q
                tmp //= q
            p_prod = Fraction(int(matrix_counts[code]), total_pairs)
            if rank(MatrixFq(ctx, digits)) == r:
                tv += abs(p_prod - uniform)
                seen_rank_r += 1
            else:
                tv += p_prod
        tv += (int(n_rank) - seen_rank_r) * uniform
        matrix_tv = tv

    return ExactDistribution(
        rank_dist=rank_dist,
        product_dist=product_dist,
        mean=mean,
        variance=variance,
        matrix_tv=matrix_tv,
        method="pairs",
    )


def _exact_by_direct_scan(
    ctx: FieldCtx, m: int, n: int, r: int, subset_a: SubsetA
) -> ExactDistribution:
    q = ctx.q
    total = q ** (m * n)
    member = subset_a.member_table()
    rank_ct: dict[int, int] = {}
    matched = 0
    chunk = 1 << 14
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        digits = np.empty((stop - start, m, n), dtype=np.int16)
        tmp = np.arange(start, stop, dtype=np.int64)
        for pos in range(m * n):
            digits[:, pos // n, pos % n] = tmp % q
            tmp //= q
        cts = member[digits].sum(axis=(1, 2))
        for offset in range(stop - start):
            if rank(MatrixFq(ctx, digits[offset])) == r:
                value = int(cts[offset])
                rank_ct[value] = rank_ct.get(value, 0) + 1
                matched += 1
    expected = rank_count(q, m, n, r)
    assert matched == expected, f"rank scan found {matched}, formula says {expected}"
    rank_dist = _dist_from_counts(rank_ct, matched)
    mean, variance = _moments(rank_dist)
    return ExactDistribution(
        rank_dist=rank_dist,
        product_dist=None,
        mean=mean,
        variance=variance,
        matrix_tv=None,
        method="direct",
    )


def exact_distribution(
    ctx: FieldCtx,
    m: int,
    n: int,
    r: int,
    subset_a: SubsetA,
    method: str = "auto",
) -> ExactDistribution:
    """Exact law of the entry count by exhaustive enumeration.

    method "pairs" enumerates every factor pair (needs q^(mr+rn) <= 2^24)
    and yields both laws plus the matrix-level total variation; "direct"
    scans all m x n matrices for rank r (needs q^(mn) <= 2^22 and a rank
    count <= 2^20) and yields the rank-r law only.  "auto" prefers pairs.
    """
    if r < 0 or r > min(m, n):
        raise RankOutOfRange(f"rank {r} not in [0, {min(m, n)}]")
    if subset_a.q != ctx.q:
        raise FieldMismatch(f"subset over GF({subset_a.q}), field is GF({ctx.q})")
    pairs_ok = ctx.q ** (m * r) * ctx.q ** (r * n) <= MAX_PAIR_ENUM
    direct_ok = (
        ctx.q ** (m * n) <= MAX_DIRECT_SCAN
        and rank_count(ctx.q, m, n, r) <= MAX_RANK_ENUM
    )
    if method == "auto":
        method = "pairs" if pairs_ok else "direct" if direct_ok else ""
        if not method:
            raise TooLargeToEnumerate(
                f"q={ctx.q}, m={m}, n={n}, r={r} exceeds both enumeration gates"
            )
    if method == "pairs":
        if not pairs_ok:
            raise TooLargeToEnumerate(
                f"pair enumeration q^(mr+rn) = {ctx.q ** (m * r + r * n)} over gate"
            )
        return _exact_by_pairs(ctx, m, n, r, subset_a)
    if method == "direct":
        if not direct_ok:
            raise TooLargeToEnumerate(
                f"direct scan q^(mn) = {ctx.q ** (m * n)} over gate"
            )
        return _exact_by_direct_scan(ctx, m, n, r, subset_a)
    raise ValueError(f"unknown method {method!r} (expected auto, pairs, or direct)")
