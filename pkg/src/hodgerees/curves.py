"""Period matrices and the first R-splitting level of singular curves.

Two families are covered: P¹ with ``m`` punctures and ``n`` identified point
pairs, and an elliptic curve ``C/(Z + Zτ)`` with the same decorations.  For
each, α₁ is computed twice: by the row-wise criterion on the logarithmic
periods and by the rank of ``[A; conj A]``, which yields ``t^{1,1}`` and then
α through the Hodge and double-graded numbers.
"""

from __future__ import annotations

import cmath
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import mpmath
import numpy as np

from .linalg import DEFAULT_TOL, Matrix, default_tolerance, float_rank, floating
from .mhs import HodgeNumbers, alpha_from_tables

TWO_PI_I = 2j * math.pi


class DegenerateConfiguration(ValueError):
    """Marked points coincide (on P¹, or modulo the lattice)."""


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Point = Union[complex, _Infinity]


def parse_point(text: str) -> Point:
    """``"inf"``, ``"0.5+0.7i"``, ``"2"``, ``"-i"`` and the like."""
    s = text.strip().lower().replace(" ", "")
    if s in ("inf", "infinity", "∞"):
        return INF
    s = s.replace("i", "j")
    if s in ("j", "+j", "-j"):
        s = s.replace("j", "1j")
    try:
        return complex(s)
    except ValueError:
        raise ValueError(f"cannot parse point {text!r}") from None


def format_point(z: Point) -> str:
    if z is INF:
        return "inf"
    z = complex(z)
    return f"{z.real:.10g}{'+' if z.imag >= 0 else '-'}{abs(z.imag):.10g}i"


def _same(a: Point, b: Point, tol: float = 1e-12) -> bool:
    if a is INF or b is INF:
        return a is b
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# projective line


def cross_ratio(a: Point, b: Point, c: Point, d: Point) -> complex:
    """``((a-c)/(a-d)) / ((b-c)/(b-d))``, with limits when one point is ∞."""
    pts = (a, b, c, d)
    for i in range(4):
        for j in range(i + 1, 4):
            if _same(pts[i], pts[j]):
                raise DegenerateConfiguration("cross-ratio of coincident points")
    if a is INF:
        return (b - d) / (b - c)
    if b is INF:
        return (a - c) / (a - d)
    if c is INF:
        return (b - d) / (a - d)
    if d is INF:
        return (a - c) / (b - c)
    return ((a - c) / (a - d)) / ((b - c) / (b - d))


def mobius(coeffs: Sequence[complex], z: Point) -> Point:
    """``z -> (a z + b) / (c z + d)`` on P¹."""
    a, b, c, d = coeffs
    if abs(a * d - b * c) < 1e-14:
        raise ValueError("singular Möbius transformation")
    if z is INF:
        return INF if c == 0 else a / c
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


def random_mobius(rng: random.Random) -> tuple[complex, ...]:
    while True:
        a, b, c, d = (complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(4))
        if abs(a * d - b * c) > 0.1:
            return a, b, c, d


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Genus0Config:
    """P¹ minus ``punctures`` with each pair ``(P_j, Q_j)`` glued to a node."""

    punctures: tuple
    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "punctures", tuple(_point(z) for z in self.punctures))
        object.__setattr__(self, "pairs", tuple((_point(p), _point(q)) for p, q in self.pairs))
        if not self.punctures and not self.pairs:
            raise DegenerateConfiguration("need at least one puncture or one pair")
        pts = list(self.punctures) + [x for pq in self.pairs for x in pq]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if _same(pts[i], pts[j]):
                    raise DegenerateConfiguration(
                        f"marked points coincide: {format_point(pts[i])}")

    @property
    def m(self) -> int:
        return len(self.punctures)

    @property
    def n(self) -> int:
        return len(self.pairs)

    def transformed(self, coeffs: Sequence[complex]) -> "Genus0Config":
        return Genus0Config(tuple(mobius(coeffs, z) for z in self.punctures),
                            tuple((mobius(coeffs, p), mobius(coeffs, q)) for p, q in self.pairs))


def _point(z) -> Point:
    if z is INF:
        return INF
    if isinstance(z, str):
        return parse_point(z)
    return complex(z)


@dataclass(frozen=True)
class Genus1Config:
    """``C/(Z + Zτ)`` minus ``punctures`` with each pair ``(P_j, Q_j)`` glued."""

    tau: complex
    punctures: tuple
    pairs: tuple = ()

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise ValueError("tau must have positive imaginary part")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "punctures", tuple(complex(z) for z in self.punctures))
        object.__setattr__(self, "pairs", tuple((complex(p), complex(q)) for p, q in self.pairs))
        pts = list(self.punctures) + [x for pq in self.pairs for x in pq]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if lattice_equivalent(pts[i], pts[j], tau):
                    raise DegenerateConfiguration(
                        f"marked points coincide modulo the lattice: {format_point(pts[i])}")

    @property
    def m(self) -> int:
        return len(self.punctures)

    @property
    def n(self) -> int:
        return len(self.pairs)


def lattice_equivalent(u: complex, v: complex, tau: complex, tol: float = 1e-12) -> bool:
    d = complex(u) - complex(v)
    y = d.imag / tau.imag
    x = d.real - y * tau.real
    return abs(x - round(x)) <= tol and abs(y - round(y)) <= tol


def random_genus0(rng: random.Random, m: int, n: int, spread: float = 3.0) -> Genus0Config:
    """Seeded configuration with points in a box, kept well separated."""
    while True:
        pts = [complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread))
               for _ in range(m + 2 * n)]
        if min((abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]), default=1.0) > 0.05:
            return Genus0Config(tuple(pts[:m]),
                                tuple((pts[m + 2 * j], pts[m + 2 * j + 1]) for j in range(n)))


def random_genus1(rng: random.Random, m: int, n: int, tau: complex | None = None) -> Genus1Config:
    if tau is None:
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.6))
    while True:
        pts = [complex(rng.uniform(0, 1), 0) + rng.uniform(0, 1) * tau for _ in range(m + 2 * n)]
        if min((abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]), default=1.0) > 0.05:
            return Genus1Config(tau, tuple(pts[:m]),
                                tuple((pts[m + 2 * j], pts[m + 2 * j + 1]) for j in range(n)))


# ---------------------------------------------------------------------------
# period matrices


@dataclass(frozen=True)
class PeriodMatrix:
    """Periods of the holomorphic and logarithmic forms along a homology basis.

    Columns are ordered lattice cycles (genus 1 only), puncture loops, then
    the paths joining identified points.
    """

    entries: Matrix
    lattice_cols: int
    residue_cols: int
    log_cols: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def array(self) -> np.ndarray:
        return self.entries.to_numpy().reshape(self.entries.nrows, self.entries.ncols)

    def log_block(self) -> np.ndarray:
        a = self.array()
        return a[:, self.lattice_cols + self.residue_cols:]


def _residue_block(k: int) -> list[list[complex]]:
    # 2πi on the diagonal and -2πi just below it
    return [[TWO_PI_I if i == j else (-TWO_PI_I if i == j + 1 else 0j) for j in range(k)]
            for i in range(k)]


def log_entry_genus0(cfg: Genus0Config, i: int, j: int) -> complex:
    """``log(Q_j, P_j, p_i, p_{i+1})`` on the principal branch (0-based ``i, j``)."""
    p, q = cfg.pairs[j]
    return cmath.log(cross_ratio(q, p, cfg.punctures[i], cfg.punctures[i + 1]))


def period_matrix_genus0(cfg: Genus0Config, tol: float | None = None) -> PeriodMatrix:
    m, n = cfg.m, cfg.n
    tol = default_tolerance() if tol is None else tol
    rows = []
    if m >= 2:
        band = _residue_block(m - 1)
        for i in range(m - 1):
            rows.append(band[i] + [log_entry_genus0(cfg, i, j) for j in range(n)])
    width = max(m - 1, 0) + n
    return PeriodMatrix(Matrix.of(rows, width, floating(tol)), 0, max(m - 1, 0), n)


def t11_from_periods(pm: PeriodMatrix, tol: float | None = None) -> int:
    """``t^{1,1} = 2·rows - rank [A; conj A]``, clamped to ``[0, rows]``."""
    tol = pm.entries.backend.tol if tol is None else tol
    k = pm.entries.nrows
    if k == 0:
        return 0
    a = pm.array()
    r = float_rank(np.vstack([a, a.conj()]), tol)
    return min(max(2 * k - r, 0), k)


def _alpha_from_t11(h: Counter, t11: int, dim: int) -> int:
    """α from the Hodge numbers and ``t^{1,1}`` of an H¹ with F¹ of rank ``f1``."""
    f1 = h[1, 1] + h[1, 0]
    t = Counter()
    t[1, 1] = t11
    t[1, 0] = t[0, 1] = f1 - t11
    t[0, 0] = dim - t11 - 2 * (f1 - t11)
    if min(t.values()) < 0:
        raise ArithmeticError("t-numbers out of range; rank decision inconsistent")
    return alpha_from_tables(HodgeNumbers(+h, +t))


def hodge_numbers_genus0(cfg: Genus0Config) -> Counter:
    return +Counter({(1, 1): max(cfg.m - 1, 0), (0, 0): cfg.n})


def alpha1_genus0_rank(cfg: Genus0Config, tol: float | None = None) -> int:
    """α₁ from the rank of the stacked period matrix."""
    if cfg.m < 2:
        return 0
    pm = period_matrix_genus0(cfg, tol)
    return _alpha_from_t11(Counter(hodge_numbers_genus0(cfg)), t11_from_periods(pm, tol),
                           cfg.m - 1 + cfg.n)


def unit_modulus(c: complex, tol: float) -> bool:
    """``Re(c) = 0``, the shape ``c = -conj(c)`` takes for ``c = log w``."""
    return abs(c.real) <= tol


def alpha1_genus0(cfg: Genus0Config, tol: float | None = None) -> int:
    """Row-wise criterion: ``(m-1) - #{i : |(Q_j,P_j,p_i,p_{i+1})| = 1 for all j}``."""
    tol = default_tolerance() if tol is None else tol
    if cfg.m < 2:
        return 0
    fixed = sum(
        1 for i in range(cfg.m - 1)
        if all(unit_modulus(log_entry_genus0(cfg, i, j), tol) for j in range(cfg.n))
    )
    return cfg.m - 1 - fixed


# ---------------------------------------------------------------------------
# genus one


def theta_terms(z: complex, tau: complex, eps: float = 1e-16) -> int:
    """Smallest ``N`` with ``exp(-π Im τ (N+1)² + 2π |Im z| (N+1)) < eps``."""
    a, b = math.pi * tau.imag, 2 * math.pi * abs(complex(z).imag)
    target = math.log(eps)
    n = 0
    while -a * (n + 1) ** 2 + b * (n + 1) >= target:
        n += 1
    return n


def theta(z: complex, tau: complex) -> complex:
    """Jacobi theta ``θ(z; τ) = Σ_n exp(πi n² τ + 2πi n z)``.

    Terms are summed with 30 significant digits so that the returned double is
    correctly rounded even where ``|θ|`` is large.
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError("tau must have positive imaginary part")
    z = complex(z)
    big = theta_terms(z, tau)
    with mpmath.workdps(30):
        zz, tt = mpmath.mpc(z), mpmath.mpc(tau)
        ipi = mpmath.j * mpmath.pi
        total = mpmath.fsum(mpmath.exp(ipi * (k * k * tt + 2 * k * zz)) for k in range(-big, big + 1))
        return complex(total)


def _shift(tau: complex) -> complex:
    return 0.5 * (1 + tau)


def log_entry_genus1(cfg: Genus1Config, i: int, j: int) -> complex:
    """``∫_{P_j}^{Q_j} ω_i`` as the difference of principal logs of theta quotients."""
    p, q = cfg.pairs[j]
    a, b = cfg.punctures[i], cfg.punctures[i + 1]
    s, tau = _shift(cfg.tau), cfg.tau
    top = cmath.log(theta(q - a - s, tau) / theta(q - b - s, tau))
    bottom = cmath.log(theta(p - a - s, tau) / theta(p - b - s, tau))
    return top - bottom


def period_matrix_genus1(cfg: Genus1Config, tol: float | None = None) -> PeriodMatrix:
    """Rows ``dz, ω_1, …, ω_{m-1}``; columns ``a, b, γ_1…γ_{m-1}, β_1…β_n``."""
    tol = default_tolerance() if tol is None else tol
    m, n = cfg.m, cfg.n
    k = max(m - 1, 0)
    rows = [[1 + 0j, cfg.tau] + [0j] * k + [q - p for p, q in cfg.pairs]]
    band = _residue_block(k)
    for i in range(k):
        b_period = TWO_PI_I * (cfg.punctures[i] - cfg.punctures[i + 1])
        rows.append([0j, b_period] + band[i] + [log_entry_genus1(cfg, i, j) for j in range(n)])
    return PeriodMatrix(Matrix.of(rows, 2 + k + n, floating(tol)), 2, k, n)


def hodge_numbers_genus1(cfg: Genus1Config) -> Counter:
    return +Counter({(1, 1): max(cfg.m - 1, 0), (1, 0): 1, (0, 1): 1, (0, 0): cfg.n})


def alpha1_genus1_rank(cfg: Genus1Config, tol: float | None = None) -> int:
    pm = period_matrix_genus1(cfg, tol)
    h = hodge_numbers_genus1(cfg)
    return _alpha_from_t11(Counter(h), t11_from_periods(pm, tol), 2 + max(cfg.m - 1, 0) + cfg.n)


def alpha1_genus1(cfg: Genus1Config, tol: float | None = None) -> int:
    """Row-wise criterion: ``(m-1) - #{i : c_ij real for all j}``."""
    tol = default_tolerance() if tol is None else tol
    if cfg.m < 2:
        return 0
    fixed = 0
    for i in range(cfg.m - 1):
        entries = [log_entry_genus1(cfg, i, j) for j in range(cfg.n)]
        if all(abs(c.imag) <= tol * max(1.0, abs(c)) for c in entries):
            fixed += 1
    return cfg.m - 1 - fixed


def genus1_row_matrix(cfg: Genus1Config) -> np.ndarray:
    """Real matrix whose rank is the rank-side α₁ in genus one.

    Entry ``(i, j)`` is ``Re c_ij + 2π Im(Q_j - P_j) Im(p_i - p_{i+1}) / Im τ``;
    it vanishes exactly when the ``β_j`` column does not obstruct ``ω_i``.
    """
    k = max(cfg.m - 1, 0)
    out = np.zeros((k, cfg.n))
    for i in range(k):
        d = (cfg.punctures[i] - cfg.punctures[i + 1]).imag
        for j, (p, q) in enumerate(cfg.pairs):
            out[i, j] = log_entry_genus1(cfg, i, j).real + 2 * math.pi * (q - p).imag * d / cfg.tau.imag
    return out


# ---------------------------------------------------------------------------
# the four-point stratification


def four_point_config(q: complex) -> Genus0Config:
    """``p = (0, 1)`` with the pair ``(∞, Q)``."""
    return Genus0Config((0j, 1 + 0j), ((INF, complex(q)),))


@dataclass(frozen=True)
class ScanRow:
    re: float
    im: float
    alpha1: int | None
    alpha1_rank: int | None
    flag: str


def _scan_point(args) -> ScanRow:
    re, im, tol = args
    q = complex(re, im)
    if abs(q) <= tol or abs(q - 1) <= tol:
        return ScanRow(re, im, None, None, "degenerate")
    cfg = four_point_config(q)
    return ScanRow(re, im, alpha1_genus0(cfg, tol), alpha1_genus0_rank(cfg, tol), "ok")


def scan_grid(re_min: float, re_max: float, im_min: float, im_max: float,
              steps: int) -> list[tuple[float, float]]:
    if steps < 1:
        raise ValueError("steps must be positive")

    def axis(lo, hi):
        if steps == 1:
            return [lo]
        return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]

    return [(x, y) for x in axis(re_min, re_max) for y in axis(im_min, im_max)]


def scan_m04(re_min: float = -1.0, re_max: float = 2.0, im_min: float = -1.5, im_max: float = 1.5,
             steps: int = 41, tol: float | None = None, workers: int = 1) -> list[ScanRow]:
    """α₁ of the four-point configuration over a rectangular grid of ``Q``."""
    tol = default_tolerance() if tol is None else tol
    jobs = [(x, y, tol) for x, y in scan_grid(re_min, re_max, im_min, im_max, steps)]
    if workers <= 1:
        return [_scan_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_scan_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def scan_csv(rows: Iterable[ScanRow]) -> str:
    lines = ["re,im,alpha1,flag"]
    for r in rows:
        a = "" if r.alpha1 is None else str(r.alpha1)
        lines.append(f"{r.re:.12g},{r.im:.12g},{a},{r.flag}")
    return "\n".join(lines) + "\n"


__all__ = [
    "INF",
    "DEFAULT_TOL",
    "DegenerateConfiguration",
    "Genus0Config",
    "Genus1Config",
    "PeriodMatrix",
    "ScanRow",
    "alpha1_genus0",
    "alpha1_genus0_rank",
    "alpha1_genus1",
    "alpha1_genus1_rank",
    "cross_ratio",
    "four_point_config",
    "genus1_row_matrix",
    "hodge_numbers_genus0",
    "hodge_numbers_genus1",
    "mobius",
    "parse_point",
    "period_matrix_genus0",
    "period_matrix_genus1",
    "random_genus0",
    "random_genus1",
    "random_mobius",
    "scan_csv",
    "scan_m04",
    "t11_from_periods",
    "theta",
]
