"""Scalar backends and canonical subspace algebra.

Two backends are supported:

* exact: Gaussian rationals ``a + b i`` with ``a, b`` in Q.  Elimination is done
  by FLINT on the *realification* of a complex matrix, where a complex row ``v``
  contributes the two real rows ``v`` and ``i v`` written in interleaved
  ``(re, im)`` coordinates.  The real RREF of that matrix is the interleaving of
  the complex RREF, so nothing is lost and ranks simply halve.
* float: complex doubles with a relative pivot tolerance.

Subspaces are row spans kept in reduced row echelon form, which makes equality
a plain comparison of bases.
"""

from __future__ import annotations

import os
import re
from math import gcd, lcm
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Sequence, Union

import flint
import numpy as np

DEFAULT_TOL = 1e-9
TOL_ENV = "HODGEREES_TOL"


def default_tolerance() -> float:
    """Rank tolerance for the float backend, honouring ``HODGEREES_TOL``."""
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    value = float(raw)
    if not value > 0:
        raise ValueError(f"{TOL_ENV} must be positive, got {raw!r}")
    return value


# ---------------------------------------------------------------------------
# scalars


_QI_TERM = re.compile(
    r"""^(?P<sign>[+-]?)(?P<num>\d+)?(?:/(?P<den>\d+))?(?P<i>\*?i)?$""", re.X
)


@dataclass(frozen=True)
class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(x, (int, Rational)):
            return cls(Fraction(x))
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, (complex, float)):
            z = complex(x)
            if z.real.is_integer() and z.imag.is_integer():
                return cls(Fraction(int(z.real)), Fraction(int(z.imag)))
            raise TypeError(
                f"refusing to convert non-integral float {x!r} to an exact scalar; "
                "pass a Fraction or a string such as '1/3+2/5 i'"
            )
        raise TypeError(f"cannot convert {type(x).__name__} to a Gaussian rational")

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"a/b"``, ``"a/b+c/d i"``, ``"i"``, ``"-2/3i"`` and similar."""
        s = text.replace(" ", "").replace("j", "i")
        if not s:
            raise ValueError("empty scalar literal")
        # split into signed terms, keeping the sign with each term
        cuts = [0] + [k for k in range(1, len(s)) if s[k] in "+-" and s[k - 1] != "/"]
        terms = [s[a:b] for a, b in zip(cuts, cuts[1:] + [len(s)])]
        if len(terms) > 2:
            raise ValueError(f"malformed Gaussian rational {text!r}")
        re_part, im_part = Fraction(0), Fraction(0)
        seen_re = seen_im = False
        for term in terms:
            m = _QI_TERM.match(term)
            if m is None or (m["num"] is None and (m["den"] is not None or not m["i"])):
                raise ValueError(f"malformed Gaussian rational {text!r}")
            if m["den"] is not None and int(m["den"]) == 0:
                raise ValueError(f"zero denominator in {text!r}")
            value = Fraction(int(m["num"]) if m["num"] else 1, int(m["den"]) if m["den"] else 1)
            if m["sign"] == "-":
                value = -value
            if m["i"]:
                if seen_im:
                    raise ValueError(f"malformed Gaussian rational {text!r}")
                im_part, seen_im = value, True
            else:
                if seen_re or seen_im:
                    raise ValueError(f"malformed Gaussian rational {text!r}")
                re_part, seen_re = value, True
        return cls(re_part, im_part)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im} i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)} i"

    def __repr__(self) -> str:
        return f"GaussianRational({str(self)!r})"

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return o / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0


def _maybe(x):
    try:
        return GaussianRational.coerce(x)
    except (TypeError, ValueError):
        return None


I = GaussianRational(0, 1)
Scalar = Union[GaussianRational, complex]


# ---------------------------------------------------------------------------
# backends and matrices


@dataclass(frozen=True)
class Backend:
    """Scalar backend tag.  ``exact`` is Q(i); otherwise complex doubles with ``tol``."""

    exact: bool
    tol: float = DEFAULT_TOL

    def __repr__(self) -> str:
        return "EXACT" if self.exact else f"floating(tol={self.tol:g})"


EXACT = Backend(True)


def floating(tol: float | None = None) -> Backend:
    tol = default_tolerance() if tol is None else float(tol)
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    return Backend(False, tol)


@dataclass(frozen=True)
class Matrix:
    """Rectangular grid of scalars from one backend."""

    entries: tuple
    ncols: int
    backend: Backend = EXACT

    @classmethod
    def of(cls, rows: Iterable[Sequence], ncols: int | None = None, backend: Backend = EXACT):
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        if backend.exact:
            data = tuple(tuple(GaussianRational.coerce(x) for x in r) for r in rows)
        else:
            data = tuple(tuple(complex(x) for x in r) for r in rows)
        return cls(data, ncols, backend)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=complex)
        for i, row in enumerate(self.entries):
            out[i] = [complex(x) for x in row]
        return out

    def conjugate(self) -> "Matrix":
        return Matrix(tuple(tuple(x.conjugate() for x in r) for r in self.entries), self.ncols, self.backend)

    def stack(self, other: "Matrix") -> "Matrix":
        if other.ncols != self.ncols or other.backend != self.backend:
            raise ValueError("cannot stack matrices of different widths or backends")
        return Matrix(self.entries + other.entries, self.ncols, self.backend)

    def __str__(self) -> str:
        if self.backend.exact:
            cells = [[str(x) for x in r] for r in self.entries]
        else:
            cells = [[_fmt_complex(x) for x in r] for r in self.entries]
        if not cells:
            return f"[] (0x{self.ncols})"
        width = max(len(c) for r in cells for c in r) if self.ncols else 0
        return "\n".join("[" + "  ".join(c.rjust(width) for c in r) + "]" for r in cells)


def _fmt_complex(z: complex) -> str:
    re_, im_ = z.real + 0.0, z.imag + 0.0
    return f"{re_:.6g}{'+' if im_ >= 0 else '-'}{abs(im_):.6g}i"


# ---------------------------------------------------------------------------
# exact engine: realified FLINT matrices


def _fq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


def _realify(rows: Sequence[Sequence[GaussianRational]], n: int) -> flint.fmpq_mat:
    entries = []
    for v in rows:
        a = []
        b = []
        for x in v:
            r, i = _fq(x.re), _fq(x.im)
            a.append(r)
            a.append(i)
            b.append(-i)
            b.append(r)
        entries.extend(a)
        entries.extend(b)
    return flint.fmpq_mat(2 * len(rows), 2 * n, entries)


def _rref_q(m: flint.fmpq_mat) -> flint.fmpq_mat:
    """Nonzero rows of the (real) RREF of ``m``."""
    if m.nrows() == 0:
        return m
    r, rk = m.rref()
    if rk == r.nrows():
        return r
    return flint.fmpq_mat(rk, m.ncols(), r.entries()[: rk * m.ncols()])


def _conj_q(m: flint.fmpq_mat) -> flint.fmpq_mat:
    e = m.entries()
    e[1::2] = [-x for x in e[1::2]]
    return flint.fmpq_mat(m.nrows(), m.ncols(), e)


def _complex_rows(m: flint.fmpq_mat) -> tuple:
    """Complex rows encoded by a realified RREF (even rows)."""
    n = m.ncols()
    e = m.entries()
    out = []
    for k in range(0, m.nrows(), 2):
        row = e[k * n : (k + 1) * n]
        out.append(
            tuple(
                GaussianRational(
                    Fraction(int(row[j].p), int(row[j].q)),
                    Fraction(int(row[j + 1].p), int(row[j + 1].q)),
                )
                for j in range(0, n, 2)
            )
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# float engine


def _float_rref(a: np.ndarray, tol: float) -> np.ndarray:
    """RREF with partial pivoting; pivots at or below ``tol * max|a|`` count as zero."""
    a = np.array(a, dtype=complex, copy=True)
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return np.zeros((0, cols), dtype=complex)
    scale = np.abs(a).max()
    if scale == 0:
        return np.zeros((0, cols), dtype=complex)
    thresh = tol * scale
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[k, c]) <= thresh:
            a[r:, c] = 0
            continue
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] / a[r, c]
        others = np.arange(rows) != r
        a[others] -= np.outer(a[others, c], a[r])
        a[others, c] = 0
        r += 1
    return a[:r]


def float_rank(a: np.ndarray, tol: float | None = None) -> int:
    tol = default_tolerance() if tol is None else tol
    return _float_rref(np.asarray(a, dtype=complex), tol).shape[0]


# ---------------------------------------------------------------------------
# public matrix operations


def rref(m: Matrix) -> Matrix:
    """Reduced row echelon form; zero rows are dropped."""
    if m.backend.exact:
        q = _rref_q(_realify(m.entries, m.ncols))
        return Matrix(_complex_rows(q), m.ncols, m.backend)
    r = _float_rref(m.to_numpy(), m.backend.tol)
    return Matrix(tuple(tuple(complex(x) for x in row) for row in r), m.ncols, m.backend)


def rank(m: Matrix) -> int:
    if m.backend.exact:
        if m.nrows == 0 or m.ncols == 0:
            return 0
        return _realify(m.entries, m.ncols).rank() // 2
    return float_rank(m.to_numpy(), m.backend.tol)


# ---------------------------------------------------------------------------
# modular ranks
#
# A Gaussian-integer matrix reduces modulo a prime p = 1 (mod 4) by sending i
# to a square root of -1.  This is a ring map, so the rank mod p never exceeds
# the rank over Q(i).  Taking the larger of two such ranks gives the true rank
# unless both primes divide every maximal nonzero minor.

RANKS_ENV = "HODGEREES_RANKS"
_PRIMES = (
    (4611686018427387817, 4490822397581186023),
    (4611686018426387729, 3644826799126235114),
)


def certified_ranks() -> bool:
    """True when ``HODGEREES_RANKS=certified`` asks for FLINT's exact integer ranks."""
    mode = os.environ.get(RANKS_ENV, "modular").strip().lower() or "modular"
    if mode not in ("modular", "certified"):
        raise ValueError(f"{RANKS_ENV} must be 'modular' or 'certified', got {mode!r}")
    return mode == "certified"


def _int_row(v: Sequence[GaussianRational]) -> tuple | None:
    """Primitive Gaussian-integer multiple of a row, as ``(re, im)`` pairs; None if zero."""
    den = 1
    for x in v:
        den = lcm(den, x.re.denominator)
        den = lcm(den, x.im.denominator)
    ints = [(int(x.re * den), int(x.im * den)) for x in v]
    g = 0
    for a, b in ints:
        g = gcd(gcd(g, a), b)
    if g == 0:
        return None
    if g != 1:
        ints = [(a // g, b // g) for a, b in ints]
    return tuple(ints)


def _mod_rows(gens: Sequence[tuple], n: int, which: int) -> flint.nmod_mat:
    p, s = _PRIMES[which]
    entries = [(a + b * s) % p for row in gens for (a, b) in row]
    return flint.nmod_mat(len(gens), n, entries, p)


class _ModData:
    """Row echelon form of a generator matrix mod one prime, plus its kernel.

    ``kernel`` has columns spanning ``{k : R k = 0}`` (padded with zero
    columns), so ``v -> v·kernel`` vanishes exactly on the row space.
    """

    __slots__ = ("rank", "rref", "_kernel")

    def __init__(self, m: flint.nmod_mat):
        self.rref, self.rank = m.rref()
        self._kernel = None

    @property
    def kernel(self) -> flint.nmod_mat:
        if self._kernel is None:
            self._kernel = self.rref.nullspace()[0]
        return self._kernel


def _projected_rank(parts: Sequence[_ModData], bound: int) -> int:
    """Rank of the stacked row spaces: ``rank A + rank(B·ker A) + ...``."""
    first = parts[0]
    total = first.rank
    kernel = first.kernel
    for k, part in enumerate(parts[1:], start=2):
        image = part.rref * kernel
        r = image.rank()
        total += r
        if total >= bound:
            return total
        if r and k < len(parts):
            kernel = kernel * image.nullspace()[0]
    return total


def _realify_ints(gens: Sequence[tuple], n: int) -> flint.fmpz_mat:
    entries = []
    for row in gens:
        for a, b in row:
            entries.append(a)
            entries.append(b)
        for a, b in row:
            entries.append(-b)
            entries.append(a)
    return flint.fmpz_mat(2 * len(gens), 2 * n, entries)


def _gens_rank(gens: Sequence[tuple], n: int) -> int:
    if not gens or n == 0:
        return 0
    if certified_ranks():
        return _realify_ints(gens, n).rank() // 2
    bound = min(len(gens), n)
    best = 0
    for which in range(len(_PRIMES)):
        best = max(best, _mod_rows(gens, n, which).rank())
        if best == bound:
            break
    return best


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Row span of a set of vectors.

    Build one with :meth:`span`, :meth:`zero` or :meth:`full`.  Instances are
    immutable.  On the exact backend a subspace keeps primitive Gaussian-integer
    generators and computes its canonical RREF basis only on demand, so sums,
    conjugates and tensor products stay cheap.  Equality is equality of spans.
    """

    __slots__ = ("ambient_dim", "backend", "_gens", "_f", "__dict__")

    def __init__(self, ambient_dim: int, backend: Backend, data):
        self.ambient_dim = ambient_dim
        self.backend = backend
        if backend.exact:
            self._gens = tuple(data)
            self._f = None
        else:
            self._gens = None
            self._f = data

    # construction ---------------------------------------------------------

    @classmethod
    def span(cls, rows: Iterable[Sequence], ambient_dim: int, backend: Backend = EXACT) -> "Subspace":
        rows = [list(r) for r in rows]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError(f"vectors must have length {ambient_dim}")
        if backend.exact:
            gens = []
            for r in rows:
                g = _int_row([GaussianRational.coerce(x) for x in r])
                if g is not None:
                    gens.append(g)
            return cls(ambient_dim, EXACT, gens)
        arr = np.array(rows, dtype=complex).reshape(len(rows), ambient_dim)
        return cls(ambient_dim, backend, _float_rref(arr, backend.tol))

    @classmethod
    def zero(cls, ambient_dim: int, backend: Backend = EXACT) -> "Subspace":
        return cls.span([], ambient_dim, backend)

    @classmethod
    def full(cls, ambient_dim: int, backend: Backend = EXACT) -> "Subspace":
        if backend.exact:
            eye = [tuple((1, 0) if i == j else (0, 0) for j in range(ambient_dim))
                   for i in range(ambient_dim)]
            s = cls(ambient_dim, EXACT, eye)
            s.__dict__["dim"] = ambient_dim
            return s
        eye = [[1 if i == j else 0 for j in range(ambient_dim)] for i in range(ambient_dim)]
        return cls.span(eye, ambient_dim, backend)

    # basic data -----------------------------------------------------------

    @cached_property
    def dim(self) -> int:
        if self.backend.exact:
            if "_q" in self.__dict__:
                return self._q.nrows() // 2
            if not self._gens or certified_ranks():
                return _gens_rank(self._gens, self.ambient_dim)
            bound = min(len(self._gens), self.ambient_dim)
            best = 0
            for which in range(len(_PRIMES)):
                best = max(best, self._mod(which).rank)
                if best == bound:
                    break
            return best
        return self._f.shape[0]

    @cached_property
    def _q(self) -> flint.fmpq_mat:
        # canonical realified RREF
        if not self._gens:
            return flint.fmpq_mat(0, 2 * self.ambient_dim)
        return _rref_q(flint.fmpq_mat(_realify_ints(self._gens, self.ambient_dim)))

    def _mod(self, which: int) -> _ModData:
        key = ("_mod", which)
        m = self.__dict__.get(key)
        if m is None:
            m = _ModData(_mod_rows(self._gens, self.ambient_dim, which))
            self.__dict__[key] = m
        return m

    @cached_property
    def basis(self) -> Matrix:
        if self.backend.exact:
            return Matrix(_complex_rows(self._q), self.ambient_dim, self.backend)
        return Matrix(tuple(tuple(complex(x) for x in r) for r in self._f), self.ambient_dim, self.backend)

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def _check(self, other: "Subspace") -> None:
        if not isinstance(other, Subspace):
            raise TypeError("expected a Subspace")
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )
        if other.backend.exact != self.backend.exact:
            raise ValueError("backend mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if other.ambient_dim != self.ambient_dim or other.backend.exact != self.backend.exact:
            return False
        if self.dim != other.dim:
            return False
        if self.backend.exact:
            return dim_of_sum(self, other) == self.dim
        scale = max(1.0, np.abs(self._f).max(initial=0), np.abs(other._f).max(initial=0))
        return bool(np.allclose(self._f, other._f, rtol=0, atol=self.backend.tol * scale * 10))

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.dim))

    def __repr__(self) -> str:
        rows = ", ".join(
            "(" + ", ".join(str(x) if self.backend.exact else _fmt_complex(x) for x in r) + ")"
            for r in self.basis.entries
        )
        return f"Subspace(dim={self.dim}/{self.ambient_dim}, span{{{rows}}})"

    # algebra ----------------------------------------------------------------

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        """Containment ``self ⊆ other``."""
        self._check(other)
        return dim_of_sum(self, other) == other.dim

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def conjugate(self) -> "Subspace":
        return subspace_conjugate(self)

    def is_real(self) -> bool:
        return self.conjugate() == self

    def contains_vector(self, v: Sequence) -> bool:
        return Subspace.span([v], self.ambient_dim, self.backend) <= self


def _from_q(m: flint.fmpq_mat, n: int) -> Subspace:
    """Exact subspace from a realified RREF (complex rows are the even rows)."""
    gens = []
    for row in _complex_rows(m):
        g = _int_row(row)
        if g is not None:
            gens.append(g)
    s = Subspace(n, EXACT, gens)
    s.__dict__["_q"] = m
    return s


def _joined(parts: Sequence[Subspace], n: int) -> Subspace:
    gens: list = []
    for p in parts:
        gens.extend(p._gens)
    s = Subspace(n, EXACT, gens)
    if len(gens) > 2 * n:
        s = _pruned(s)
    return s


def _pruned(s: Subspace) -> Subspace:
    # keep generators independent mod the first prime; they remain independent
    # over Q(i) and span whenever their number equals the dimension
    if certified_ranks():
        return Subspace.span(s.basis.entries, s.ambient_dim)
    n = s.ambient_dim
    m = _mod_rows(s._gens, n, 0).transpose()
    r, rk = m.rref()
    if rk != s.dim:
        return s
    e, cols = r.entries(), r.ncols()
    keep, row = [], 0
    for j in range(cols):
        if row < rk and int(e[row * cols + j]) != 0:
            keep.append(j)
            row += 1
    out = Subspace(n, EXACT, [s._gens[j] for j in keep])
    out.__dict__["dim"] = rk
    return out


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    a._check(b)
    if a.dim == 0 or b.is_full:
        return b
    if b.dim == 0 or a.is_full:
        return a
    if a.backend.exact:
        return _joined([a, b], a.ambient_dim)
    return Subspace(a.ambient_dim, a.backend, _float_rref(np.vstack([a._f, b._f]), a.backend.tol))


def sum_all(parts: Sequence[Subspace], ambient_dim: int, backend: Backend = EXACT) -> Subspace:
    """Sum of many subspaces."""
    parts = [p for p in parts if p.dim]
    for p in parts:
        if p.ambient_dim != ambient_dim:
            raise ValueError("ambient dimension mismatch")
    if not parts:
        return Subspace.zero(ambient_dim, backend)
    if len(parts) == 1:
        return parts[0]
    if backend.exact:
        return _joined(parts, ambient_dim)
    return Subspace(ambient_dim, backend, _float_rref(np.vstack([p._f for p in parts]), backend.tol))


def dim_of_sum(*parts: Subspace) -> int:
    """``dim(Σ parts)`` computed from a rank only (no canonical basis built)."""
    parts = [p for p in parts if p.dim]
    if not parts:
        return 0
    if len(parts) == 1:
        return parts[0].dim
    n = parts[0].ambient_dim
    if not parts[0].backend.exact:
        return float_rank(np.vstack([p._f for p in parts]), parts[0].backend.tol)
    low = max(p.dim for p in parts)
    bound = min(n, sum(p.dim for p in parts))
    if low == bound:
        return low
    if certified_ranks():
        gens = [g for p in parts for g in p._gens]
        return _realify_ints(gens, n).rank() // 2
    parts.sort(key=lambda p: -p.dim)
    best = low
    for which in range(len(_PRIMES)):
        best = max(best, _projected_rank([p._mod(which) for p in parts], bound))
        if best == bound:
            break
    return best


def dim_of_intersection(a: Subspace, b: Subspace) -> int:
    a._check(b)
    return a.dim + b.dim - dim_of_sum(a, b)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection by the Zassenhaus trick: RREF of [[a, a], [b, 0]]."""
    a._check(b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n, a.backend)
    if a.is_full:
        return b
    if b.is_full:
        return a
    if a.backend.exact:
        if a.dim + b.dim - dim_of_sum(a, b) == 0:
            return Subspace.zero(n)
        if a <= b:
            return a
        if b <= a:
            return b
        w = 2 * n
        qa, qb = a._q, b._q
        ea, eb = qa.entries(), qb.entries()
        zero = [flint.fmpq(0)] * w
        entries = []
        for k in range(qa.nrows()):
            row = ea[k * w : (k + 1) * w]
            entries.extend(row)
            entries.extend(row)
        for k in range(qb.nrows()):
            entries.extend(eb[k * w : (k + 1) * w])
            entries.extend(zero)
        big = _rref_q(flint.fmpq_mat(qa.nrows() + qb.nrows(), 2 * w, entries))
        e = big.entries()
        keep = []
        for k in range(big.nrows()):
            row = e[k * 2 * w : (k + 1) * 2 * w]
            if not any(row[:w]):
                keep.extend(row[w:])
        m = flint.fmpq_mat(len(keep) // w, w, keep)
        return _from_q(_rref_q(m), n)
    big = np.vstack([np.hstack([a._f, a._f]), np.hstack([b._f, np.zeros_like(b._f)])])
    r = _float_rref(big, a.backend.tol)
    left = np.abs(r[:, :n]).max(axis=1, initial=0) if r.size else np.zeros(0)
    rows = r[left == 0, n:]
    return Subspace(n, a.backend, _float_rref(rows, a.backend.tol))


def subspace_conjugate(a: Subspace) -> Subspace:
    if a.backend.exact:
        out = Subspace(a.ambient_dim, EXACT, [tuple((x, -y) for x, y in g) for g in a._gens])
        if "dim" in a.__dict__:
            out.__dict__["dim"] = a.dim
        if "_q" in a.__dict__:
            out.__dict__["_q"] = _conj_q(a._q)
        return out
    return Subspace(a.ambient_dim, a.backend, _float_rref(a._f.conj(), a.backend.tol))


def annihilator(a: Subspace) -> Subspace:
    """``{y : Σ_j x_j y_j = 0 for all x in a}`` (bilinear, no conjugation)."""
    n = a.ambient_dim
    rows = a.basis.entries
    pivots = []
    for r in rows:
        pivots.append(next(j for j, x in enumerate(r) if x))
    free = [j for j in range(n) if j not in set(pivots)]
    vecs = []
    for f in free:
        v = [GaussianRational(0) if a.backend.exact else 0j for _ in range(n)]
        v[f] = GaussianRational(1) if a.backend.exact else 1 + 0j
        for r, p in zip(rows, pivots):
            v[p] = -r[f]
        vecs.append(v)
    out = Subspace.span(vecs, n, a.backend)
    if a.backend.exact:
        out.__dict__["dim"] = len(vecs)
    return out


def kron(a: Subspace, b: Subspace) -> Subspace:
    """Tensor product ``a ⊗ b`` inside the Kronecker-product ambient space."""
    if a.backend.exact != b.backend.exact:
        raise ValueError("backend mismatch")
    n = a.ambient_dim * b.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n, a.backend)
    if a.backend.exact:
        ga, gb = _pruned_gens(a), _pruned_gens(b)
        gens = []
        for x in ga:
            for y in gb:
                row = []
                for xr, xi in x:
                    if not xr and not xi:
                        row.extend([(0, 0)] * len(y))
                        continue
                    for yr, yi in y:
                        row.append((xr * yr - xi * yi, xr * yi + xi * yr))
                gens.append(tuple(row))
        out = Subspace(n, EXACT, gens)
        if len(ga) == a.dim and len(gb) == b.dim:
            out.__dict__["dim"] = a.dim * b.dim
        return out
    rows = np.array([np.kron(x, y) for x in a._f for y in b._f])
    return Subspace(n, a.backend, _float_rref(rows, a.backend.tol))


def _pruned_gens(a: Subspace) -> tuple:
    if len(a._gens) == a.dim:
        return a._gens
    return _pruned(a)._gens


def direct_sum(a: Subspace, b: Subspace) -> Subspace:
    """``a ⊕ b`` inside the block ambient space (first block ``a``)."""
    if a.backend.exact != b.backend.exact:
        raise ValueError("backend mismatch")
    n1, n2 = a.ambient_dim, b.ambient_dim
    if a.backend.exact:
        z1, z2 = ((0, 0),) * n1, ((0, 0),) * n2
        gens = [g + z2 for g in a._gens] + [z1 + g for g in b._gens]
        out = Subspace(n1 + n2, EXACT, gens)
        out.__dict__["dim"] = a.dim + b.dim
        return out
    top = np.hstack([a._f, np.zeros((a.dim, n2), dtype=complex)])
    bot = np.hstack([np.zeros((b.dim, n1), dtype=complex), b._f])
    return Subspace(n1 + n2, a.backend, _float_rref(np.vstack([top, bot]), a.backend.tol))


def image(a: Subspace, g: Matrix) -> Subspace:
    """Image of ``a`` under the right action ``v -> v g`` of an ``n x k`` matrix."""
    if g.nrows != a.ambient_dim:
        raise ValueError("matrix height must equal the ambient dimension")
    if a.backend.exact:
        rows = [[GaussianRational(x, y) for x, y in v] for v in a._gens]
    else:
        rows = a.basis.entries
    cols = g.ncols
    zero = GaussianRational(0) if a.backend.exact else 0j
    out = []
    for v in rows:
        w = []
        for j in range(cols):
            s = zero
            for k, x in enumerate(v):
                if x:
                    s = s + x * g.entries[k][j]
            w.append(s)
        out.append(w)
    return Subspace.span(out, cols, a.backend)


def complement_in(sub: Subspace, big: Subspace) -> Subspace:
    """A complement of ``sub`` inside ``big``, spanned by basis rows of ``big``.

    Rows of the canonical basis of ``big`` are added greedily while they raise
    the dimension, so the result is deterministic.
    """
    sub._check(big)
    if not sub <= big:
        raise ValueError("sub must be contained in big")
    chosen: list = []
    current = sub
    need = big.dim - sub.dim
    for row in big.basis.entries:
        if len(chosen) == need:
            break
        line = Subspace.span([row], big.ambient_dim, big.backend)
        if dim_of_sum(current, line) > current.dim:
            chosen.append(row)
            current = current + line
    out = Subspace.span(chosen, big.ambient_dim, big.backend)
    if big.backend.exact:
        out.__dict__["dim"] = len(chosen)
    return out
