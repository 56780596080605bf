"""Seeded property suite for the R-splitting level.

Every case ``i`` of a run with seed ``s`` draws its instances from
``random.Random(f"{s}:{i}:{name}")``, one stream per property, so a single
case (or a single property) can be replayed in isolation.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .document import dump_mhs
from .filtration import are_opposed
from .generators import random_cohomology, random_extension_triple, random_mhs
from .mhs import (
    MixedHodgeStructure,
    alpha,
    deligne_lemma_failures,
    direct_sum,
    dual,
    extension_build,
    hodge_numbers,
    is_r_split,
    kunneth_piece,
    t_numbers_direct,
    tate,
    tate_twist,
    tensor,
)
from .rees_chern import (
    chern_quotient_sheaf,
    chern_rees_blowup,
    chern_rees_p2,
    chern_rees_p2_opposed,
    mhs_filtrations,
)

AlphaFn = Callable[[MixedHodgeStructure], int]


@dataclass
class Failure:
    case: int
    prop: str
    message: str
    dump: str = ""


@dataclass
class VerifyReport:
    seed: str
    cases: int
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [f"seed {self.seed}, {self.cases} cases"]
        for name in PROPERTIES:
            bad = sum(1 for f in self.failures if f.prop == name)
            lines.append(f"  {name:<14} {'FAIL' if bad else 'ok':<4} "
                         f"{self.checks.get(name, 0)} checks, {bad} failures")
        for f in self.failures:
            lines.append(f"FAIL case {f.case} [{f.prop}]: {f.message}")
            if f.dump:
                lines.append(f.dump.rstrip())
            lines.append(f"replay: hodgerees verify --seed {self.seed} --case {f.case} --only {f.prop}")
        lines.append("all properties hold" if self.ok else f"{len(self.failures)} failures")
        return "\n".join(lines)


# each property returns (number of checks, list of (message, structures to dump))

def _tate(rng, a: AlphaFn):
    h = random_mhs(rng)
    base = a(h)
    out = []
    for k in range(-2, 3):
        for name, twisted in (("twist", tate_twist(h, k)), ("tensor", tensor(h, tate(k)))):
            if a(twisted) != base:
                out.append((f"α(H ⊗ T⟨{k}⟩) via {name} = {a(twisted)} but α(H) = {base}", [h]))
    return 10, out


def _dual(rng, a: AlphaFn):
    h = random_mhs(rng)
    d = dual(h)
    out = []
    if a(d) != a(h):
        out.append((f"α(H*) = {a(d)} but α(H) = {a(h)}", [h]))
    hn, dn = hodge_numbers(h), hodge_numbers(d)
    if +dn.h != +type(dn.h)({(-p, -q): v for (p, q), v in hn.h.items()}):
        out.append(("h-numbers of the dual are not h^{-p,-q}", [h]))
    if +dn.t != +type(dn.t)({(-p, -q): v for (p, q), v in hn.t.items()}):
        out.append(("t-numbers of the dual are not t^{-p,-q}", [h]))
    return 3, out


def _direct_sum(rng, a: AlphaFn):
    h, g = random_mhs(rng), random_mhs(rng)
    s = direct_sum(h, g)
    if a(s) != a(h) + a(g):
        return 1, [(f"α(H ⊕ H') = {a(s)} but α(H) + α(H') = {a(h)} + {a(g)}", [h, g])]
    return 1, []


def _tensor(rng, a: AlphaFn):
    h, g = random_mhs(rng), random_mhs(rng)
    t = tensor(h, g)
    want = g.ambient_dim * a(h) + h.ambient_dim * a(g)
    if a(t) != want:
        return 1, [(f"α(H ⊗ H') = {a(t)} but dim H'·α(H) + dim H·α(H') = {want}", [h, g])]
    return 1, []


def _inegext(rng, a: AlphaFn):
    A, B, ext = random_extension_triple(rng)
    H = extension_build(A, B, ext)
    out = []
    if a(H) < a(A) + a(B):
        out.append((f"α(H) = {a(H)} < α(A) + α(B) = {a(A)} + {a(B)}", [A, B, H]))
    nh, na, nb = hodge_numbers(H), hodge_numbers(A), hodge_numbers(B)
    lo = min(n.box[0] for n in (nh, na, nb)) - 1
    hi = max(n.box[1] for n in (nh, na, nb)) + 1
    for p in range(lo, hi + 1):
        for q in range(lo, hi + 1):
            d = nh.f_at(p, q) - na.f_at(p, q) - nb.f_at(p, q)
            if d > 0:
                out.append((f"f^{p},{q}_H - f_A - f_B = {d} > 0", [A, B, H]))
    return 1 + (hi - lo + 1) ** 2, out


def _positivity(rng, a: AlphaFn):
    h = random_mhs(rng)
    v = a(h)
    out = []
    if not isinstance(v, int) or v < 0:
        out.append((f"α = {v!r} is not a nonnegative integer", [h]))
    if (v == 0) != is_r_split(h):
        out.append((f"α = {v} but is_r_split = {is_r_split(h)}", [h]))
    return 2, out


def _deligne(rng, a: AlphaFn):
    h = random_mhs(rng)
    return 4, [(msg, [h]) for msg in deligne_lemma_failures(h)]


def _chern(rng, a: AlphaFn):
    h = random_mhs(rng)
    f0, f1, f2 = mhs_filtrations(h)
    out = []
    full = chern_rees_p2(f0, f1, f2)
    if not are_opposed(f0, f1, f2):
        out.append(("(W, F, F̄) are not opposed", [h]))
    elif chern_rees_p2_opposed(f0, f1, f2) != full:
        out.append((f"opposed closed form {chern_rees_p2_opposed(f0, f1, f2)} != {full}", [h]))
    if full.c1w2 != 0:
        out.append((f"c1 = {full.c1w2} != 0", [h]))
    gap = full.ch2w4 - chern_rees_blowup(f0, f1, f2).ch2w4
    if gap != chern_quotient_sheaf(f1, f2).ch2w4:
        out.append((f"ch2(P2) - ch2(blow-up) = {gap} != ch2(F)", [h]))
    if -full.ch2w4 != a(h):
        out.append((f"-ch2 = {-full.ch2w4} but α = {a(h)}", [h]))
    return 4, out


def _t_direct(rng, a: AlphaFn):
    h = random_mhs(rng)
    if +hodge_numbers(h).t != +t_numbers_direct(h):
        return 1, [("t from f-numbers differs from the direct quotient count", [h])]
    return 1, []


def _kunneth(rng, a: AlphaFn):
    xs = random_cohomology(rng, max_dim=2)
    ys = random_cohomology(rng, max_dim=2)
    out = []
    for k in range(len(xs) + len(ys) - 1):
        got = a(kunneth_piece(xs, ys, k))
        want = 0
        for i, x in enumerate(xs):
            if 0 <= k - i < len(ys):
                y = ys[k - i]
                want += y.ambient_dim * a(x) + x.ambient_dim * a(y)
        if got != want:
            out.append((f"α_{k}(X × Y) = {got} but the Künneth formula gives {want}", xs + ys))
    return len(xs) + len(ys) - 1, out


PROPERTIES: dict[str, Callable] = {
    "tate": _tate,
    "dual": _dual,
    "direct_sum": _direct_sum,
    "tensor": _tensor,
    "inegext": _inegext,
    "positivity": _positivity,
    "deligne": _deligne,
    "chern": _chern,
    "t_direct": _t_direct,
    "kunneth": _kunneth,
}


def _run_case(args) -> tuple[int, dict, list]:
    seed, i, names, alpha_fn = args
    checks, failures = {}, []
    for name in names:
        rng = random.Random(f"{seed}:{i}:{name}")
        n, bad = PROPERTIES[name](rng, alpha_fn)
        checks[name] = n
        for msg, structures in bad:
            dump = "\n".join(dump_mhs(s) for s in structures)
            failures.append(Failure(i, name, msg, dump))
    return i, checks, failures


def run_verify(seed: int | str = 1, cases: int = 200, only: Iterable[str] | None = None,
               alpha_fn: AlphaFn = alpha, workers: int = 1,
               case_indices: Iterable[int] | None = None) -> VerifyReport:
    """Run the property suite; results do not depend on ``workers``."""
    names = list(PROPERTIES) if only is None else list(only)
    unknown = [n for n in names if n not in PROPERTIES]
    if unknown:
        raise ValueError(f"unknown properties: {', '.join(unknown)}")
    indices = list(range(cases)) if case_indices is None else list(case_indices)
    report = VerifyReport(str(seed), len(indices))
    jobs = [(seed, i, names, alpha_fn) for i in indices]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_case, jobs))
    else:
        results = [_run_case(j) for j in jobs]
    for _, checks, failures in sorted(results, key=lambda r: r[0]):
        for name, n in checks.items():
            report.checks[name] = report.checks.get(name, 0) + n
        report.failures.extend(failures)
    return report


def flipped_alpha(h: MixedHodgeStructure) -> int:
    """Sign-flipped α, for checking that the suite can fail."""
    return -alpha(h)


__all__ = ["PROPERTIES", "Failure", "VerifyReport", "run_verify", "flipped_alpha"]
