"""Hochschild coboundary, the degree-lowering boundary, the mixed bicomplex
and dimension computation for Hochschild, cyclic and truncated periodic
cohomology.

The degree-lowering operator is assembled as norm . extra-degeneracy .
(1 - signed cyclic operator).  This operator is stated with several
degree-placement conventions in the literature, so a small set of readings
is tried in a fixed order and the first one whose squares and anticommutator
vanish is selected and recorded.  Degrees within one of the truncation are
flagged untrusted in reports.
"""

from __future__ import annotations

from .linalg import SparseMatrix, SpanSolver, compose, kernel_basis
from .complexes import CocyclicComplex


class NotAComplex(Exception):
    """A square or anticommutator failed to vanish."""


def lam(cx, n):
    """Signed cyclic operator (-1)^n tau_n."""
    t = cx.tau(n)
    return t if n % 2 == 0 else t.scale(-1)


def norm_operator(cx, n, extra_term=False):
    """1 + lam + ... + lam^n (optionally one extra term, a common variant)."""
    I = SparseMatrix.identity(cx.dim(n))
    total = I
    power = I
    steps = n + (1 if extra_term else 0)
    for _ in range(steps):
        power = compose(lam(cx, n), power)
        total = total + power
    return total


def hochschild_b(cx: CocyclicComplex):
    """Alternating-sum coboundaries b_n for 0 <= n <= N; b.b = 0 is asserted."""
    bs = []
    for n in range(cx.N + 1):
        m = SparseMatrix.zeros(cx.dim(n + 1), cx.dim(n))
        for i in range(n + 2):
            f = cx.face(n, i)
            m = m + (f if i % 2 == 0 else f.scale(-1))
        bs.append(m)
    for n in range(cx.N):
        if not compose(bs[n + 1], bs[n]).is_zero():
            raise NotAComplex("b.b != 0 at degree %d" % n)
    return bs


_B_VARIANTS = ("norm.degen.tau.(1-lam)", "norm.degen.(tau-sign)", "long-norm.degen.tau.(1-lam)")


def _connes_B_variant(cx, variant):
    top = cx.top
    out = [SparseMatrix.zeros(0, cx.dim(0))]   # degree 0 -> nothing, by convention
    for n in range(1, top + 1):
        I = SparseMatrix.identity(cx.dim(n))
        if variant == "norm.degen.tau.(1-lam)":
            b0 = compose(cx.degen(n, n - 1), compose(cx.tau(n), I - lam(cx, n)))
            B = compose(norm_operator(cx, n - 1), b0)
        elif variant == "norm.degen.(tau-sign)":
            sign = -1 if n % 2 == 0 else 1
            b0 = compose(cx.degen(n, n - 1), cx.tau(n)) + cx.degen(n, n - 1).scale(sign)
            B = compose(norm_operator(cx, n - 1), b0)
        else:
            b0 = compose(cx.degen(n, n - 1), compose(cx.tau(n), I - lam(cx, n)))
            B = compose(norm_operator(cx, n - 1, extra_term=True), b0)
        out.append(B)
    return out


def connes_B(cx: CocyclicComplex):
    """(per-degree matrices B_n: n -> n-1, chosen variant name).

    Certifies B.B = 0 and bB + Bb = 0 on the checkable window; tries the
    fallback readings if the primary fails, and raises NotAComplex when none
    passes.
    """
    bs = hochschild_b(cx)
    last = None
    for variant in _B_VARIANTS:
        Bs = _connes_B_variant(cx, variant)
        ok = True
        for n in range(2, cx.top + 1):
            if not compose(Bs[n - 1], Bs[n]).is_zero():
                ok = False
                break
        if ok:
            for n in range(1, cx.N + 1):
                anti = compose(bs[n - 1], Bs[n]) + compose(Bs[n + 1], bs[n])
                if not anti.is_zero():
                    ok = False
                    break
        if ok:
            return Bs, variant
        last = variant
    raise NotAComplex("no reading of the boundary operator satisfies B.B = 0 and bB+Bb = 0 (last tried %s)" % last)


class BBData:
    """A complex with its coboundary and boundary families, certificates run."""

    def __init__(self, complex):
        self.complex = complex
        self.b = hochschild_b(complex)
        self.B, self.variant = connes_B(complex)

    def checkable_degrees(self):
        return range(1, self.complex.N + 1)


class CohomologyReport:
    """Per-degree dimensions with trust flags and a truncated periodic summary."""

    def __init__(self, hh, hc, hp_even, hp_odd, hh_reps, cyclic_reps, b_variant):
        self.hh = hh                  # list of (degree, dim)
        self.hc = hc                  # list of (degree, dim, trusted)
        self.hp_even = hp_even        # (value, stable) or None
        self.hp_odd = hp_odd
        self.hh_reps = hh_reps        # degree -> list of representative cochains
        self.cyclic_reps = cyclic_reps
        self.b_variant = b_variant

    def hh_dims(self):
        return [d for _, d in self.hh]

    def hc_dims(self, trusted_only=False):
        return [d for _, d, t in self.hc if t or not trusted_only]

    def lines(self):
        out = []
        for n, d in self.hh:
            out.append("HH %d %d" % (n, d))
        for n, d, t in self.hc:
            out.append("HC %d %d %s" % (n, d, "trusted" if t else "untrusted"))
        for label, hp in (("even", self.hp_even), ("odd", self.hp_odd)):
            if hp is None:
                out.append("HP %s - unstable" % label)
            else:
                out.append("HP %s %d %s" % (label, hp[0], "stable" if hp[1] else "unstable"))
        return out


def total_differential(cx, bs, Bs, n):
    """(b+B) from total degree n to n+1 of the first-quadrant bicomplex.

    Total degree n holds the column pieces C^{n-2k}; the block entering
    target column k is b from source column k plus B from source column k-1.
    """
    src = [n - 2 * k for k in range(n // 2 + 1)]
    tgt = [n + 1 - 2 * k for k in range((n + 1) // 2 + 1)]
    src_off = []
    off = 0
    for d in src:
        src_off.append(off)
        off += cx.dim(d)
    src_total = off
    tgt_off = []
    off = 0
    for d in tgt:
        tgt_off.append(off)
        off += cx.dim(d)
    tgt_total = off
    ent = {}
    for k, d in enumerate(src):
        # b: stays in column k
        for (r, c), x in bs[d].entries.items():
            ent[(tgt_off[k] + r, src_off[k] + c)] = x
        # B: moves to column k+1 (target degree d-1)
        if d >= 1 and k + 1 < len(tgt):
            for (r, c), x in Bs[d].entries.items():
                ent[(tgt_off[k + 1] + r, src_off[k] + c)] = x
    return SparseMatrix(tgt_total, src_total, ent)


def cyclic_cocycles(cx, n, bs=None):
    """Basis of cochains with b phi = 0 and (1 - lam) phi = 0."""
    if bs is None:
        bs = hochschild_b(cx)
    b = bs[n]
    I = SparseMatrix.identity(cx.dim(n))
    cyc = I - lam(cx, n)
    ent = {}
    for (r, c), x in b.entries.items():
        ent[(r, c)] = x
    off = b.rows
    for (r, c), x in cyc.entries.items():
        ent[(off + r, c)] = x
    return kernel_basis(SparseMatrix(b.rows + cyc.rows, cx.dim(n), ent))


def compute_cohomology(cx: CocyclicComplex) -> CohomologyReport:
    bs = hochschild_b(cx)
    Bs, variant = connes_B(cx)
    N = cx.N
    hh, hh_reps = [], {}
    for n in range(N):
        ker = kernel_basis(bs[n])
        if n == 0:
            img = []
        else:
            img = [c for c in bs[n - 1].columns() if c]
        solver = SpanSolver()
        for v in img:
            solver.add(v)
        reps = []
        for v in ker:
            red = solver.reduce(v)
            if red and solver.add(red):
                reps.append(red)
        hh.append((n, len(reps)))
        hh_reps[n] = reps
    hc = []
    for n in range(N):
        Dn = total_differential(cx, bs, Bs, n)
        ker = kernel_basis(Dn)
        if n == 0:
            rank_img = 0
        else:
            Dprev = total_differential(cx, bs, Bs, n - 1)
            from .linalg import image_rank
            rank_img = image_rank(Dprev)
        dim = len(ker) - rank_img
        trusted = n <= N - 2
        hc.append((n, dim, trusted))
    cyc_reps = {n: cyclic_cocycles(cx, n, bs) for n in range(N + 1)}
    # truncated periodic summary: the last two trusted values of each parity
    def hp(parity):
        vals = [d for n, d, t in hc if t and n % 2 == parity]
        if len(vals) >= 2 and vals[-1] == vals[-2]:
            return (vals[-1], True)
        if vals:
            return (vals[-1], False)
        return None
    return CohomologyReport(hh, hc, hp(0), hp(1), hh_reps, cyc_reps, variant)
