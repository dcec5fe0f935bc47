"""Finite-dimensional (co)algebra and Hopf algebra data with machine-checked axioms.

All axioms are checked as exact matrix identities; a validation report lists
every violating basis tuple with its residual vector, never just the first.
"""

from __future__ import annotations

from .linalg import SparseMatrix, compose, tensor_kron, vector_to_text, scal
from .spaces import GROUND, MultiIndex, StructureTensor


class BracketingMismatch(Exception):
    """Iterated coproduct differs between bracketings; coassociativity is broken."""


class Violation:
    __slots__ = ("law", "where", "residual")

    def __init__(self, law, where, residual):
        self.law = law
        self.where = tuple(where)
        self.residual = residual

    def __repr__(self):
        return "Violation(%s at %s: %s)" % (self.law, self.where, vector_to_text(self.residual))


class ValidationReport:
    """Exhaustive list of axiom violations, sorted by (law, basis tuple)."""

    def __init__(self, subject=""):
        self.subject = subject
        self.violations = []

    @property
    def ok(self):
        return not self.violations

    def extend_from_matrix(self, law, diff, domains):
        """Record one violation per nonzero column of an identity residual."""
        if diff.is_zero():
            return
        mi = MultiIndex(tuple(s.dim for s in domains))
        bad = {}
        for (r, c), x in diff.entries.items():
            bad.setdefault(c, {})[r] = x
        for c in sorted(bad):
            idx = mi.unflat(c)
            labels = tuple(s.labels[i] for s, i in zip(domains, idx))
            self.violations.append(Violation(law, labels, bad[c]))

    def merge(self, other):
        self.violations.extend(other.violations)
        return self

    def sort(self):
        self.violations.sort(key=lambda v: (v.law, v.where))
        return self

    def lines(self):
        if self.ok:
            return ["ok"]
        out = ["VIOLATIONS (%d):" % len(self.violations)]
        for v in self.violations:
            out.append("  %s at (%s): %s" % (v.law, ",".join(v.where), vector_to_text(v.residual)))
        return out

    def __repr__(self):
        return "ValidationReport(%s: %s)" % (self.subject, "ok" if self.ok else "%d violations" % len(self.violations))


# ---------------------------------------------------------------------------
# data bundles

class AlgebraData:
    """Associative unital algebra as structure constants."""

    def __init__(self, space, mul, unit):
        self.space = space
        self.mul = mul        # StructureTensor, arity 2
        self.unit = dict(unit)

    def mul_matrix(self):
        return self.mul.as_matrix()

    def unit_matrix(self):
        return SparseMatrix(self.space.dim, 1, {(i, 0): x for i, x in self.unit.items()})


class CoalgebraData:
    """Coassociative counital coalgebra as structure constants."""

    def __init__(self, space, comul, counit):
        self.space = space
        self.comul = comul    # StructureTensor, arity 1, codomain space (x) space
        self.counit = dict(counit)

    def comul_matrix(self):
        return self.comul.as_matrix()

    def counit_matrix(self):
        return SparseMatrix(1, self.space.dim, {(0, i): x for i, x in self.counit.items()})


class HopfData:
    """Bialgebra with invertible antipode; validity via validate_hopf."""

    def __init__(self, alg, coalg, antipode, antipode_inv=None):
        if alg.space != coalg.space:
            raise ValueError("algebra and coalgebra live on different spaces")
        self.alg = alg
        self.coalg = coalg
        self.space = alg.space
        self.antipode = antipode
        if antipode_inv is None:
            antipode_inv = _invert(antipode)
        self.antipode_inv = antipode_inv

    @property
    def dim(self):
        return self.space.dim


def _invert(m):
    from .linalg import invert_matrix
    return invert_matrix(m)


# ---------------------------------------------------------------------------
# validators

def validate_algebra(a: AlgebraData) -> ValidationReport:
    rep = ValidationReport("algebra")
    d = a.space.dim
    I = SparseMatrix.identity(d)
    mul = a.mul_matrix()
    eta = a.unit_matrix()
    # (xy)z = x(yz)
    assoc = compose(mul, tensor_kron(mul, I)) - compose(mul, tensor_kron(I, mul))
    rep.extend_from_matrix("associativity", assoc, (a.space,) * 3)
    # 1x = x and x1 = x
    rep.extend_from_matrix("left-unit", compose(mul, tensor_kron(eta, I)) - I, (a.space,))
    rep.extend_from_matrix("right-unit", compose(mul, tensor_kron(I, eta)) - I, (a.space,))
    return rep.sort()


def validate_coalgebra(c: CoalgebraData) -> ValidationReport:
    rep = ValidationReport("coalgebra")
    d = c.space.dim
    I = SparseMatrix.identity(d)
    com = c.comul_matrix()
    eps = c.counit_matrix()
    coassoc = compose(tensor_kron(com, I), com) - compose(tensor_kron(I, com), com)
    rep.extend_from_matrix("coassociativity", coassoc, (c.space,))
    rep.extend_from_matrix("left-counit", compose(tensor_kron(eps, I), com) - I, (c.space,))
    rep.extend_from_matrix("right-counit", compose(tensor_kron(I, eps), com) - I, (c.space,))
    return rep.sort()


def swap_matrix(d1, d2):
    """V (x) W -> W (x) V on flat indices."""
    ent = {}
    for i in range(d1):
        for j in range(d2):
            ent[(j * d1 + i, i * d2 + j)] = 1
    return SparseMatrix(d1 * d2, d1 * d2, ent)


def validate_hopf(h: HopfData) -> ValidationReport:
    rep = ValidationReport("hopf")
    rep.merge(validate_algebra(h.alg))
    rep.merge(validate_coalgebra(h.coalg))
    d = h.dim
    I = SparseMatrix.identity(d)
    mul, eta = h.alg.mul_matrix(), h.alg.unit_matrix()
    com, eps = h.coalg.comul_matrix(), h.coalg.counit_matrix()
    sw = swap_matrix(d, d)
    # comultiplication and counit are algebra maps
    lhs = compose(com, mul)
    rhs = compose(tensor_kron(mul, mul), compose(tensor_kron(I, tensor_kron(sw, I)), tensor_kron(com, com)))
    rep.extend_from_matrix("comul-multiplicative", lhs - rhs, (h.space, h.space))
    rep.extend_from_matrix("comul-unital", compose(com, eta) - tensor_kron(eta, eta), (GROUND,))
    rep.extend_from_matrix("counit-multiplicative", compose(eps, mul) - tensor_kron(eps, eps), (h.space, h.space))
    one = compose(eps, eta)
    rep.extend_from_matrix("counit-unital", one - SparseMatrix.identity(1), (GROUND,))
    # antipode: S(h1)h2 = eps(h)1 = h1 S(h2)
    S = h.antipode
    eta_eps = compose(eta, eps)
    rep.extend_from_matrix("antipode-left", compose(mul, compose(tensor_kron(S, I), com)) - eta_eps, (h.space,))
    rep.extend_from_matrix("antipode-right", compose(mul, compose(tensor_kron(I, S), com)) - eta_eps, (h.space,))
    Sinv = h.antipode_inv
    if Sinv is None:
        rep.violations.append(Violation("antipode-invertible", ("*",), {}))
    else:
        rep.extend_from_matrix("antipode-inverse", compose(Sinv, S) - I, (h.space,))
        rep.extend_from_matrix("inverse-antipode", compose(S, Sinv) - I, (h.space,))
    return rep.sort()


# ---------------------------------------------------------------------------
# iterated coproducts

def iterated_coproduct(c: CoalgebraData, n: int) -> StructureTensor:
    """Map space -> space^(x n): identity for n=1, comul for n=2, etc.

    Asserts the leftmost bracketing equals one alternative bracketing so
    broken coassociativity cannot silently propagate.
    """
    if n < 1:
        raise ValueError("n must be positive")
    d = c.space.dim
    I = SparseMatrix.identity(d)
    com = c.comul_matrix()
    if n == 1:
        return StructureTensor.from_matrix(I, (c.space,), c.space)
    left = com
    for k in range(2, n):
        left = compose(tensor_kron(com, SparseMatrix.identity(d ** (k - 1))), left)
    if n > 2:
        alt = com
        for k in range(2, n):
            alt = compose(tensor_kron(SparseMatrix.identity(d ** (k - 1)), com), alt)
        if alt != left:
            raise BracketingMismatch("iterated coproduct depends on bracketing")
    from .spaces import tensor_power
    return StructureTensor.from_matrix(left, (c.space,), tensor_power(c.space, n))


# ---------------------------------------------------------------------------
# modular pairs and the twisted antipode

class ModularPair:
    """Character delta plus group-like sigma on a Hopf algebra."""

    def __init__(self, hopf, delta, sigma):
        self.hopf = hopf
        self.delta = dict(delta)     # functional on the space
        self.sigma = dict(sigma)     # vector in the space

    def delta_matrix(self):
        return SparseMatrix(1, self.hopf.dim, {(0, i): x for i, x in self.delta.items()})

    def sigma_matrix(self):
        return SparseMatrix(self.hopf.dim, 1, {(i, 0): x for i, x in self.sigma.items()})

    def delta_of(self, vec):
        return scal(sum(self.delta.get(i, 0) * x for i, x in vec.items()))


def validate_modular_pair(mp: ModularPair) -> ValidationReport:
    rep = ValidationReport("modular-pair")
    h = mp.hopf
    dm = mp.delta_matrix()
    sm = mp.sigma_matrix()
    mul, eta = h.alg.mul_matrix(), h.alg.unit_matrix()
    com, eps = h.coalg.comul_matrix(), h.coalg.counit_matrix()
    rep.extend_from_matrix("character-multiplicative", compose(dm, mul) - tensor_kron(dm, dm), (h.space, h.space))
    rep.extend_from_matrix("character-unital", compose(dm, eta) - SparseMatrix.identity(1), (GROUND,))
    rep.extend_from_matrix("grouplike-comul", compose(com, sm) - tensor_kron(sm, sm), (GROUND,))
    rep.extend_from_matrix("grouplike-counit", compose(eps, sm) - SparseMatrix.identity(1), (GROUND,))
    rep.extend_from_matrix("delta-of-sigma", compose(dm, sm) - SparseMatrix.identity(1), (GROUND,))
    return rep.sort()


def twisted_antipode(mp: ModularPair) -> SparseMatrix:
    """h -> delta(h^(1)) S(h^(2))."""
    h = mp.hopf
    S = h.antipode
    com = h.coalg.comul_matrix()
    return compose(tensor_kron(mp.delta_matrix(), S), com)


def involution_flags(mp: ModularPair):
    """(twisted antipode == Ad_sigma, its square == Ad_sigma) as booleans.

    Reported as data only: coefficient validity is decided by the SAYD check,
    not by either identity.
    """
    h = mp.hopf
    d = h.dim
    St = twisted_antipode(mp)
    mul = h.alg.mul_matrix()
    sm = mp.sigma_matrix()
    sinv = _grouplike_inverse(h, mp.sigma)
    if sinv is None:
        return (False, False)
    sinv_m = SparseMatrix(d, 1, {(i, 0): x for i, x in sinv.items()})
    I = SparseMatrix.identity(d)
    # Ad_sigma(x) = sigma x sigma^{-1}
    left = compose(mul, tensor_kron(sm, I))          # d x d
    ad = compose(mul, tensor_kron(left, sinv_m))
    return (St == ad, compose(St, St) == ad)


def _grouplike_inverse(h, sigma):
    """Inverse of a group-like element, if it exists in the span."""
    d = h.dim
    mul = h.alg.mul_matrix()
    sm = {i: x for i, x in sigma.items()}
    # solve sigma * y = 1
    left = compose(mul, tensor_kron(SparseMatrix(d, 1, {(i, 0): x for i, x in sm.items()}),
                                    SparseMatrix.identity(d)))
    from .linalg import SpanSolver
    solver = SpanSolver(track=True)
    for col in left.columns():
        solver.add(col)
    coeff = solver.solve(dict(h.alg.unit))
    return coeff
