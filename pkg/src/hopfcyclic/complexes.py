"""Cocyclic complexes as explicit per-degree operator matrices.

Four builders: the coalgebra complex (coinvariant-quotient realization), the
algebra complex (equivariant-functional realization), the comodule-algebra
complex (colinear-map realization) and the normalized Hopf complex on tensor
powers together with its certified isomorphism to the coalgebra complex.
Tensor products of complexes, their diagonals and the degreewise product are
built from the same matrices.

A complex built with truncation N carries spaces 0..N+1 so that faces, and
hence the Hochschild coboundary, exist at degree N.  check_cocyclic verifies
the seven cosimplicial/cyclic identity families as exact matrix equalities
wherever every composite is defined.
"""

from __future__ import annotations

import hashlib
from itertools import product as iproduct

from .linalg import (SparseMatrix, SpanSolver, compose, tensor_kron, scal,
                     invert_matrix, matrix_to_text, matrix_from_text,
                     vec_axpy)
from .spaces import BasedSpace, MultiIndex, tensor_power, tensor_space
from .hopf import iterated_coproduct
from .actions import QuotientSpace


class IllDefined(Exception):
    """An operator does not descend to / preserve the realized space."""


class ConjugationFailure(Exception):
    """The normalization isomorphism fails to intertwine an operator."""


class CocyclicComplex:
    """Spaces 0..top with faces, degeneracies and cyclic operators.

    faces[n][i] : space_n -> space_{n+1}   for 0 <= n <= N,   0 <= i <= n+1
    degens[n][j]: space_n -> space_{n-1}   for 1 <= n <= top, 0 <= j <= n-1
    taus[n]     : space_n -> space_n       for 0 <= n <= top
    """

    def __init__(self, N, spaces, faces, degens, taus, name=""):
        self.N = N
        self.top = len(spaces) - 1
        self.spaces = spaces
        self.faces = faces
        self.degens = degens
        self.taus = taus
        self.name = name

    def dim(self, n):
        return self.spaces[n].dim

    def face(self, n, i):
        return self.faces[n][i]

    def degen(self, n, j):
        return self.degens[n][j]

    def tau(self, n):
        return self.taus[n]

    def dims(self):
        return [s.dim for s in self.spaces]


class Cochain:
    """A coefficient vector in one degree of a complex."""

    __slots__ = ("complex", "degree", "vector")

    def __init__(self, complex, degree, vector):
        if not (0 <= degree <= complex.top):
            raise ValueError("degree %d outside 0..%d" % (degree, complex.top))
        for i in vector:
            if not (0 <= i < complex.dim(degree)):
                raise ValueError("coefficient index out of range")
        self.complex = complex
        self.degree = degree
        self.vector = dict(vector)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.degree == other.degree
                and self.vector == other.vector)

    def __repr__(self):
        from .linalg import vector_to_text
        return "Cochain(deg %d: %s)" % (self.degree, vector_to_text(self.vector))


class CocyclicViolation:
    __slots__ = ("family", "degree", "indices")

    def __init__(self, family, degree, indices):
        self.family = family
        self.degree = degree
        self.indices = tuple(indices)

    def __repr__(self):
        return "CocyclicViolation(%s, n=%d, %s)" % (self.family, self.degree, self.indices)


def check_cocyclic(cx: CocyclicComplex):
    """Exhaustive identity check; returns the (possibly empty) violation list."""
    bad = []
    N, top = cx.N, cx.top
    # face-face:  d_j d_i = d_i d_{j-1},  i < j
    for n in range(N):
        for i in range(n + 2):
            for j in range(i + 1, n + 3):
                lhs = compose(cx.face(n + 1, j), cx.face(n, i))
                rhs = compose(cx.face(n + 1, i), cx.face(n, j - 1))
                if lhs != rhs:
                    bad.append(CocyclicViolation("face-face", n, (i, j)))
    # degen-degen:  s_j s_i = s_i s_{j+1},  i <= j
    for n in range(2, top + 1):
        for i in range(n - 1):
            for j in range(i, n - 1):
                lhs = compose(cx.degen(n - 1, j), cx.degen(n, i))
                rhs = compose(cx.degen(n - 1, i), cx.degen(n, j + 1))
                if lhs != rhs:
                    bad.append(CocyclicViolation("degen-degen", n, (i, j)))
    # degen-face
    for n in range(N + 1):
        for i in range(n + 2):
            for j in range(n + 1):
                lhs = compose(cx.degen(n + 1, j), cx.face(n, i))
                if i < j:
                    if n == 0:
                        continue
                    rhs = compose(cx.face(n - 1, i), cx.degen(n, j - 1))
                elif i in (j, j + 1):
                    rhs = SparseMatrix.identity(cx.dim(n))
                else:
                    if n == 0:
                        continue
                    rhs = compose(cx.face(n - 1, i - 1), cx.degen(n, j))
                if lhs != rhs:
                    bad.append(CocyclicViolation("degen-face", n, (i, j)))
    # cyclic-face:  t_n d_i = d_{i-1} t_{n-1} (1<=i<=n),  t_n d_0 = d_n
    for n in range(1, top + 1):
        for i in range(1, n + 1):
            lhs = compose(cx.tau(n), cx.face(n - 1, i))
            rhs = compose(cx.face(n - 1, i - 1), cx.tau(n - 1))
            if lhs != rhs:
                bad.append(CocyclicViolation("cyclic-face", n, (i,)))
        if compose(cx.tau(n), cx.face(n - 1, 0)) != cx.face(n - 1, n):
            bad.append(CocyclicViolation("cyclic-face", n, (0,)))
    # cyclic-degen:  t_n s_i = s_{i-1} t_{n+1} (1<=i<=n),  t_n s_0 = s_n t_{n+1}^2
    for n in range(N + 1):
        for i in range(1, n + 1):
            lhs = compose(cx.tau(n), cx.degen(n + 1, i))
            rhs = compose(cx.degen(n + 1, i - 1), cx.tau(n + 1))
            if lhs != rhs:
                bad.append(CocyclicViolation("cyclic-degen", n, (i,)))
        t2 = compose(cx.tau(n + 1), cx.tau(n + 1))
        if compose(cx.tau(n), cx.degen(n + 1, 0)) != compose(cx.degen(n + 1, n), t2):
            bad.append(CocyclicViolation("cyclic-degen", n, (0,)))
    # cyclic-order:  t_n^{n+1} = id
    for n in range(top + 1):
        t = cx.tau(n)
        power = SparseMatrix.identity(cx.dim(n))
        for _ in range(n + 1):
            power = compose(t, power)
        if power != SparseMatrix.identity(cx.dim(n)):
            bad.append(CocyclicViolation("cyclic-order", n, ()))
    return bad


# ---------------------------------------------------------------------------
# shared expansion tables

class HopfTables:
    """Sparse lookup tables for one Hopf algebra, shared by the builders."""

    def __init__(self, hopf, depth):
        if hopf.antipode_inv is None:
            raise ValueError("antipode is not invertible; fix the input data")
        self.hopf = hopf
        d = hopf.dim
        self.dim = d
        self.mul = {}           # (i,j) -> list (k, coeff)
        for (i, j) in iproduct(range(d), range(d)):
            v = hopf.alg.mul.value((i, j))
            if v:
                self.mul[(i, j)] = sorted(v.items())
        self.unit = sorted(hopf.alg.unit.items())
        self.eps = dict(hopf.coalg.counit)
        self.comul = {}         # i -> list ((a,b), coeff)
        for i in range(d):
            v = hopf.coalg.comul.value((i,))
            self.comul[i] = sorted(((divmod(k, d)), x) for k, x in v.items())
        self.S = {i: sorted(hopf.antipode.column(i).items()) for i in range(d)}
        self.Sinv = {i: sorted(hopf.antipode_inv.column(i).items()) for i in range(d)}
        # iterated coproducts: itco[k][i] = list of (k-tuple, coeff), k >= 1
        self.itco = {1: {i: [((i,), 1)] for i in range(d)}}
        for k in range(2, depth + 1):
            t = iterated_coproduct(hopf.coalg, k)
            mi = MultiIndex((d,) * k)
            tab = {}
            for i in range(d):
                tab[i] = sorted((mi.unflat(f), x) for f, x in t.value((i,)).items())
            self.itco[k] = tab

    def mul_vec(self, u, v):
        out = {}
        for i, x in u.items():
            for j, y in v.items():
                for k, z in self.mul.get((i, j), ()):
                    w = out.get(k, 0) + x * y * z
                    if w:
                        out[k] = scal(w)
                    else:
                        del out[k]
        return out


def _action_table(action):
    """(i_h, i_x) -> list (j, coeff) for an arity-2 structure tensor."""
    tab = {}
    for idx, vec in action.entries.items():
        tab[idx] = sorted(vec.items())
    return tab


def _coaction_table(coaction, hdim):
    """i_b -> list ((i_h, j_b), coeff)."""
    tab = {}
    cdim = coaction.codomain.dim // hdim
    for (i,), vec in coaction.entries.items():
        tab[i] = sorted((divmod(k, cdim), x) for k, x in vec.items())
    return tab


def _mcoact_table(sayd):
    """m -> list ((h, m'), coeff)."""
    mdim = sayd.space.dim
    tab = {}
    for i in range(mdim):
        vec = sayd.lcoaction.value((i,))
        tab[i] = sorted((divmod(k, mdim), x) for k, x in vec.items())
    return tab


def expand_terms(parts):
    """Cartesian product of [(key, coeff)] lists -> list of (tuple_of_keys, coeff)."""
    out = [((), 1)]
    for part in parts:
        nxt = []
        for keys, c in out:
            for k, x in part:
                nxt.append((keys + (k,), scal(c * x)))
        out = nxt
    return out


# ---------------------------------------------------------------------------
# coalgebra complex: the coinvariant quotient M (x)_H C^(x)(n+1)

class CoalgebraComplexData:

    def __init__(self, complex, quotients, ambients, mc, sayd):
        self.complex = complex
        self.quotients = quotients      # per-degree QuotientSpace on the ambient
        self.ambients = ambients        # per-degree MultiIndex (m, c, ..., c)
        self.mc = mc
        self.sayd = sayd

    def class_of(self, mdecomp_vec, n):
        """Quotient coordinates of an ambient vector at degree n."""
        return self.quotients[n].project_vec(mdecomp_vec)

    def representative(self, qvec, n):
        return self.quotients[n].include_vec(qvec)


def build_coalgebra_complex(mc, sayd, N, name="coalgebra") -> CoalgebraComplexData:
    h = mc.hopf
    tabs = HopfTables(h, N + 3)
    act = _action_table(mc.action)
    ctabs = _coalg_tables(mc.coalg)
    mco = _mcoact_table(sayd)
    mract = _action_table(sayd.raction)
    mdim, cdim = sayd.space.dim, mc.space.dim
    top = N + 1

    def diag_act(hh, ctuple):
        """h . (c_0 (x) ... (x) c_k) via the k+1 fold coproduct of h."""
        k = len(ctuple)
        out = {}
        for legs, x in tabs.itco[k][hh]:
            parts = []
            dead = False
            for leg, ci in zip(legs, ctuple):
                t = act.get((leg, ci))
                if not t:
                    dead = True
                    break
                parts.append(t)
            if dead:
                continue
            for keys, c in expand_terms(parts):
                w = out.get(keys, 0) + x * c
                if w:
                    out[keys] = scal(w)
                else:
                    del out[keys]
        return out

    ambients, quotients, spaces = [], [], []
    for n in range(top + 1):
        mi = MultiIndex((mdim,) + (cdim,) * (n + 1))
        relations = []
        for m in range(mdim):
            for hh in range(h.dim):
                left = {}
                for mj, x in mract.get((m, hh), ()):
                    left[mj] = x
                for ct in iproduct(range(cdim), repeat=n + 1):
                    rel = {}
                    for mj, x in left.items():
                        rel[mi.flat((mj,) + ct)] = x
                    moved = diag_act(hh, ct)
                    for keys, x in moved.items():
                        f = mi.flat((m,) + keys)
                        y = rel.get(f, 0) - x
                        if y:
                            rel[f] = scal(y)
                        else:
                            rel.pop(f, None)
                    if rel:
                        relations.append(rel)
        quo = QuotientSpace(mi.size, relations)
        ambients.append(mi)
        quotients.append(quo)
        spaces.append(BasedSpace(tuple("q%d_%d" % (n, i) for i in range(quo.dim))))

    def face_col(n, i, m, ct):
        """Ambient image of the basis column (m, ct) under the i-th coface."""
        out = {}
        mi1 = ambients[n + 1]
        if i <= n:
            for (a, b), x in ctabs["comul"][ct[i]]:
                out[mi1.flat((m,) + ct[:i] + (a, b) + ct[i + 1:])] = x
        else:
            # twisted last coface: m0 (x) c0^(2), c1..cn, m^(-1) c0^(1)
            for (hh, mj), x1 in mco[m]:
                for (a, b), x2 in ctabs["comul"][ct[0]]:
                    for cc, x3 in act.get((hh, a), ()):
                        f = mi1.flat((mj, b) + ct[1:] + (cc,))
                        y = out.get(f, 0) + x1 * x2 * x3
                        if y:
                            out[f] = scal(y)
                        else:
                            del out[f]
        return out

    def degen_col(n, j, m, ct):
        e = ctabs["eps"].get(ct[j + 1], 0)
        if not e:
            return {}
        return {ambients[n - 1].flat((m,) + ct[:j + 1] + ct[j + 2:]): e}

    def tau_col(n, m, ct):
        out = {}
        mi0 = ambients[n]
        for (hh, mj), x1 in mco[m]:
            for cc, x2 in act.get((hh, ct[0]), ()):
                f = mi0.flat((mj,) + ct[1:] + (cc,))
                y = out.get(f, 0) + x1 * x2
                if y:
                    out[f] = scal(y)
                else:
                    del out[f]
        return out

    def lift(colfn, n, target):
        """Operator matrix on quotient bases; checks descent on the relation span."""
        quo_s, quo_t = quotients[n], quotients[target]
        cols = []
        for k in range(quo_s.dim):
            amb = quo_s.include_vec({k: 1})
            out = {}
            for f, c in amb.items():
                idx = ambients[n].unflat(f)
                vec_axpy(out, c, colfn(idx[0], idx[1:]))
            cols.append(quo_t.project_vec(out))
        # descent: the operator must kill the relation span
        for row in quo_s.solver.rref_rows():
            out = {}
            for f, c in row.items():
                idx = ambients[n].unflat(f)
                vec_axpy(out, c, colfn(idx[0], idx[1:]))
            if quo_t.project_vec(out):
                raise IllDefined("%s operator does not descend at degree %d" % (name, n))
        return SparseMatrix.from_columns(cols, quo_t.dim)

    faces, degens, taus = [], {}, []
    for n in range(top + 1):
        if n <= N:
            faces.append([lift(lambda m, ct, i=i, n=n: face_col(n, i, m, ct), n, n + 1)
                          for i in range(n + 2)])
        if n >= 1:
            degens[n] = [lift(lambda m, ct, j=j, n=n: degen_col(n, j, m, ct), n, n - 1)
                         for j in range(n)]
        taus.append(lift(lambda m, ct, n=n: tau_col(n, m, ct), n, n))

    cx = CocyclicComplex(N, spaces, faces, degens, taus, name=name)
    return CoalgebraComplexData(cx, quotients, ambients, mc, sayd)


def _coalg_tables(coalg):
    d = coalg.space.dim
    comul = {}
    for i in range(d):
        v = coalg.comul.value((i,))
        comul[i] = sorted((divmod(k, d), x) for k, x in v.items())
    return {"comul": comul, "eps": dict(coalg.counit)}


# ---------------------------------------------------------------------------
# algebra complex: equivariant functionals on M (x) A^(x)(n+1)

class AlgebraComplexData:

    def __init__(self, complex, bases, solvers, ambients, ma, sayd, convention):
        self.complex = complex
        self.bases = bases          # per-degree list of ambient functional vectors
        self.solvers = solvers      # per-degree SpanSolver over those vectors
        self.ambients = ambients
        self.ma = ma
        self.sayd = sayd
        self.convention = convention    # "S" or "Sinv"

    def functional(self, coords, n):
        """Ambient coefficients of a subspace cochain."""
        out = {}
        for k, c in coords.items():
            vec_axpy(out, c, self.bases[n][k])
        return out

    def coords_of(self, functional_vec, n):
        return self.solvers[n].solve(functional_vec)


def build_algebra_complex(ma, sayd, N, name="algebra") -> AlgebraComplexData:
    last_err = None
    for convention in ("S", "Sinv"):
        try:
            return _build_algebra_complex(ma, sayd, N, convention, name)
        except IllDefined as e:
            last_err = e
    raise last_err


def _build_algebra_complex(ma, sayd, N, convention, name):
    h = ma.hopf
    tabs = HopfTables(h, N + 3)
    act = _action_table(ma.action)
    mul = _action_table(ma.alg.mul)
    mco = _mcoact_table(sayd)
    mract = _action_table(sayd.raction)
    unit = sorted(ma.alg.unit.items())
    mdim, adim = sayd.space.dim, ma.space.dim
    top = N + 1
    Stab = tabs.S if convention == "S" else tabs.Sinv
    Sinv_tab = tabs.Sinv

    def diag_act_S(hh, atuple):
        """S(h) (or S^{-1}(h)) acting diagonally on an A-tuple."""
        out = {}
        for u, xs in Stab[hh]:
            k = len(atuple)
            for legs, x in tabs.itco[k][u]:
                parts = []
                dead = False
                for leg, ai in zip(legs, atuple):
                    t = act.get((leg, ai))
                    if not t:
                        dead = True
                        break
                    parts.append(t)
                if dead:
                    continue
                for keys, c in expand_terms(parts):
                    w = out.get(keys, 0) + xs * x * c
                    if w:
                        out[keys] = scal(w)
                    else:
                        del out[keys]
        return out

    ambients = [MultiIndex((mdim,) + (adim,) * (n + 1)) for n in range(top + 2)]

    # equivariance: phi(m.h1 (x) S(h2).a~) = eps(h) phi(m (x) a~) for all basis h
    bases, solvers, spaces = [], [], []
    for n in range(top + 1):
        mi = ambients[n]
        rows = {}
        nrows = 0
        for hh in range(h.dim):
            eps_h = tabs.eps.get(hh, 0)
            for m in range(mdim):
                for at in iproduct(range(adim), repeat=n + 1):
                    row = {}
                    col0 = mi.flat((m,) + at)
                    if eps_h:
                        row[col0] = -eps_h
                    for (h1, h2), x in tabs.comul[hh]:
                        for mj, x1 in mract.get((m, h1), ()):
                            moved = diag_act_S(h2, at)
                            for keys, x2 in moved.items():
                                f = mi.flat((mj,) + keys)
                                y = row.get(f, 0) + x * x1 * x2
                                if y:
                                    row[f] = scal(y)
                                else:
                                    del row[f]
                    # condition on phi: phi(E_h v) - eps(h) phi(v) = 0; as a row
                    # over the dual coordinates this IS the column expansion
                    for f, c in row.items():
                        rows[(nrows, f)] = c
                    nrows += 1
        system = SparseMatrix(nrows, mi.size, rows)
        from .linalg import kernel_basis
        basis = kernel_basis(system)
        solver = SpanSolver(track=True)
        for v in basis:
            solver.add(v)
        bases.append(basis)
        solvers.append(solver)
        spaces.append(BasedSpace(tuple("e%d_%d" % (n, i) for i in range(len(basis)))))

    # predual maps D: ambient(n_tgt) -> ambient(n_src); cochains compose with D
    def dual_restrict(Dcolfn, n_src, n_tgt, opname):
        mi_t = ambients[n_tgt]
        Dent = {}
        for v in range(mi_t.size):
            idx = mi_t.unflat(v)
            for w, c in Dcolfn(idx[0], idx[1:]).items():
                Dent[(w, v)] = c
        D = SparseMatrix(ambients[n_src].size, mi_t.size, Dent)
        Drows = D.row_vectors()
        cols = []
        for phi in bases[n_src]:
            out = {}
            for w, c in phi.items():
                vec_axpy(out, c, Drows[w])
            coords = solvers[n_tgt].solve(out)
            if coords is None:
                raise IllDefined("%s %s does not preserve equivariance (deg %d, convention %s)"
                                 % (name, opname, n_src, convention))
            cols.append(coords)
        return SparseMatrix.from_columns(cols, len(bases[n_tgt]))

    def Dface(n, i, m, at):
        """Predual of the i-th coface: ambient_{n+1} -> ambient_n columns."""
        out = {}
        mi0 = ambients[n]
        if i <= n:
            for k, x in mul.get((at[i], at[i + 1]), ()):
                out[mi0.flat((m,) + at[:i] + (k,) + at[i + 2:])] = x
        else:
            # m (x) a~  ->  m0 (x) (Sinv(m-1) a_{n+1}) a0 (x) a1..an
            for (hh, mj), x1 in mco[m]:
                for u, x2 in Sinv_tab[hh]:
                    for b, x3 in act.get((u, at[n + 1]), ()):
                        for k, x4 in mul.get((b, at[0]), ()):
                            f = mi0.flat((mj, k) + at[1:n + 1])
                            y = out.get(f, 0) + x1 * x2 * x3 * x4
                            if y:
                                out[f] = scal(y)
                            else:
                                del out[f]
        return out

    def Ddegen(n, j, m, at):
        # insert the algebra unit after slot j: ambient_{n-1} -> ambient_n
        out = {}
        mi0 = ambients[n]
        for k, x in unit:
            out[mi0.flat((m,) + at[:j + 1] + (k,) + at[j + 1:])] = x
        return out

    def Dtau(n, m, at):
        # m (x) a~ -> m0 (x) Sinv(m-1) a_n (x) a0..a_{n-1}
        out = {}
        mi0 = ambients[n]
        for (hh, mj), x1 in mco[m]:
            for u, x2 in Sinv_tab[hh]:
                for b, x3 in act.get((u, at[n]), ()):
                    f = mi0.flat((mj, b) + at[:n])
                    y = out.get(f, 0) + x1 * x2 * x3
                    if y:
                        out[f] = scal(y)
                    else:
                        del out[f]
        return out

    faces, degens, taus = [], {}, []
    for n in range(top + 1):
        if n <= N:
            faces.append([dual_restrict(lambda m, at, i=i, n=n: Dface(n, i, m, at), n, n + 1, "face")
                          for i in range(n + 2)])
        if n >= 1:
            degens[n] = [dual_restrict(lambda m, at, j=j, n=n: Ddegen(n, j, m, at), n, n - 1, "degeneracy")
                         for j in range(n)]
        taus.append(dual_restrict(lambda m, at, n=n: Dtau(n, m, at), n, n, "cyclic"))

    cx = CocyclicComplex(N, spaces, faces, degens, taus, name=name)
    return AlgebraComplexData(cx, bases, solvers, ambients, ma, sayd, convention)


# ---------------------------------------------------------------------------
# comodule algebra complex: colinear maps B^(x)(n+1) -> M

class ComoduleComplexData:

    def __init__(self, complex, bases, solvers, ambients, ba, sayd):
        self.complex = complex
        self.bases = bases
        self.solvers = solvers
        self.ambients = ambients    # per degree MultiIndex (m, b, ..., b)
        self.ba = ba
        self.sayd = sayd

    def hom_coeffs(self, coords, n):
        out = {}
        for k, c in coords.items():
            vec_axpy(out, c, self.bases[n][k])
        return out


def build_comodule_algebra_complex(ba, sayd, N, name="comodule-algebra") -> ComoduleComplexData:
    h = ba.hopf
    tabs = HopfTables(h, N + 3)
    coact = _coaction_table(ba.coaction, h.dim)
    mul = _action_table(ba.alg.mul)
    unit = sorted(ba.alg.unit.items())
    mco = _mcoact_table(sayd)
    mract = _action_table(sayd.raction)
    mdim, bdim = sayd.space.dim, ba.space.dim
    top = N + 1
    # hom coordinates: (m, b-tuple), m major
    ambients = [MultiIndex((mdim,) + (bdim,) * (n + 1)) for n in range(top + 2)]

    def diag_coact(bt):
        """[(h, b-out-tuple, coeff)] for the diagonal coaction of a B-tuple,
        expanded slot by slot with the H legs multiplied in order."""
        out = []
        def rec(k, bouts, hvec, coeff):
            if k == len(bt):
                for hh, x in hvec.items():
                    out.append((hh, bouts, scal(coeff * x)))
                return
            for (hh, b0), x in coact.get(bt[k], ()):
                if k == 0:
                    rec(1, (b0,), {hh: 1}, coeff * x)
                else:
                    nh = {}
                    for hprev, xp in hvec.items():
                        for hn, xm in tabs.mul.get((hprev, hh), ()):
                            y = nh.get(hn, 0) + xp * xm
                            if y:
                                nh[hn] = scal(y)
                            else:
                                del nh[hn]
                    if nh:
                        rec(k + 1, bouts + (b0,), nh, coeff * x)
        rec(0, (), {}, 1)
        return out

    bases, solvers, spaces = [], [], []
    for n in range(top + 1):
        mi = ambients[n]
        # colinearity: coact_M(psi(w)) = w^(-1) (x) psi(w^(0))
        rows = {}
        nrows = 0
        rowindex = {}
        def rowkey(w, hh, mj):
            nonlocal nrows
            k = (w, hh, mj)
            if k not in rowindex:
                rowindex[k] = nrows
                nrows += 1
            return rowindex[k]
        for w in iproduct(range(bdim), repeat=n + 1):
            wf = MultiIndex((bdim,) * (n + 1)).flat(w)
            for m in range(mdim):
                col = mi.flat((m,) + w)
                for (hh, mj), x in mco[m]:
                    r = rowkey(wf, hh, mj)
                    y = rows.get((r, col), 0) + x
                    if y:
                        rows[(r, col)] = y
                    else:
                        del rows[(r, col)]
            for hh, bouts, x in diag_coact(w):
                for mj in range(mdim):
                    r = rowkey(wf, hh, mj)
                    col = mi.flat((mj,) + bouts)
                    y = rows.get((r, col), 0) - x
                    if y:
                        rows[(r, col)] = scal(y)
                    else:
                        del rows[(r, col)]
        system = SparseMatrix(nrows, mi.size, rows)
        from .linalg import kernel_basis
        basis = kernel_basis(system)
        solver = SpanSolver(track=True)
        for v in basis:
            solver.add(v)
        bases.append(basis)
        solvers.append(solver)
        spaces.append(BasedSpace(tuple("c%d_%d" % (n, i) for i in range(len(basis)))))

    def op_matrix(entries_fn, n_src, n_tgt, opname):
        """Build the ambient Hom-space operator once, then restrict it."""
        amb = entries_fn()
        acols = [dict() for _ in range(ambients[n_src].size)]
        for (r, c), x in amb.items():
            acols[c][r] = x
        cols = []
        for psi in bases[n_src]:
            img = {}
            for c, x in psi.items():
                vec_axpy(img, x, acols[c])
            coords = solvers[n_tgt].solve(img)
            if coords is None:
                raise IllDefined("%s %s does not preserve colinearity (deg %d)" % (name, opname, n_src))
            cols.append(coords)
        return SparseMatrix.from_columns(cols, len(bases[n_tgt]))

    def face_entries(n, i):
        """(d_i psi)(v~) = psi(.. v_i v_{i+1} ..) for i <= n, on Hom coordinates."""
        mi_t = ambients[n + 1]
        mi_s = ambients[n]
        ent = {}
        for vt in iproduct(range(bdim), repeat=n + 2):
            for k, x in mul.get((vt[i], vt[i + 1]), ()):
                w = vt[:i] + (k,) + vt[i + 2:]
                for m in range(mdim):
                    key = (mi_t.flat((m,) + vt), mi_s.flat((m,) + w))
                    y = ent.get(key, 0) + x
                    if y:
                        ent[key] = scal(y)
                    else:
                        del ent[key]
        return ent

    def last_face_entries(n):
        """(d_{n+1} psi)(v~) = psi(v_{n+1}^(0) v_0, v_1..v_n) . v_{n+1}^(-1)."""
        mi_t = ambients[n + 1]
        mi_s = ambients[n]
        ent = {}
        for vt in iproduct(range(bdim), repeat=n + 2):
            for (hh, b0), x1 in coact.get(vt[n + 1], ()):
                for k, x2 in mul.get((b0, vt[0]), ()):
                    w = (k,) + vt[1:n + 1]
                    for m in range(mdim):
                        for mj, x3 in mract.get((m, hh), ()):
                            key = (mi_t.flat((mj,) + vt), mi_s.flat((m,) + w))
                            y = ent.get(key, 0) + x1 * x2 * x3
                            if y:
                                ent[key] = scal(y)
                            else:
                                del ent[key]
        return ent

    def degen_entries(n, j):
        mi_t = ambients[n - 1]
        mi_s = ambients[n]
        ent = {}
        for vt in iproduct(range(bdim), repeat=n):
            for k, x in unit:
                w = vt[:j + 1] + (k,) + vt[j + 1:]
                for m in range(mdim):
                    key = (mi_t.flat((m,) + vt), mi_s.flat((m,) + w))
                    y = ent.get(key, 0) + x
                    if y:
                        ent[key] = scal(y)
                    else:
                        del ent[key]
        return ent

    def tau_entries(n):
        """(t psi)(v_0..v_n) = psi(v_n^(0), v_0..v_{n-1}) . v_n^(-1)."""
        mi = ambients[n]
        ent = {}
        for vt in iproduct(range(bdim), repeat=n + 1):
            for (hh, b0), x1 in coact.get(vt[n], ()):
                w = (b0,) + vt[:n]
                for m in range(mdim):
                    for mj, x2 in mract.get((m, hh), ()):
                        key = (mi.flat((mj,) + vt), mi.flat((m,) + w))
                        y = ent.get(key, 0) + x1 * x2
                        if y:
                            ent[key] = scal(y)
                        else:
                            del ent[key]
        return ent

    faces, degens, taus = [], {}, []
    for n in range(top + 1):
        if n <= N:
            fam = [op_matrix(lambda i=i, n=n: face_entries(n, i), n, n + 1, "face")
                   for i in range(n + 1)]
            fam.append(op_matrix(lambda n=n: last_face_entries(n), n, n + 1, "face"))
            faces.append(fam)
        if n >= 1:
            degens[n] = [op_matrix(lambda j=j, n=n: degen_entries(n, j), n, n - 1, "degeneracy")
                         for j in range(n)]
        taus.append(op_matrix(lambda n=n: tau_entries(n), n, n, "cyclic"))

    cx = CocyclicComplex(N, spaces, faces, degens, taus, name=name)
    return ComoduleComplexData(cx, bases, solvers, ambients, ba, sayd)

# ---------------------------------------------------------------------------
# the normalized Hopf complex on tensor powers, with certified isomorphism

class HopfComplexData:

    def __init__(self, quot, power, iso, iso_inv, mp):
        self.quot = quot        # coinvariant-quotient side (H over itself)
        self.power = power      # simplified side on tensor powers H^(x)n
        self.iso = iso          # per-degree matrices: quotient side -> power side
        self.iso_inv = iso_inv
        self.mp = mp

    @property
    def complex(self):
        return self.power


def build_hopf_complex(mp, N) -> HopfComplexData:
    """Coalgebra complex of H over itself with 1-dim twisted coefficients,
    the simplified complex on tensor powers, and the certified conjugating
    isomorphism between them."""
    from .actions import mpi_coefficients, validate_sayd
    from .fixtures import self_module_coalgebra
    h = mp.hopf
    sayd = mpi_coefficients(mp)
    rep = validate_sayd(sayd)
    if not rep.ok:
        raise ValueError("coefficient pair is not stable anti-Yetter-Drinfeld: %r" % rep)
    mc = self_module_coalgebra(h)
    quot = build_coalgebra_complex(mc, sayd, N, name="hopf-quotient")
    power = _build_power_complex(mp, N)
    iso, iso_inv = [], []
    tabs = HopfTables(h, N + 3)
    delta = dict(mp.delta)
    top = N + 1
    for n in range(top + 1):
        mi = quot.ambients[n]
        quo = quot.quotients[n]
        hdim = h.dim
        mi_t = MultiIndex((hdim,) * n)
        cols = []
        for k in range(quo.dim):
            amb = quo.include_vec({k: 1})
            out = {}
            for f, c0 in amb.items():
                idx = mi.unflat(f)
                h0, rest = idx[1], idx[2:]
                # m h0^(1) (x) S(h0^(2)) . (h1 .. hn)
                for (a, b), x1 in tabs.comul[h0]:
                    da = delta.get(a, 0)
                    if not da:
                        continue
                    for sb, x2 in tabs.S[b]:
                        if n == 0:
                            e = tabs.eps.get(sb, 0)
                            if e:
                                y = out.get(0, 0) + c0 * x1 * da * x2 * e
                                if y:
                                    out[0] = scal(y)
                                else:
                                    del out[0]
                            continue
                        for legs, x3 in tabs.itco[n][sb]:
                            parts = []
                            dead = False
                            for leg, hi in zip(legs, rest):
                                t = tabs.mul.get((leg, hi))
                                if not t:
                                    dead = True
                                    break
                                parts.append(t)
                            if dead:
                                continue
                            for keys, x4 in expand_terms(parts):
                                f2 = mi_t.flat(keys)
                                y = out.get(f2, 0) + c0 * x1 * da * x2 * x3 * x4
                                if y:
                                    out[f2] = scal(y)
                                else:
                                    del out[f2]
            cols.append(out)
        I_n = SparseMatrix.from_columns(cols, mi_t.size)
        inv = invert_matrix(I_n)
        if inv is None:
            raise ConjugationFailure("normalization map is not invertible at degree %d" % n)
        iso.append(I_n)
        iso_inv.append(inv)
    # certify conjugation of every operator
    ccx = quot.complex
    for n in range(top + 1):
        if n <= N:
            for i in range(n + 2):
                if compose(iso[n + 1], ccx.face(n, i)) != compose(power.face(n, i), iso[n]):
                    raise ConjugationFailure("face %d at degree %d" % (i, n))
        if n >= 1:
            for j in range(n):
                if compose(iso[n - 1], ccx.degen(n, j)) != compose(power.degen(n, j), iso[n]):
                    raise ConjugationFailure("degeneracy %d at degree %d" % (j, n))
        if compose(iso[n], ccx.tau(n)) != compose(power.tau(n), iso[n]):
            raise ConjugationFailure("cyclic operator at degree %d" % n)
    return HopfComplexData(quot, power, iso, iso_inv, mp)


def _build_power_complex(mp, N) -> CocyclicComplex:
    """The simplified complex: degree n space is H^(x) n."""
    h = mp.hopf
    d = h.dim
    tabs = HopfTables(h, N + 3)
    from .hopf import twisted_antipode
    St = {i: sorted(twisted_antipode(mp).column(i).items()) for i in range(d)}
    sigma = sorted(mp.sigma.items())
    unit = tabs.unit
    top = N + 1
    spaces = [tensor_power(h.space, n) for n in range(top + 1)]
    mis = [MultiIndex((d,) * n) for n in range(top + 1)]

    def face_col(n, i, ht):
        mi1 = mis[n + 1]
        out = {}
        if i == 0:
            for k, x in unit:
                out[mi1.flat((k,) + ht)] = x
        elif i <= n:
            for (a, b), x in tabs.comul[ht[i - 1]]:
                out[mi1.flat(ht[:i - 1] + (a, b) + ht[i:])] = x
        else:
            for k, x in sigma:
                out[mi1.flat(ht + (k,))] = x
        return out

    def degen_col(n, j, ht):
        e = tabs.eps.get(ht[j], 0)
        if not e:
            return {}
        return {mis[n - 1].flat(ht[:j] + ht[j + 1:]): e}

    def tau_col(n, ht):
        # (iterated coproduct of the twisted antipode of h1) . (h2..hn, sigma)
        out = {}
        if n == 0:
            return {0: 1}
        mi = mis[n]
        tail = ht[1:]
        for u, x1 in St[ht[0]]:
            for legs, x2 in tabs.itco[n][u]:
                # multiply slotwise: legs[k] * tail[k] for k < n-1, legs[n-1] * sigma
                parts = []
                dead = False
                for k in range(n - 1):
                    t = tabs.mul.get((legs[k], tail[k]))
                    if not t:
                        dead = True
                        break
                    parts.append(t)
                if dead:
                    continue
                last = {}
                for s, xs in sigma:
                    for kk, xm in tabs.mul.get((legs[n - 1], s), ()):
                        y = last.get(kk, 0) + xs * xm
                        if y:
                            last[kk] = scal(y)
                        else:
                            del last[kk]
                if not last:
                    continue
                parts.append(sorted(last.items()))
                for keys, x3 in expand_terms(parts):
                    f = mi.flat(keys)
                    y = out.get(f, 0) + x1 * x2 * x3
                    if y:
                        out[f] = scal(y)
                    else:
                        del out[f]
        return out

    def materialize(colfn, n_src, rows_dim):
        cols = []
        for ht in iproduct(range(d), repeat=n_src):
            cols.append(colfn(ht))
        return SparseMatrix.from_columns(cols, rows_dim)

    faces, degens, taus = [], {}, []
    for n in range(top + 1):
        if n <= N:
            faces.append([materialize(lambda ht, i=i, n=n: face_col(n, i, ht), n, mis[n + 1].size)
                          for i in range(n + 2)])
        if n >= 1:
            degens[n] = [materialize(lambda ht, j=j, n=n: degen_col(n, j, ht), n, mis[n - 1].size)
                         for j in range(n)]
        taus.append(materialize(lambda ht, n=n: tau_col(n, ht), n, mis[n].size))
    return CocyclicComplex(N, spaces, faces, degens, taus, name="hopf-power")


# ---------------------------------------------------------------------------
# bicocyclic complexes, diagonals, products

class BicocyclicComplex:
    """Tensor product of two cocyclic complexes: horizontal operators act on
    the first factor, vertical on the second; they commute by construction
    and the validator checks it."""

    def __init__(self, c1, c2):
        self.c1 = c1
        self.c2 = c2
        self.N = min(c1.N, c2.N)
        self.top = min(c1.top, c2.top)

    def space(self, p, q):
        return tensor_space(self.c1.spaces[p], self.c2.spaces[q])

    def hface(self, p, q, i):
        return tensor_kron(self.c1.face(p, i), SparseMatrix.identity(self.c2.dim(q)))

    def vface(self, p, q, i):
        return tensor_kron(SparseMatrix.identity(self.c1.dim(p)), self.c2.face(q, i))

    def hdegen(self, p, q, j):
        return tensor_kron(self.c1.degen(p, j), SparseMatrix.identity(self.c2.dim(q)))

    def vdegen(self, p, q, j):
        return tensor_kron(SparseMatrix.identity(self.c1.dim(p)), self.c2.degen(q, j))

    def htau(self, p, q):
        return tensor_kron(self.c1.tau(p), SparseMatrix.identity(self.c2.dim(q)))

    def vtau(self, p, q):
        return tensor_kron(SparseMatrix.identity(self.c1.dim(p)), self.c2.tau(q))


def tensor_bicocyclic(c1, c2) -> BicocyclicComplex:
    return BicocyclicComplex(c1, c2)


def check_bicocyclic(b: BicocyclicComplex):
    """Rows/columns are cocyclic (delegated) plus pairwise commutation."""
    bad = []
    N = b.N
    for p in range(N + 1):
        for q in range(N + 1):
            if p <= N - 1 and q <= N - 1:
                for i in range(p + 2):
                    for j in range(q + 2):
                        lhs = compose(b.hface(p, q + 1, i), b.vface(p, q, j))
                        rhs = compose(b.vface(p + 1, q, j), b.hface(p, q, i))
                        if lhs != rhs:
                            bad.append(CocyclicViolation("h-v-face", p, (q, i, j)))
            lhs = compose(b.htau(p, q), b.vtau(p, q))
            rhs = compose(b.vtau(p, q), b.htau(p, q))
            if lhs != rhs:
                bad.append(CocyclicViolation("h-v-cyclic", p, (q,)))
    return bad


def diagonal(b: BicocyclicComplex) -> CocyclicComplex:
    """Diagonal complex: degree n space is the (n,n) spot; each structure map
    is the composite of the matching horizontal and vertical maps."""
    N, top = b.N, b.top
    spaces = [b.space(n, n) for n in range(top + 1)]
    faces, degens, taus = [], {}, []
    for n in range(top + 1):
        if n <= N:
            fam = []
            for i in range(n + 2):
                fam.append(compose(b.hface(n, n + 1, i), b.vface(n, n, i)))
            faces.append(fam)
        if n >= 1:
            degens[n] = [compose(b.hdegen(n, n - 1, j), b.vdegen(n, n, j)) for j in range(n)]
        taus.append(compose(b.htau(n, n), b.vtau(n, n)))
    return CocyclicComplex(N, spaces, faces, degens, taus, name="diagonal")


def product_complex(c1, c2) -> CocyclicComplex:
    """Degreewise tensor product with operators d_i (x) d_i, s_j (x) s_j, t (x) t."""
    N = min(c1.N, c2.N)
    top = min(c1.top, c2.top)
    spaces = [tensor_space(c1.spaces[n], c2.spaces[n]) for n in range(top + 1)]
    faces, degens, taus = [], {}, []
    for n in range(top + 1):
        if n <= N:
            faces.append([tensor_kron(c1.face(n, i), c2.face(n, i)) for i in range(n + 2)])
        if n >= 1:
            degens[n] = [tensor_kron(c1.degen(n, j), c2.degen(n, j)) for j in range(n)]
        taus.append(tensor_kron(c1.tau(n), c2.tau(n)))
    return CocyclicComplex(N, spaces, faces, degens, taus, name="product")


# ---------------------------------------------------------------------------
# plain cyclic complex of an algebra (trivial symmetry), used as cup targets

def plain_cyclic_complex(alg, N, name="cyclic"):
    """The standard cocyclic module of a unital algebra, realized as the
    equivariant complex over the trivial Hopf algebra with trivial
    coefficients (the conditions are vacuous there)."""
    from .fixtures import trivial_hopf, trivial_module_algebra
    from .actions import trivial_sayd
    h = trivial_hopf()
    ma = trivial_module_algebra(h, alg)
    return build_algebra_complex(ma, trivial_sayd(h), N, name=name)


# ---------------------------------------------------------------------------
# serialization (versioned text dump with input content hash)

DUMP_VERSION = "hopfcyclic-complex v1"


def complex_to_text(cx: CocyclicComplex, content_hash=""):
    out = ["%s %s" % (DUMP_VERSION, content_hash)]
    out.append("N %d top %d" % (cx.N, cx.top))
    for n in range(cx.top + 1):
        out.append("degree %d dim %d" % (n, cx.dim(n)))
    for n in range(cx.N + 1):
        for i in range(n + 2):
            out.append("face %d %d" % (n, i))
            out.append(matrix_to_text(cx.face(n, i)))
    for n in range(1, cx.top + 1):
        for j in range(n):
            out.append("degen %d %d" % (n, j))
            out.append(matrix_to_text(cx.degen(n, j)))
    for n in range(cx.top + 1):
        out.append("tau %d" % n)
        out.append(matrix_to_text(cx.tau(n)))
    return "\n".join(out) + "\n"


def complex_from_text(text):
    lines = text.splitlines()
    if not lines or not lines[0].startswith(DUMP_VERSION):
        raise ValueError("unrecognized complex dump")
    content_hash = lines[0][len(DUMP_VERSION):].strip()
    head = lines[1].split()
    N, top = int(head[1]), int(head[3])
    dims = {}
    pos = 2
    while pos < len(lines) and lines[pos].startswith("degree"):
        parts = lines[pos].split()
        dims[int(parts[1])] = int(parts[3])
        pos += 1
    spaces = [BasedSpace(tuple("b%d_%d" % (n, i) for i in range(dims[n]))) for n in range(top + 1)]

    def read_matrix(pos):
        header = lines[pos].split()
        rows, cols = int(header[0]), int(header[1])
        pos += 1
        ent = {}
        while pos < len(lines):
            parts = lines[pos].split()
            if len(parts) != 3 or not (parts[0].isdigit() or parts[0].lstrip("-").isdigit()):
                break
            r, c, x = parts
            from .linalg import parse_scalar
            ent[(int(r), int(c))] = parse_scalar(x)
            pos += 1
        return SparseMatrix(rows, cols, ent), pos

    faces = [[None] * (n + 2) for n in range(N + 1)]
    degens = {n: [None] * n for n in range(1, top + 1)}
    taus = [None] * (top + 1)
    while pos < len(lines):
        line = lines[pos].strip()
        if not line:
            pos += 1
            continue
        parts = line.split()
        if parts[0] == "face":
            n, i = int(parts[1]), int(parts[2])
            m, pos = read_matrix(pos + 1)
            faces[n][i] = m
        elif parts[0] == "degen":
            n, j = int(parts[1]), int(parts[2])
            m, pos = read_matrix(pos + 1)
            degens[n][j] = m
        elif parts[0] == "tau":
            n = int(parts[1])
            m, pos = read_matrix(pos + 1)
            taus[n] = m
        else:
            pos += 1
    cx = CocyclicComplex(N, spaces, faces, degens, taus)
    cx.content_hash = content_hash
    return cx


def content_hash(text):
    return hashlib.sha256(text.encode()).hexdigest()[:16]
