"""Exact rational sparse linear algebra.

Scalars are arbitrary-precision rationals: plain ``int`` where possible,
``fractions.Fraction`` otherwise.  Everything downstream (axiom checking,
cocyclic operators, cohomology ranks) reduces to the handful of primitives
here: sparse matrices, canonical reduced row echelon form, kernels, ranks,
subspace membership and Kronecker products.  No floating point anywhere.

Vectors are dicts ``{index: nonzero scalar}``.  The echelon form is the
unique RREF of the row space, so every basis this module emits is canonical
and re-runs are byte-for-byte reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class ShapeMismatch(Exception):
    pass


class SubspaceNotContained(Exception):
    """A vector claimed to lie in a span does not; usually means d*d != 0 upstream."""


# ---------------------------------------------------------------------------
# scalars

def scal(x):
    """Normalize a rational scalar: Fraction with denominator 1 becomes int."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return x.numerator
        return x
    if isinstance(x, int):
        return x
    raise TypeError("exact scalar expected, got %r" % (x,))


def parse_scalar(text):
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return scal(Fraction(int(num), int(den)))
    return int(text)


def format_scalar(x):
    if isinstance(x, int):
        return str(x)
    return "%d/%d" % (x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# sparse vectors (dict index -> nonzero scalar)

def vec_add(u, v):
    out = dict(u)
    for i, x in v.items():
        y = out.get(i, 0) + x
        if y:
            out[i] = scal(y)
        else:
            out.pop(i, None)
    return out

def vec_sub(u, v):
    out = dict(u)
    for i, x in v.items():
        y = out.get(i, 0) - x
        if y:
            out[i] = scal(y)
        else:
            out.pop(i, None)
    return out

def vec_scale(u, c):
    if not c:
        return {}
    return {i: scal(c * x) for i, x in u.items()}

def vec_axpy(out, c, v):
    """In-place out += c*v on a mutable dict."""
    if not c:
        return out
    for i, x in v.items():
        y = out.get(i, 0) + c * x
        if y:
            out[i] = scal(y)
        else:
            out.pop(i, None)
    return out

def vec_dot(u, v):
    if len(v) < len(u):
        u, v = v, u
    s = 0
    for i, x in u.items():
        y = v.get(i)
        if y is not None:
            s += x * y
    return scal(s)


def vec_primitive(u):
    """Rescale to a primitive integer vector (positive leading entry kept as-is).

    Used between elimination steps to stop denominator growth; the final
    RREF normalization restores leading ones.
    """
    if not u:
        return u
    if all(isinstance(x, int) for x in u.values()):
        g = 0
        for x in u.values():
            g = gcd(g, x)
        if g in (0, 1):
            return u
        return {i: x // g for i, x in u.items()}
    lcm = 1
    for x in u.values():
        if isinstance(x, Fraction):
            d = x.denominator
            lcm = lcm // gcd(lcm, d) * d
    out = {i: int(x * lcm) for i, x in u.items()}
    g = 0
    for x in out.values():
        g = gcd(g, x)
    if g > 1:
        out = {i: x // g for i, x in out.items()}
    return out


# ---------------------------------------------------------------------------
# sparse matrices

class SparseMatrix:
    """Immutable-by-convention sparse matrix over Q.

    entries: dict {(row, col): nonzero scalar}.  Stored entries are never
    zero; indices are range-checked at construction.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ShapeMismatch("negative dimensions")
        self.rows = rows
        self.cols = cols
        ent = {}
        if entries:
            for (r, c), x in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise ShapeMismatch("index (%d,%d) out of range %dx%d" % (r, c, rows, cols))
                x = scal(x)
                if x:
                    ent[(r, c)] = x
        self.entries = ent

    # -- constructors

    @staticmethod
    def identity(n):
        return SparseMatrix(n, n, {(i, i): 1 for i in range(n)})

    @staticmethod
    def zeros(rows, cols):
        return SparseMatrix(rows, cols)

    @staticmethod
    def from_rows(rows_list):
        r = len(rows_list)
        c = len(rows_list[0]) if rows_list else 0
        ent = {}
        for i, row in enumerate(rows_list):
            if len(row) != c:
                raise ShapeMismatch("ragged rows")
            for j, x in enumerate(row):
                if x:
                    ent[(i, j)] = scal(x)
        return SparseMatrix(r, c, ent)

    @staticmethod
    def from_columns(cols_list, rows):
        """Columns given as sparse dicts."""
        ent = {}
        for j, col in enumerate(cols_list):
            for i, x in col.items():
                if x:
                    ent[(i, j)] = scal(x)
        return SparseMatrix(rows, len(cols_list), ent)

    # -- basic structure

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def is_zero(self):
        return not self.entries

    def column(self, j):
        return {r: x for (r, c), x in self.entries.items() if c == j}

    def columns(self):
        """List of sparse columns."""
        cols = [dict() for _ in range(self.cols)]
        for (r, c), x in self.entries.items():
            cols[c][r] = x
        return cols

    def row_vectors(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            rows[r][c] = x
        return rows

    def transpose(self):
        return SparseMatrix(self.cols, self.rows,
                            {(c, r): x for (r, c), x in self.entries.items()})

    # -- arithmetic

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch("add %dx%d + %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        ent = dict(self.entries)
        for k, x in other.entries.items():
            y = ent.get(k, 0) + x
            if y:
                ent[k] = scal(y)
            else:
                ent.pop(k, None)
        m = SparseMatrix(self.rows, self.cols)
        m.entries = ent
        return m

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        m = SparseMatrix(self.rows, self.cols)
        if c:
            m.entries = {k: scal(c * x) for k, x in self.entries.items()}
        return m

    def apply(self, v):
        """Matrix times sparse column vector (dict col -> scalar)."""
        out = {}
        cols = None
        for j, c in v.items():
            if cols is None:
                cols = self.columns()
            vec_axpy(out, c, cols[j])
        return out

    def apply_dense_cache(self):
        """Columns list, for repeated apply() calls."""
        return self.columns()


def compose(a, b):
    """Matrix product a @ b (a after b)."""
    if a.cols != b.rows:
        raise ShapeMismatch("compose %dx%d with %dx%d" % (a.rows, a.cols, b.rows, b.cols))
    acols = a.columns()
    ent = {}
    bcols = b.columns()
    for j, bcol in enumerate(bcols):
        out = {}
        for k, x in bcol.items():
            vec_axpy(out, x, acols[k])
        for i, x in out.items():
            ent[(i, j)] = x
    m = SparseMatrix(a.rows, b.cols)
    m.entries = ent
    return m


def tensor_kron(a, b):
    """Kronecker product, left factor major: index (i,k) -> i*dim_b + k."""
    ent = {}
    br, bc = b.rows, b.cols
    for (i, j), x in a.entries.items():
        for (k, l), y in b.entries.items():
            ent[(i * br + k, j * bc + l)] = scal(x * y)
    m = SparseMatrix(a.rows * b.rows, a.cols * b.cols)
    m.entries = ent
    return m


# ---------------------------------------------------------------------------
# canonical echelon machinery

class SpanSolver:
    """Incremental row space with canonical RREF and membership solving.

    add(vector) reduces against current pivots, inserts a new normalized
    pivot row if independent and back-substitutes, so the stored rows are
    always the unique RREF of the span.  solve() expresses a vector over the
    ORIGINAL inserted vectors via tracked coefficients.

    In full RREF every row is supported on its pivot column plus free
    columns only, so reduction touches just the pivots in the input's own
    support; a column index keeps back-substitution proportional to the
    rows actually containing the new pivot column.
    """

    def __init__(self, track=False):
        self.pivots = []        # sorted pivot column list
        self.rows = {}          # pivot col -> row dict (RREF)
        self.track = track
        self.coeffs = {}        # pivot col -> dict {original index: coeff}
        self.n_added = 0
        self._colidx = {}       # free col -> set of pivots whose row touches it

    def rank(self):
        return len(self.pivots)

    def _reduce(self, v, coeff=None, sign=-1):
        v = dict(v)
        # rows only ever add support at free columns, one pass suffices
        for p in sorted(k for k in v if k in self.rows):
            x = v.get(p)
            if x:
                vec_axpy(v, -x, self.rows[p])
                if coeff is not None:
                    vec_axpy(coeff, sign * x, self.coeffs[p])
        return v

    def add(self, v):
        """Insert a vector; returns True if it enlarged the span."""
        idx = self.n_added
        self.n_added += 1
        coeff = {idx: 1} if self.track else None
        v = self._reduce(v, coeff)
        if not v:
            return False
        if coeff is None and any(isinstance(x, Fraction) for x in v.values()):
            # fraction-free between steps: rescale to a primitive integer row
            # (scale is irrelevant to the span; pivots are normalized below)
            v = vec_primitive(v)
        p = min(v)
        lead = v[p]
        if lead != 1:
            inv = Fraction(1, 1) / Fraction(lead)
            v = {i: scal(inv * x) for i, x in v.items()}
            if coeff is not None:
                coeff = {i: scal(inv * x) for i, x in coeff.items()}
        # back-substitute into the rows that actually contain column p
        for q in list(self._colidx.get(p, ())):
            row = self.rows[q]
            x = row.get(p)
            if x:
                self._row_axpy(q, row, -x, v, p)
                if self.track:
                    vec_axpy(self.coeffs[q], -x, coeff)
        self._colidx.pop(p, None)
        self.rows[p] = v
        for c in v:
            if c != p:
                self._colidx.setdefault(c, set()).add(p)
        if self.track:
            self.coeffs[p] = coeff
        import bisect
        bisect.insort(self.pivots, p)
        return True

    def _row_axpy(self, q, row, c, v, newpivot):
        """row += c*v for the stored row with pivot q, maintaining the column index."""
        for i, x in v.items():
            y = row.get(i, 0) + c * x
            if y:
                if i not in row and i != q:
                    self._colidx.setdefault(i, set()).add(q)
                row[i] = scal(y)
            else:
                if row.pop(i, None) is not None and i != q:
                    s = self._colidx.get(i)
                    if s is not None:
                        s.discard(q)

    def contains(self, v):
        return not self._reduce(v)

    def reduce(self, v):
        """Canonical coset representative of v modulo the span."""
        return self._reduce(v)

    def solve(self, v):
        """Coefficients over the original vectors, or None if not in span."""
        if not self.track:
            raise ValueError("solver built without track=True")
        coeff = {}
        v = self._reduce(v, coeff, sign=1)
        if v:
            return None
        return coeff

    def rref_rows(self):
        return [dict(self.rows[p]) for p in self.pivots]


def rref(matrix):
    """(pivot columns, RREF rows as dicts) of a SparseMatrix."""
    solver = SpanSolver()
    for row in matrix.row_vectors():
        if row:
            solver.add(row)
    return list(solver.pivots), solver.rref_rows()


def image_rank(matrix):
    """Exact rank over Q."""
    return len(rref(matrix)[0])


def kernel_basis(matrix):
    """Canonical kernel basis of {v : matrix . v = 0}.

    One vector per free column f (in increasing order), with entry 1 at f
    and the pivot coordinates filled from the unique RREF.
    """
    pivots, rows = rref(matrix)
    pivot_set = set(pivots)
    basis = []
    for f in range(matrix.cols):
        if f in pivot_set:
            continue
        v = {f: 1}
        for p, row in zip(pivots, rows):
            x = row.get(f)
            if x:
                v[p] = scal(-x)
        basis.append(v)
    return basis


def kernel_canonicalize(vectors, dim):
    """Re-echelonize a list of kernel-style vectors to the canonical form.

    Reverse-column-order RREF of the span; idempotent on kernel_basis output.
    """
    rev = lambda v: {dim - 1 - i: x for i, x in v.items()}
    solver = SpanSolver()
    for v in vectors:
        solver.add(rev(v))
    return [rev(r) for r in reversed(solver.rref_rows())]


def invert_matrix(m):
    """Exact inverse of a square SparseMatrix, or None if singular."""
    n = m.rows
    if m.cols != n:
        return None
    solver = SpanSolver(track=True)
    for col in m.columns():
        solver.add(col)
    if solver.rank() != n:
        return None
    ent = {}
    for j in range(n):
        coeff = solver.solve({j: 1})
        if coeff is None:
            return None
        for i, x in coeff.items():
            ent[(i, j)] = x
    return SparseMatrix(n, n, ent)


def span_rank(vectors):
    solver = SpanSolver()
    for v in vectors:
        solver.add(v)
    return solver.rank()


def quotient_dim(big, small):
    """dim span(big) - dim span(small); requires span(small) within span(big)."""
    solver = SpanSolver()
    for v in big:
        solver.add(v)
    small_rank = SpanSolver()
    for v in small:
        if not solver.contains(v):
            raise SubspaceNotContained("vector outside the larger span")
        small_rank.add(v)
    return solver.rank() - small_rank.rank()


# ---------------------------------------------------------------------------
# text serialization ("rows cols" header, then "r c p/q" sorted triplets)

def matrix_to_text(m):
    lines = ["%d %d" % (m.rows, m.cols)]
    for (r, c) in sorted(m.entries):
        lines.append("%d %d %s" % (r, c, format_scalar(m.entries[(r, c)])))
    return "\n".join(lines)


def matrix_from_text(text):
    lines = [l for l in text.strip().splitlines() if l.strip()]
    head = lines[0].split()
    rows, cols = int(head[0]), int(head[1])
    ent = {}
    for l in lines[1:]:
        r, c, x = l.split()
        ent[(int(r), int(c))] = parse_scalar(x)
    return SparseMatrix(rows, cols, ent)


def vector_to_text(v):
    return " + ".join("%s*%d" % (format_scalar(x), i) for i, x in sorted(v.items())) or "0"
