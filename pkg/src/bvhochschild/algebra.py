"""Finite-dimensional unital algebras with an optional invariant pairing.

An :class:`Algebra` stores a basis, structure constants, a unit vector,
optional integer degrees, and an optional bilinear pairing matrix.  The
validation entry point re-checks every axiom on basis tuples and reports
witnesses for failures; downstream layers (cochain complexes, the
coderivation layer) refuse to run on invalid input.

Bimodules are represented concretely by left/right action matrices per
algebra basis vector.  The two stock examples are the algebra over itself
and the linear dual with actions (a . phi)(c) = phi(c a) and
(phi . b)(c) = phi(b c); that orientation is the unique one making the
pairing transport a -> <a, .> a map of bimodules for an invariant
symmetric pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .scalars import (
    QQ, SpanTracker, invert, kernel_basis, vec_add, vec_is_zero, vec_scale,
    vec_zero,
)


@dataclass
class Check:
    name: str
    ok: bool
    witness: object = None
    detail: str = ""

    def line(self):
        status = "pass" if self.ok else "FAIL"
        out = "%-24s %s" % (self.name, status)
        if not self.ok and self.detail:
            out += "  [%s]" % self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list = dc_field(default_factory=list)

    def add(self, name, ok, witness=None, detail=""):
        self.checks.append(Check(name, ok, witness, detail))

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def first_failure(self):
        for c in self.checks:
            if not c.ok:
                return c
        return None


class Algebra:
    """Unital associative algebra given by structure constants.

    mult[i][j] is the coordinate vector of e_i * e_j.  degrees default to
    all zero (the ungraded case).  pairing, when present, is the Gram
    matrix g[i][j] = <e_i, e_j>.
    """

    def __init__(self, field, names, mult, unit, degrees=None, pairing=None,
                 label="algebra"):
        self.field = field
        self.names = list(names)
        self.dim = len(self.names)
        self.mult = mult
        self.unit = list(unit)
        self.degrees = list(degrees) if degrees is not None else [0] * self.dim
        self.pairing = pairing
        self.label = label
        self._pairing_inv = None
        if len(self.degrees) != self.dim or len(self.unit) != self.dim:
            raise ValueError("inconsistent dimensions in algebra data")

    # -- basic arithmetic ---------------------------------------------------

    def multiply(self, u, v):
        field = self.field
        out = vec_zero(field, self.dim)
        for i, a in enumerate(u):
            if field.is_zero(a):
                continue
            row = self.mult[i]
            for j, b in enumerate(v):
                if field.is_zero(b):
                    continue
                c = field.mul(a, b)
                for k, s in enumerate(row[j]):
                    if not field.is_zero(s):
                        out[k] = field.add(out[k], field.mul(c, s))
        return out

    def basis_vector(self, i):
        v = vec_zero(self.field, self.dim)
        v[i] = self.field.one
        return v

    @property
    def is_graded(self):
        return any(d != 0 for d in self.degrees)

    def pair(self, u, v):
        if self.pairing is None:
            raise ValueError("algebra %s has no pairing" % self.label)
        field = self.field
        acc = field.zero
        for i, a in enumerate(u):
            if field.is_zero(a):
                continue
            for j, b in enumerate(v):
                if not field.is_zero(b):
                    acc = field.add(acc, field.mul(field.mul(a, b),
                                                   self.pairing[i][j]))
        return acc

    def pairing_inverse(self):
        if self.pairing is None:
            raise ValueError("algebra %s has no pairing" % self.label)
        if self._pairing_inv is None:
            inv = invert(self.field, self.pairing)
            if inv is None:
                raise ValueError("pairing of %s is degenerate" % self.label)
            self._pairing_inv = inv
        return self._pairing_inv

    def pairing_degree(self):
        """Common total degree P of all nonzero pairing entries."""
        if self.pairing is None:
            raise ValueError("algebra %s has no pairing" % self.label)
        degs = {self.degrees[i] + self.degrees[j]
                for i in range(self.dim) for j in range(self.dim)
                if not self.field.is_zero(self.pairing[i][j])}
        if len(degs) > 1:
            raise ValueError("pairing of %s is not homogeneous" % self.label)
        return degs.pop() if degs else 0

    def pairing_to_dual_iso(self):
        """Matrix of a -> <a, .> from basis coordinates to dual-basis
        coordinates: column i holds the dual coordinates of <e_i, .>."""
        self.pairing_inverse()  # insist on nondegeneracy
        g = self.pairing
        return [[g[i][k] for i in range(self.dim)] for k in range(self.dim)]

    # -- validation ---------------------------------------------------------

    def validate(self):
        field = self.field
        rep = Report("validate %s" % self.label)
        names = self.names

        ok, wit = True, None
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.multiply(self.unit, e) != e:
                ok, wit = False, i
                break
        rep.add("unit-left", ok, wit,
                "" if ok else "1*%s != %s" % (names[wit], names[wit]))

        ok, wit = True, None
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.multiply(e, self.unit) != e:
                ok, wit = False, i
                break
        rep.add("unit-right", ok, wit,
                "" if ok else "%s*1 != %s" % (names[wit], names[wit]))

        ok, wit = True, None
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    left = self.multiply(self.mult[i][j], self.basis_vector(k))
                    right = self.multiply(self.basis_vector(i), self.mult[j][k])
                    if left != right:
                        ok, wit = False, (i, j, k)
                        break
                if not ok:
                    break
            if not ok:
                break
        rep.add("associative", ok, wit,
                "" if ok else "(%s*%s)*%s != %s*(%s*%s)" % (
                    names[wit[0]], names[wit[1]], names[wit[2]],
                    names[wit[0]], names[wit[1]], names[wit[2]]))

        if self.is_graded:
            ok, wit = True, None
            for i in range(self.dim):
                for j in range(self.dim):
                    want = self.degrees[i] + self.degrees[j]
                    for k, c in enumerate(self.mult[i][j]):
                        if not field.is_zero(c) and self.degrees[k] != want:
                            ok, wit = False, (i, j, k)
                            break
                    if not ok:
                        break
                if not ok:
                    break
            rep.add("grading-mult", ok, wit,
                    "" if ok else "%s*%s has a component off degree %d" % (
                        names[wit[0]], names[wit[1]],
                        self.degrees[wit[0]] + self.degrees[wit[1]]))
            ok = all(field.is_zero(c) or self.degrees[k] == 0
                     for k, c in enumerate(self.unit))
            rep.add("grading-unit", ok)

        if self.pairing is not None:
            self._validate_pairing(rep)
        return rep

    def _validate_pairing(self, rep):
        field = self.field
        names = self.names
        g = self.pairing

        ok, wit = True, None
        for i in range(self.dim):
            for j in range(self.dim):
                want = g[j][i]
                if (self.degrees[i] * self.degrees[j]) % 2:
                    want = field.neg(want)
                if not field.is_zero(field.sub(g[i][j], want)):
                    ok, wit = False, (i, j)
                    break
            if not ok:
                break
        rep.add("pairing-symmetric", ok, wit,
                "" if ok else "<%s,%s> != +-<%s,%s>" % (
                    names[wit[0]], names[wit[1]], names[wit[1]], names[wit[0]]))

        ok, wit = True, None
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    lhs = self.pair(self.mult[i][j], self.basis_vector(k))
                    rhs = self.pair(self.basis_vector(i), self.mult[j][k])
                    if not field.is_zero(field.sub(lhs, rhs)):
                        ok, wit = False, (i, j, k)
                        break
                if not ok:
                    break
            if not ok:
                break
        rep.add("pairing-invariant", ok, wit,
                "" if ok else "<%s*%s,%s> != <%s,%s*%s>" % (
                    names[wit[0]], names[wit[1]], names[wit[2]],
                    names[wit[0]], names[wit[1]], names[wit[2]]))

        ker = kernel_basis(field, g, ncols=self.dim)
        rep.add("pairing-nondegenerate", not ker,
                ker[0] if ker else None,
                "" if not ker else "kernel vector %s" % (ker[0],))

        if self.is_graded:
            try:
                self.pairing_degree()
                rep.add("pairing-homogeneous", True)
            except ValueError:
                rep.add("pairing-homogeneous", False,
                        detail="mixed total degrees among nonzero entries")

    # -- change of basis ----------------------------------------------------

    def change_basis(self, cols, names=None):
        """Transport the algebra to the basis whose j-th vector is column j
        of ``cols`` (old coordinates).  Exact; fails on singular input."""
        field = self.field
        n = self.dim
        C = [[cols[i][j] for j in range(n)] for i in range(n)]
        Cinv = invert(field, C)
        if Cinv is None:
            raise ValueError("change of basis matrix is singular")

        def to_new(vec):
            return [sum_dot(field, Cinv[r], vec) for r in range(n)]

        col = lambda j: [C[i][j] for i in range(n)]
        mult = [[to_new(self.multiply(col(i), col(j))) for j in range(n)]
                for i in range(n)]
        unit = to_new(self.unit)
        pairing = None
        if self.pairing is not None:
            pairing = [[self.pair(col(i), col(j)) for j in range(n)]
                       for i in range(n)]
        if names is None:
            names = ["b%d" % j for j in range(n)]
        return Algebra(field, names, mult, unit, degrees=None,
                       pairing=pairing, label=self.label + "'")

    def with_unit_first(self):
        """An isomorphic copy whose basis vector 0 is the unit (used to
        carve out cochains that vanish on unit arguments).  Returns
        (algebra, columns) with columns the change-of-basis matrix."""
        field = self.field
        if self.unit == self.basis_vector(0):
            return self, None
        tracker = SpanTracker(field)
        cols = [list(self.unit)]
        tracker.add(self.unit)
        for i in range(self.dim):
            e = self.basis_vector(i)
            if tracker.add(e):
                cols.append(e)
        C = [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]
        names = ["u0"] + ["b%d" % j for j in range(1, self.dim)]
        return self.change_basis(C, names=names), C


def sum_dot(field, row, vec):
    acc = field.zero
    for a, b in zip(row, vec):
        if not (field.is_zero(a) or field.is_zero(b)):
            acc = field.add(acc, field.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# bimodules


class Bimodule:
    """Bimodule given by action matrices: left[i] sends coordinates of m
    to coordinates of e_i . m, right[j] sends m to m . e_j."""

    def __init__(self, algebra, dim, left, right, label="M"):
        self.algebra = algebra
        self.field = algebra.field
        self.dim = dim
        self.left_tables = left
        self.right_tables = right
        self.label = label

    def left(self, i, m):
        field = self.field
        t = self.left_tables[i]
        return [sum_dot(field, t[r], m) for r in range(self.dim)]

    def right(self, m, j):
        field = self.field
        t = self.right_tables[j]
        return [sum_dot(field, t[r], m) for r in range(self.dim)]

    def left_vec(self, a, m):
        field = self.field
        out = vec_zero(field, self.dim)
        for i, c in enumerate(a):
            if not field.is_zero(c):
                out = vec_add(field, out, vec_scale(field, c, self.left(i, m)))
        return out

    def right_vec(self, m, b):
        field = self.field
        out = vec_zero(field, self.dim)
        for j, c in enumerate(b):
            if not field.is_zero(c):
                out = vec_add(field, out, vec_scale(field, c, self.right(m, j)))
        return out

    def basis_vector(self, k):
        v = vec_zero(self.field, self.dim)
        v[k] = self.field.one
        return v

    def validate(self):
        A = self.algebra
        rep = Report("bimodule %s" % self.label)
        ok, wit = True, None
        for k in range(self.dim):
            m = self.basis_vector(k)
            if self.left_vec(A.unit, m) != m or self.right_vec(m, A.unit) != m:
                ok, wit = False, k
                break
        rep.add("unit-acts-trivially", ok, wit)

        ok, wit = True, None
        for i in range(A.dim):
            for k in range(self.dim):
                m = self.basis_vector(k)
                for j in range(A.dim):
                    lhs = self.right(self.left(i, m), j)
                    rhs = self.left(i, self.right(m, j))
                    if lhs != rhs:
                        ok, wit = False, (i, k, j)
                        break
                if not ok:
                    break
            if not ok:
                break
        rep.add("actions-commute", ok, wit)

        ok, wit = True, None
        for i in range(A.dim):
            for j in range(A.dim):
                prod = A.mult[i][j]
                for k in range(self.dim):
                    m = self.basis_vector(k)
                    if self.left_vec(prod, m) != self.left(i, self.left(j, m)):
                        ok, wit = False, ("left", i, j, k)
                        break
                    if self.right_vec(m, prod) != self.right(self.right(m, i), j):
                        ok, wit = False, ("right", i, j, k)
                        break
                if not ok:
                    break
            if not ok:
                break
        rep.add("actions-associative", ok, wit)
        return rep


def algebra_bimodule(A):
    """A over itself: both actions are multiplication."""
    n = A.dim
    left = [[[A.mult[i][k][r] for k in range(n)] for r in range(n)]
            for i in range(n)]
    right = [[[A.mult[k][j][r] for k in range(n)] for r in range(n)]
             for j in range(n)]
    return Bimodule(A, n, left, right, label=A.label)


def dual_bimodule(A):
    """The linear dual A* with (a . phi)(c) = phi(c a) and
    (phi . b)(c) = phi(b c), in the dual basis."""
    n = A.dim
    left = [[[A.mult[c][i][k] for k in range(n)] for c in range(n)]
            for i in range(n)]
    right = [[[A.mult[j][c][k] for k in range(n)] for c in range(n)]
             for j in range(n)]
    return Bimodule(A, n, left, right, label=A.label + "*")


# ---------------------------------------------------------------------------
# built-in fixtures


def _vec(field, coords):
    return [field.of(c) for c in coords]


def _mat(field, rows):
    return [_vec(field, r) for r in rows]


def dual_numbers(field=QQ):
    """k[x]/x^2 with <1,x> = <x,1> = 1, <1,1> = <x,x> = 0."""
    mult = [[_vec(field, [1, 0]), _vec(field, [0, 1])],
            [_vec(field, [0, 1]), _vec(field, [0, 0])]]
    return Algebra(field, ["1", "x"], mult, _vec(field, [1, 0]),
                   pairing=_mat(field, [[0, 1], [1, 0]]), label="DUAL")


def group_algebra_z2(field=QQ):
    """k[g]/(g^2-1) with the coefficient-of-1 pairing (identity matrix)."""
    mult = [[_vec(field, [1, 0]), _vec(field, [0, 1])],
            [_vec(field, [0, 1]), _vec(field, [1, 0])]]
    return Algebra(field, ["1", "g"], mult, _vec(field, [1, 0]),
                   pairing=_mat(field, [[1, 0], [0, 1]]), label="CZ2")


def mat2(field=QQ):
    """2x2 matrices, basis e11 e12 e21 e22, trace-form pairing."""
    names = ["e11", "e12", "e21", "e22"]
    idx = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    n = 4
    mult = [[vec_zero(field, n) for _ in range(n)] for _ in range(n)]
    for (a, b), i in idx.items():
        for (c, d), j in idx.items():
            if b == c:
                mult[i][j][idx[(a, d)]] = field.one
    pairing = [[field.zero] * n for _ in range(n)]
    for (a, b), i in idx.items():
        for (c, d), j in idx.items():
            if b == c and d == a:
                pairing[i][j] = field.one
    unit = vec_zero(field, n)
    unit[idx[(1, 1)]] = field.one
    unit[idx[(2, 2)]] = field.one
    return Algebra(field, names, mult, unit, pairing=pairing, label="MAT2")


def exterior_line(field=QQ):
    """Exterior algebra on one generator x of degree 1; pairing
    <1,x> = <x,1> = 1 has total degree 1."""
    mult = [[_vec(field, [1, 0]), _vec(field, [0, 1])],
            [_vec(field, [0, 1]), _vec(field, [0, 0])]]
    return Algebra(field, ["1", "x"], mult, _vec(field, [1, 0]),
                   degrees=[0, 1],
                   pairing=_mat(field, [[0, 1], [1, 0]]), label="LAMBDA")


def corrupted_invariance(field=QQ):
    """DUAL with <x,x> forced to 1: still symmetric and nondegenerate but
    <1*x, x> = 1 != 0 = <1, x*x> breaks invariance."""
    A = dual_numbers(field)
    A.pairing = _mat(field, [[0, 1], [1, 1]])
    A.label = "DUAL-badinv"
    A._pairing_inv = None
    return A


def corrupted_nondegenerate(field=QQ):
    """DUAL with the pairing collapsed to <x,x> = 1 only: rank 1."""
    A = dual_numbers(field)
    A.pairing = _mat(field, [[0, 0], [0, 1]])
    A.label = "DUAL-badrank"
    A._pairing_inv = None
    return A


BUILTINS = {
    "DUAL": dual_numbers,
    "CZ2": group_algebra_z2,
    "MAT2": mat2,
    "LAMBDA": exterior_line,
}
