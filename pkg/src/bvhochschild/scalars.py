"""Exact scalar fields and exact dense linear algebra.

Two fields are supported: the rationals (elements are
:class:`fractions.Fraction`) and prime fields F_p (elements are ints in
``range(p)``).  Everything downstream works with plain Python lists of
field elements; the field object supplies the arithmetic.

The linear algebra here is deliberately small and deterministic: row
reduction always picks the first nonzero pivot, kernels and solutions are
therefore reproducible, and every result is exact.  Over Q the elimination
clears denominators row by row and runs a fraction-free (Bareiss) pass on
integers before back-substituting, which keeps intermediate entries from
exploding on the integer matrices this package actually produces.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class RationalField:
    """The field Q. Elements are Fraction instances (ints are accepted
    on input and normalized by of())."""

    name = "Q"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def of(self, value):
        return Fraction(value)

    def parse(self, text):
        return Fraction(text)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def is_zero(self, a):
        return a == 0

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    """The field F_p for a prime p. Elements are ints in range(p)."""

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError("modulus %r is not prime" % (p,))
        self.p = p
        self.name = "F%d" % p
        self.zero = 0
        self.one = 1 % p

    def of(self, value):
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(
                    "denominator %d vanishes mod %d" % (value.denominator, self.p))
            return value.numerator * pow(den, self.p - 2, self.p) % self.p
        return value % self.p

    def parse(self, text):
        return self.of(Fraction(text))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def to_str(self, a):
        return str(a % self.p)

    def __repr__(self):
        return "PrimeField(%d)" % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = RationalField()


def parse_field(text):
    """Parse a field descriptor: "Q", or "Fp <p>" / "Fp:<p>" / "F<p>"."""
    parts = text.replace(":", " ").split()
    if parts == ["Q"]:
        return QQ
    if len(parts) == 2 and parts[0] in ("Fp", "F"):
        return PrimeField(int(parts[1]))
    if len(parts) == 1 and parts[0].startswith("F") and parts[0][1:].isdigit():
        return PrimeField(int(parts[0][1:]))
    raise ValueError("unknown field descriptor %r" % (text,))


# ---------------------------------------------------------------------------
# vectors


def vec_zero(field, n):
    return [field.zero] * n

def vec_add(field, u, v):
    return [field.add(a, b) for a, b in zip(u, v)]

def vec_sub(field, u, v):
    return [field.sub(a, b) for a, b in zip(u, v)]

def vec_scale(field, c, u):
    return [field.mul(c, a) for a in u]

def vec_is_zero(field, u):
    return all(field.is_zero(a) for a in u)

def vec_eq(field, u, v):
    return len(u) == len(v) and all(
        field.is_zero(field.sub(a, b)) for a, b in zip(u, v))

def vec_dot(field, u, v):
    acc = field.zero
    for a, b in zip(u, v):
        acc = field.add(acc, field.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# row reduction


def _rref_generic(field, rows):
    """Reduced row echelon form by straight Gauss-Jordan over any field.
    Mutates and returns (rows, pivot_cols)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    pr = 0
    for pc in range(ncols):
        hit = None
        for r in range(pr, nrows):
            if not field.is_zero(rows[r][pc]):
                hit = r
                break
        if hit is None:
            continue
        rows[pr], rows[hit] = rows[hit], rows[pr]
        inv = field.inv(rows[pr][pc])
        rows[pr] = [field.mul(inv, x) for x in rows[pr]]
        for r in range(nrows):
            if r != pr and not field.is_zero(rows[r][pc]):
                c = rows[r][pc]
                rows[r] = [field.sub(x, field.mul(c, y))
                           for x, y in zip(rows[r], rows[pr])]
        pivots.append(pc)
        pr += 1
        if pr == nrows:
            break
    return rows, pivots


def _rref_rational(rows):
    """RREF over Q: per-row denominator clearing, integer Bareiss
    elimination to echelon form, then exact back-substitution."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    m = []
    for row in rows:
        ints = [Fraction(x) for x in row]
        l = 1
        for x in ints:
            l = l * x.denominator // gcd(l, x.denominator)
        m.append([int(x * l) for x in ints])

    pivots = []
    prev = 1
    pr = 0
    for pc in range(ncols):
        hit = None
        for r in range(pr, nrows):
            if m[r][pc] != 0:
                hit = r
                break
        if hit is None:
            continue
        m[pr], m[hit] = m[hit], m[pr]
        piv = m[pr][pc]
        top = m[pr]
        for r in range(pr + 1, nrows):
            mr = m[r]
            f = mr[pc]
            # every row below the pivot is transformed, zero multiplier
            # included: the exactness of the division by the previous
            # pivot needs the whole block to carry the same scaling
            for c in range(pc, ncols):
                mr[c] = (mr[c] * piv - f * top[c]) // prev
        prev = piv
        pivots.append(pc)
        pr += 1
        if pr == nrows:
            break

    # back-substitute to RREF with exact rationals
    out = [[Fraction(x) for x in row] for row in m]
    for r in range(len(pivots) - 1, -1, -1):
        pc = pivots[r]
        piv = out[r][pc]
        out[r] = [x / piv for x in out[r]]
        for rr in range(r):
            c = out[rr][pc]
            if c != 0:
                out[rr] = [x - c * y for x, y in zip(out[rr], out[r])]
    return out, pivots


def rref(field, mat):
    """Reduced row echelon form. Returns (new_matrix, pivot_columns)."""
    rows = [list(r) for r in mat]
    if not rows:
        return [], []
    if isinstance(field, RationalField):
        return _rref_rational(rows)
    return _rref_generic(field, rows)


def rank(field, mat):
    return len(rref(field, mat)[1])


def kernel_basis(field, mat, ncols=None):
    """Basis of the right kernel {v : mat . v = 0}, one vector per free
    column, in column order, with the free coordinate set to 1."""
    if ncols is None:
        if not mat:
            raise ValueError("need ncols for an empty matrix")
        ncols = len(mat[0])
    if not mat or ncols == 0:
        return [[field.one if i == j else field.zero for i in range(ncols)]
                for j in range(ncols)]
    red, pivots = rref(field, mat)
    pivset = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = vec_zero(field, ncols)
        v[j] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(red[r][j])
        basis.append(v)
    return basis


def solve(field, mat, rhs, ncols=None):
    """One exact solution of mat . x = rhs with all free variables 0,
    or None if the system is inconsistent."""
    if not mat:
        return vec_zero(field, ncols or 0)
    ncols = len(mat[0])
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    red, pivots = rref(field, aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = vec_zero(field, ncols)
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def invert(field, mat):
    """Exact inverse of a square matrix, or None if singular."""
    n = len(mat)
    aug = [list(row) + [field.one if i == j else field.zero
                        for j in range(n)]
           for i, row in enumerate(mat)]
    red, pivots = rref(field, aug)
    if len(pivots) < n or any(pc >= n for pc in pivots[:n]):
        return None
    return [row[n:] for row in red[:n]]


def mat_vec(field, mat, v):
    return [vec_dot(field, row, v) for row in mat]


def mat_mul(field, a, b):
    if not a or not b:
        return []
    cols = list(zip(*b))
    return [[vec_dot(field, row, col) for col in cols] for row in a]


class SpanTracker:
    """Incremental row space: add vectors one at a time, in echelon form,
    so membership and rank growth are O(rank * dim) per insertion."""

    def __init__(self, field):
        self.field = field
        self.rows = []       # list of (lead_col, normalized_row)

    def reduce(self, vec):
        """Reduce vec against the current span; returns the residue."""
        field = self.field
        v = list(vec)
        for lead, row in self.rows:
            c = v[lead]
            if not field.is_zero(c):
                v = [field.sub(x, field.mul(c, y)) for x, y in zip(v, row)]
        return v

    def contains(self, vec):
        return vec_is_zero(self.field, self.reduce(vec))

    def add(self, vec):
        """Insert vec; returns True when the rank grew."""
        field = self.field
        v = self.reduce(vec)
        for lead, x in enumerate(v):
            if not field.is_zero(x):
                inv = field.inv(x)
                v = [field.mul(inv, y) for y in v]
                self.rows.append((lead, v))
                self.rows.sort(key=lambda t: t[0])
                return True
        return False

    @property
    def rank(self):
        return len(self.rows)
