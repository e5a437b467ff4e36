"""The strict Hochschild cochain complex of a unital algebra.

A cochain f in C^n(A,M) is a multilinear map A^n -> M, stored sparsely as
a dict from n-tuples of basis indices to nonzero M-coordinate vectors.
This module implements the chain-level operations:

* coboundary         delta f (any coefficient bimodule M)
* cup product        f . g valued in A
* insertion products f o_j g, the pre-Lie product f o g, and the bracket
* the cyclic rotation operators Delta_i and their signed sum Delta,
  defined through the pairing by
  < (Delta_i f)(a_1..a_{n-1}), a_n > = < f(a_i..a_{n-1}, a_n, a_1..a_{i-1}), 1 >
* the split pieces Delta^1, Delta^2 of Delta(f cup g)
* the homotopy H(f,g) trivializing  f o g  against
  Delta(f) cup g - Delta^2(f x g)  for closed f, g

All arithmetic is exact.  Delta and its relatives require the algebra's
pairing; calling them without one raises a ValueError up front.
"""

from __future__ import annotations

from .algebra import algebra_bimodule, dual_bimodule
from .scalars import invert, vec_zero


class HochschildComplex:
    """Cochains on ``algebra`` with values in a bimodule.

    module=None means the algebra acting on itself (the only case where
    cup/insertion products are defined); dual=True means the linear dual.
    """

    def __init__(self, algebra, module=None, dual=False):
        self.algebra = algebra
        self.field = algebra.field
        if module is None:
            module = dual_bimodule(algebra) if dual else algebra_bimodule(algebra)
            self.values_in_algebra = not dual
        else:
            self.values_in_algebra = False
        self.module = module
        self.dim = algebra.dim
        self._mult_by_target = None
        self._pairing_data = None

    # -- cochain constructors ------------------------------------------------

    def zero(self, n):
        return Cochain(self, n, {})

    def cochain(self, n, data):
        clean = {}
        for t, v in data.items():
            if len(t) != n:
                raise ValueError("tuple %r has arity != %d" % (t, n))
            v = list(v)
            if any(not self.field.is_zero(c) for c in v):
                clean[tuple(t)] = v
        return Cochain(self, n, clean)

    def elementary(self, t, out_index):
        """The cochain sending basis tuple t to the basis vector out_index
        and every other basis tuple to zero."""
        v = vec_zero(self.field, self.module.dim)
        v[out_index] = self.field.one
        return Cochain(self, len(t), {tuple(t): v})

    def basis(self, n):
        """All elementary cochains of arity n, in lexicographic order."""
        out = []
        for t in tuples(self.dim, n):
            for k in range(self.module.dim):
                out.append(self.elementary(t, k))
        return out

    def coordinates(self, f):
        """Dense coordinates of f in the elementary-cochain basis order."""
        out = []
        zero = vec_zero(self.field, self.module.dim)
        for t in tuples(self.dim, f.arity):
            v = f.data.get(t, zero)
            out.extend(v)
        return out

    def from_coordinates(self, n, coords):
        md = self.module.dim
        data = {}
        pos = 0
        for t in tuples(self.dim, n):
            data[t] = list(coords[pos:pos + md])
            pos += md
        return self.cochain(n, data)

    def space_dim(self, n):
        return (self.dim ** n) * self.module.dim

    # -- cached structure tables ----------------------------------------------

    def mult_by_target(self):
        """For each basis index k: the list of (i, j, c) with
        (e_i e_j)_k = c != 0.  Drives the coboundary fan-out."""
        if self._mult_by_target is None:
            A = self.algebra
            table = [[] for _ in range(A.dim)]
            for i in range(A.dim):
                for j in range(A.dim):
                    for k, c in enumerate(A.mult[i][j]):
                        if not self.field.is_zero(c):
                            table[k].append((i, j, c))
            self._mult_by_target = table
        return self._mult_by_target

    def pairing_data(self):
        """(columns of (g^T)^-1, the vector g . unit) used by Delta_i."""
        if self._pairing_data is None:
            A = self.algebra
            if A.pairing is None:
                raise ValueError(
                    "algebra %s has no pairing: the cyclic Delta operator "
                    "is undefined" % A.label)
            g = A.pairing
            gt = [[g[j][i] for j in range(A.dim)] for i in range(A.dim)]
            ginv_t = invert(self.field, gt)
            if ginv_t is None:
                raise ValueError("pairing of %s is degenerate" % A.label)
            cols = [[ginv_t[r][s] for r in range(A.dim)] for s in range(A.dim)]
            gu = [sum_product(self.field, g[k], A.unit) for k in range(A.dim)]
            self._pairing_data = (cols, gu)
        return self._pairing_data


def sum_product(field, row, vec):
    acc = field.zero
    for a, b in zip(row, vec):
        if not (field.is_zero(a) or field.is_zero(b)):
            acc = field.add(acc, field.mul(a, b))
    return acc


def tuples(dim, n):
    if n == 0:
        yield ()
        return
    idx = [0] * n
    while True:
        yield tuple(idx)
        p = n - 1
        while p >= 0 and idx[p] == dim - 1:
            idx[p] = 0
            p -= 1
        if p < 0:
            return
        idx[p] += 1


class Cochain:
    """Sparse multilinear map A^n -> M."""

    __slots__ = ("space", "arity", "data")

    def __init__(self, space, arity, data):
        self.space = space
        self.arity = arity
        self.data = data

    # -- linear structure ------------------------------------------------------

    def _acc(self, out, t, vec, sign_or_scalar):
        field = self.space.field
        cur = out.get(t)
        if cur is None:
            cur = vec_zero(field, self.space.module.dim)
            out[t] = cur
        for k, c in enumerate(vec):
            if not field.is_zero(c):
                cur[k] = field.add(cur[k], field.mul(sign_or_scalar, c))

    def _finish(self, n, out):
        field = self.space.field
        clean = {t: v for t, v in out.items()
                 if any(not field.is_zero(c) for c in v)}
        return Cochain(self.space, n, clean)

    def __add__(self, other):
        self._compatible(other)
        out = {t: list(v) for t, v in self.data.items()}
        for t, v in other.data.items():
            self._acc(out, t, v, self.space.field.one)
        return self._finish(self.arity, out)

    def __sub__(self, other):
        self._compatible(other)
        out = {t: list(v) for t, v in self.data.items()}
        for t, v in other.data.items():
            self._acc(out, t, v, self.space.field.neg(self.space.field.one))
        return self._finish(self.arity, out)

    def scale(self, c):
        field = self.space.field
        if field.is_zero(c):
            return self.space.zero(self.arity)
        return Cochain(self.space, self.arity,
                       {t: [field.mul(c, x) for x in v]
                        for t, v in self.data.items()})

    def __neg__(self):
        return self.scale(self.space.field.neg(self.space.field.one))

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        if self.arity != other.arity:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("cochains are mutable-ish; not hashable")

    def _compatible(self, other):
        if self.space is not other.space:
            raise ValueError("cochains live on different complexes")
        if self.arity != other.arity:
            raise ValueError("cochain arities differ: %d vs %d"
                             % (self.arity, other.arity))

    def __repr__(self):
        if not self.data:
            return "<0 in C^%d>" % self.arity
        return "<cochain arity %d, %d basis tuples>" % (self.arity, len(self.data))

    def evaluate(self, *vectors):
        """Evaluate on algebra elements given by coordinate vectors."""
        if len(vectors) != self.arity:
            raise ValueError("expected %d arguments" % self.arity)
        field = self.space.field
        out = vec_zero(field, self.space.module.dim)
        for t, v in self.data.items():
            c = field.one
            dead = False
            for slot, vec in zip(t, vectors):
                x = vec[slot]
                if field.is_zero(x):
                    dead = True
                    break
                c = field.mul(c, x)
            if dead:
                continue
            for k, val in enumerate(v):
                if not field.is_zero(val):
                    out[k] = field.add(out[k], field.mul(c, val))
        return out


# ---------------------------------------------------------------------------
# the coboundary


def coboundary(f):
    """delta f(a_1..a_{n+1}) = a_1 . f(a_2..)
    + sum_i (-1)^i f(.., a_i a_{i+1}, ..) + (-1)^{n+1} f(..) . a_{n+1}."""
    space = f.space
    field = space.field
    n = f.arity
    M = space.module
    by_target = space.mult_by_target()
    one = field.one
    minus = field.neg(one)
    out = {}
    acc = f._acc
    for t, v in f.data.items():
        for a1 in range(space.dim):
            w = M.left(a1, v)
            acc(out, (a1,) + t, w, one)
        for p in range(n):
            sign = one if (p + 1) % 2 == 0 else minus
            head, mid, tail = t[:p], t[p], t[p + 1:]
            for (i, j, c) in by_target[mid]:
                acc(out, head + (i, j) + tail, v, field.mul(sign, c))
        sign = one if (n + 1) % 2 == 0 else minus
        for b in range(space.dim):
            w = M.right(v, b)
            acc(out, t + (b,), w, sign)
    return f._finish(n + 1, out)


# ---------------------------------------------------------------------------
# cup and insertion products (values in A only)


def _need_algebra_values(f, opname):
    if not f.space.values_in_algebra:
        raise ValueError("%s needs cochains valued in the algebra itself"
                         % opname)


def cup(f, g):
    """(f cup g)(a_1..a_{n+m}) = f(a_1..a_n) . g(a_{n+1}..a_{n+m})."""
    _need_algebra_values(f, "cup")
    if f.space is not g.space:
        raise ValueError("cochains live on different complexes")
    space = f.space
    field = space.field
    A = space.algebra
    out = {}
    for t1, v1 in f.data.items():
        for t2, v2 in g.data.items():
            w = A.multiply(v1, v2)
            f._acc(out, t1 + t2, w, field.one)
    return f._finish(f.arity + g.arity, out)


def insert_at(f, g, j):
    """f o_j g: plug g into the j-th slot of f (1-indexed, j = 1..n)."""
    _need_algebra_values(f, "insertion")
    if f.space is not g.space:
        raise ValueError("cochains live on different complexes")
    if not 1 <= j <= f.arity:
        raise ValueError("insertion slot %d out of range 1..%d" % (j, f.arity))
    space = f.space
    field = space.field
    p = j - 1
    out = {}
    for t1, v1 in f.data.items():
        slot = t1[p]
        for t2, v2 in g.data.items():
            c = v2[slot]
            if field.is_zero(c):
                continue
            f._acc(out, t1[:p] + t2 + t1[p + 1:], v1, c)
    return f._finish(f.arity + g.arity - 1, out)


def circ(f, g):
    """Pre-Lie product f o g = sum_j (-1)^{(j-1)(m-1)} f o_j g."""
    m = g.arity
    total = f.space.zero(f.arity + m - 1)
    for j in range(1, f.arity + 1):
        term = insert_at(f, g, j)
        if ((j - 1) * (m - 1)) % 2:
            term = -term
        total = total + term
    return total


def bracket(f, g):
    """[f,g] = f o g - (-1)^{(n-1)(m-1)} g o f."""
    n, m = f.arity, g.arity
    second = circ(g, f)
    if ((n - 1) * (m - 1)) % 2 == 0:
        return circ(f, g) - second
    return circ(f, g) + second


# ---------------------------------------------------------------------------
# the cyclic Delta operators


def delta_i(f, i):
    """The i-th cyclic rotation operator, i in 1..n, via the pairing:
    <(Delta_i f)(a_1..a_{n-1}), a_n> = <f(a_i..a_{n-1}, a_n, a_1..a_{i-1}), 1>.
    """
    _need_algebra_values(f, "Delta_i")
    n = f.arity
    if not 1 <= i <= n:
        raise ValueError("Delta_%d undefined on arity-%d cochains" % (i, n))
    space = f.space
    field = space.field
    cols, gu = space.pairing_data()
    out = {}
    for t, v in f.data.items():
        tau = sum_product(field, v, gu)
        if field.is_zero(tau):
            continue
        # t = (a_i..a_{n-1}, a_n, a_1..a_{i-1}): the output tuple collects
        # the trailing i-1 entries first, then the leading n-i ones
        s0 = t[n - i]
        new_t = t[n - i + 1:] + t[:n - i]
        f._acc(out, new_t, cols[s0], tau)
    return f._finish(n - 1, out)


def delta_op(f):
    """Delta = sum_{i=1}^n (-1)^{i(n-1)} Delta_i; zero on C^0."""
    n = f.arity
    if n == 0:
        return f.space.zero(0)
    total = f.space.zero(n - 1)
    for i in range(1, n + 1):
        term = delta_i(f, i)
        if (i * (n - 1)) % 2:
            term = -term
        total = total + term
    return total


def delta_split(f, g):
    """(Delta^1(f x g), Delta^2(f x g)): the first m / last n cyclic terms
    of Delta(f cup g), with Delta(f cup g) = Delta^1 + Delta^2."""
    n, m = f.arity, g.arity
    h = cup(f, g)
    N = n + m
    d1 = f.space.zero(N - 1)
    d2 = f.space.zero(N - 1)
    for i in range(1, N + 1):
        term = delta_i(h, i)
        if (i * (N - 1)) % 2:
            term = -term
        if i <= m:
            d1 = d1 + term
        else:
            d2 = d2 + term
    return d1, d2


def homotopy_H(f, g):
    """H = sum_{i,j>=1, i+j<=n} (-1)^{(j-1)(m-1)+i(n+m)+1} Delta_i(f o_j g)
    for closed f, g; trivializes
    f o g - (-1)^{(n-1)m} Delta(f) cup g + (-1)^{(n-1)m} Delta^2(f x g)."""
    for name, c in (("f", f), ("g", g)):
        if not coboundary(c).is_zero():
            raise ValueError(
                "homotopy_H requires closed inputs: %s is not closed "
                "(delta %s != 0)" % (name, name))
    n, m = f.arity, g.arity
    total = f.space.zero(n + m - 2)
    for j in range(1, n + 1):
        if j + 1 > n:
            break
        fj = insert_at(f, g, j)
        for i in range(1, n - j + 1):
            term = delta_i(fj, i)
            if ((j - 1) * (m - 1) + i * (n + m) + 1) % 2:
                term = -term
            total = total + term
    return total


def homotopy_H_defect(f, g):
    """The closed combination that delta(H) must equal:
    f o g - (-1)^{(n-1)m} Delta(f) cup g + (-1)^{(n-1)m} Delta^2(f x g)."""
    n, m = f.arity, g.arity
    rhs = circ(f, g)
    sign = ((n - 1) * m) % 2
    term = cup(delta_op(f), g)
    _, d2 = delta_split(f, g)
    if sign:
        return rhs + term - d2
    return rhs - term + d2


def bv_defect(f, g):
    """[f,g] + (-1)^{(n-1)m}(Delta(f cup g) - Delta(f) cup g
    - (-1)^n f cup Delta(g)): zero in cohomology when the bracket is the
    deviation of Delta from being a cup derivation."""
    n, m = f.arity, g.arity
    inner = delta_op(cup(f, g)) - cup(delta_op(f), g)
    last = cup(f, delta_op(g))
    if n % 2 == 0:
        inner = inner - last
    else:
        inner = inner + last
    if ((n - 1) * m) % 2:
        return bracket(f, g) - inner
    return bracket(f, g) + inner


def is_normalized(f, unit_index=0):
    """True when f vanishes on every tuple containing the unit basis index
    (assumes the algebra's basis vector unit_index IS the unit)."""
    return all(unit_index not in t for t in f.data)
