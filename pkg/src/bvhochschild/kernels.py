"""Hot-path selection: compiled extension when available, pure Python
otherwise.

The sweeps over every elementary cochain (the coboundary-squared check
and the paired cyclic swap identity) are the only operations whose cost
grows like dim^(2n); everything else in the package stays on the generic
exact path.  Both sweeps run on integer tables: over Q after verifying
that every structure constant involved is an integer (true for all
built-ins), over F_p on canonical residues with a modulus.  When the
tables are not integral the sweeps fall back to the generic cochain
arithmetic, which is slower but always available.

Set BVHOCHSCHILD_PURE=1 to force the pure-Python mirror (used by the
benchmark to compare both implementations).
"""

from __future__ import annotations

import os
from fractions import Fraction

from .scalars import PrimeField, RationalField

if os.environ.get("BVHOCHSCHILD_PURE"):
    from . import _fastpath_py as _impl
    BACKEND = "pure"
else:
    try:
        from . import _fastpath as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _fastpath_py as _impl
        BACKEND = "pure"


def _as_int(x, mod):
    if mod:
        return int(x) % mod
    if isinstance(x, Fraction):
        if x.denominator != 1:
            return None
        return int(x)
    if isinstance(x, int):
        return x
    return None


def _int_matrix(rows, mod):
    out = []
    for row in rows:
        r = []
        for x in row:
            v = _as_int(x, mod)
            if v is None:
                return None
        # second pass kept simple: rebuild with conversions
        out.append([_as_int(x, mod) for x in row])
    return out


def _modulus(field):
    if isinstance(field, RationalField):
        return 0
    if isinstance(field, PrimeField):
        return field.p
    return None


def _basic_tables(space):
    mod = _modulus(space.field)
    if mod is None:
        return None
    by_target_raw = space.mult_by_target()
    by_target = []
    for entries in by_target_raw:
        conv = []
        for (i, j, c) in entries:
            v = _as_int(c, mod)
            if v is None:
                return None
            conv.append((i, j, v))
        by_target.append(conv)
    left = []
    right = []
    for i in range(space.dim):
        L = _int_matrix(space.module.left_tables[i], mod)
        R = _int_matrix(space.module.right_tables[i], mod)
        if L is None or R is None:
            return None
        left.append(L)
        right.append(R)
    return {"d": space.dim, "md": space.module.dim,
            "by_target": by_target, "left": left, "right": right,
            "mod": mod}


def _pairing_tables(space):
    mod = _modulus(space.field)
    if mod is None or space.algebra.pairing is None:
        return None
    try:
        cols_f, gu_f = space.pairing_data()
    except ValueError:
        return None
    cols = _int_matrix(cols_f, mod)
    gu = _int_matrix([gu_f], mod)
    pairing = _int_matrix(space.algebra.pairing, mod)
    mult = []
    for i in range(space.dim):
        row = _int_matrix(space.algebra.mult[i], mod)
        if row is None:
            return None
        mult.append(row)
    if cols is None or gu is None or pairing is None:
        return None
    return {"d": space.dim, "mult": mult, "pairing": pairing,
            "gu": gu[0], "cols": cols, "mod": mod}


def delta_squared_elementary_sweep(space, n):
    """None when delta^2 kills every elementary arity-n cochain, else a
    witness (tuple, out_index)."""
    tabs = _basic_tables(space)
    if tabs is not None:
        return _impl.delta_squared_sweep(
            tabs["d"], tabs["md"], tabs["by_target"], tabs["left"],
            tabs["right"], tabs["mod"], n)
    from .hochschild import coboundary, tuples
    for t in tuples(space.dim, n):
        for k in range(space.module.dim):
            f = space.elementary(t, k)
            if not coboundary(coboundary(f)).is_zero():
                return (t, k)
    return None


def swap_identity_sweep(space, n, m):
    """None when Delta^1(f x g) = (-1)^{nm} Delta^2(g x f) for all
    elementary pairs of arities (n, m), else a witness."""
    if not space.values_in_algebra:
        raise ValueError("swap identity needs algebra-valued cochains")
    tabs = _pairing_tables(space)
    if tabs is not None:
        return _impl.swap_identity_sweep(
            tabs["d"], tabs["d"], tabs["mult"], tabs["pairing"],
            tabs["gu"], tabs["cols"], tabs["mod"], n, m)
    from .hochschild import delta_split, tuples
    field = space.field
    for tf in tuples(space.dim, n):
        for k1 in range(space.dim):
            f = space.elementary(tf, k1)
            for tg in tuples(space.dim, m):
                for k2 in range(space.dim):
                    g = space.elementary(tg, k2)
                    d1, _ = delta_split(f, g)
                    _, d2 = delta_split(g, f)
                    if (n * m) % 2:
                        d2 = -d2
                    if d1 != d2:
                        return (tf, k1, tg, k2)
    return None
