"""Solve for the sign exponent in the dual-bimodule components.

The dual of an arity-indexed square-zero structure is defined by

    D*_{k,l}(a_1..a_k, phi, b_1..b_l)(m)
        = (-1)^{E(p, e1, e2, g)} phi(D_{l+1+k}(b_1..b_l, m, a_1..a_k))

where p, e1, e2, g are the parities of |phi|, alpha(a_1..a_k),
alpha(b_1..b_l) and alpha(m).  The exponent E must be some F2 polynomial
in those four parities.  Rather than trust a hand derivation, this
script enumerates all 2^11 polynomials spanned by the squarefree
monomials of degree <= 2 and keeps the ones that satisfy, at the same
time:

  (1) the dual coderivation squares to zero, on structures that between
      them exercise every parity pattern: the dual numbers (ungraded),
      the exterior line (generator in degree 1), a three-dimensional dga
      with a nonzero differential, exterior on two generators (even
      pairing degree), truncated polynomials (nontrivial products), and
      structures with arity-3 components -- including one whose dual has
      nonzero two-step composites through a component with odd argument
      blocks on both sides, which is what pins the e1*e2 monomial;
  (2) suspending a strict dual-valued cochain commutes with the
      differentials (dual numbers and truncated polynomials);
  (3) the pairing transport F_{0,0} = <.,.> is a map of bimodules for
      the dual numbers, the exterior line, and exterior on two
      generators.

The survivor is unique:

    E = p + e1 + e2 + p*e1 + e1*e2 + e1*g

frozen as bvhochschild.ainfty.dual_sign_exponent.

Run:  python3 tools/solve_dual_sign.py
"""

import itertools
import sys
import time

sys.path.insert(0, "src")

from bvhochschild.algebra import Algebra, dual_numbers, exterior_line
from bvhochschild.scalars import QQ
from bvhochschild.hochschild import HochschildComplex, coboundary, tuples
from bvhochschild.ainfty import (AinftyAlgebra, AinftyBimodule,
                                 InftyInnerProduct, delta, suspend_strict)

MONOMIALS = [(), ("p",), ("e1",), ("e2",), ("g",),
             ("p", "e1"), ("p", "e2"), ("p", "g"),
             ("e1", "e2"), ("e1", "g"), ("e2", "g")]


def make_exponent(mask):
    active = [MONOMIALS[b] for b in range(len(MONOMIALS)) if mask >> b & 1]

    def exponent(p, e1, e2, g):
        vals = {"p": p, "e1": e1, "e2": e2, "g": g}
        total = 0
        for mono in active:
            term = 1
            for var in mono:
                term *= vals[var]
            total += term
        return total

    return exponent


def describe(mask):
    if mask == 0:
        return "0"
    parts = []
    for b in range(len(MONOMIALS)):
        if mask >> b & 1:
            parts.append("*".join(MONOMIALS[b]) or "1")
    return " + ".join(parts)


def dga3():
    Z, O = QQ.zero, QQ.one
    d = 3
    mult = [[[Z] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        mult[0][i][i] = O
        mult[i][0][i] = O
    mult[0][0] = [O, Z, Z]
    A = Algebra(QQ, ["1", "x", "y"], mult, [O, Z, Z],
                degrees=[0, 0, 1], label="dga3")
    diff = [[Z, Z, Z], [Z, Z, O], [Z, Z, Z]]
    return AinftyAlgebra.from_dga(A, diff)


def poly3():
    """k[x]/(x^3), ungraded, with the Frobenius pairing <x^i, x^j> =
    [i + j == 2].  Unlike the dual numbers, x*x is nonzero, so dual
    components with arguments on both sides show up."""
    Z, O = QQ.zero, QQ.one
    d = 3
    mult = [[[Z] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            if i + j < d:
                mult[i][j][i + j] = O
    pairing = [[Z, Z, O], [Z, O, Z], [O, Z, Z]]
    A = Algebra(QQ, ["1", "x", "x2"], mult, [O, Z, Z],
                pairing=pairing, label="POLY3")
    rep = A.validate()
    assert rep.ok, rep.first_failure()
    return AinftyAlgebra.from_algebra(A)


def pure_d3(deg_v):
    """A two-dimensional structure whose only component is
    D_3(v, v, v) = u (and D_3 vanishes whenever u appears).  All the
    square-composites then vanish on the nose, so this is square-zero,
    and it is the smallest way to get dual components with arguments on
    both sides of the functional at once.  deg_v picks the parity of
    alpha(v); deg_u is forced by homogeneity."""
    Z, O = QQ.zero, QQ.one
    alpha_v = deg_v - 1
    deg_u = 3 * alpha_v + 1 + 1
    D3 = {(1, 1, 1): [O, Z]}    # basis order: u = 0, v = 1
    return AinftyAlgebra(QQ, [deg_u, deg_v], 4, {3: D3}, exact=True,
                         label="pureD3(%d)" % deg_v)


def interacting_d23():
    """Four-dimensional structure (alphas 0,1,2,3) with nonzero D_2 and a
    D_3 entry carrying odd-parity arguments on both outside positions:
    the dual then has components with both blocks odd at once, plus real
    composites, which is what finally separates exponents differing by
    the e1*e2 monomial."""
    Z, O = QQ.zero, QQ.one
    D2 = {(0, 1): [Z, Z, O, Z], (1, 0): [Z, Z, O, Z],
          (1, 1): [Z, Z, Z, O]}
    D3 = {(1, 1, 0): [Z, Z, Z, O], (1, 0, 1): [Z, Z, Z, O],
          (0, 1, 1): [Z, Z, Z, O]}
    alg = AinftyAlgebra(QQ, [1, 2, 3, 4], 4, {2: D2, 3: D3}, exact=True,
                        label="interD23")
    rep = alg.square_zero_report(7)
    assert rep.ok, rep.first_failure()
    assert alg.degree_report().ok
    return alg


def chaining_d23():
    """Five-dimensional structure (alphas 0..4) with D_2 and D_3 entries
    arranged so that outputs of some components recur as arguments of
    others: the dual coderivation then has genuinely nonzero two-step
    composites through a both-blocks-odd component, which no smaller
    example here manages.  The D_3 coefficients were found with exact
    linear algebra: with D_2 fixed, the arity-4 relations are linear in
    D_3, and a point of that kernel also satisfying the quadratic
    arity-5 relations was picked with D_3(u1, u0, u1) nonzero."""
    Z, O = QQ.zero, QQ.one
    M = QQ.neg(O)

    def v(idx, c=O):
        out = [Z] * 5
        out[idx] = c
        return out

    D2 = {(0, 1): v(2), (1, 0): v(2), (1, 1): v(3),
          (0, 3): v(4), (3, 0): v(4, M), (1, 2): v(4, M), (2, 1): v(4, M)}
    D3 = {(0, 0, 1): v(2), (0, 1, 0): v(2), (0, 0, 3): v(4),
          (0, 1, 2): v(4, M), (0, 3, 0): v(4, M), (1, 0, 1): v(3),
          (2, 0, 1): v(4, M)}
    alg = AinftyAlgebra(QQ, [1, 2, 3, 4, 5], 4, {2: D2, 3: D3}, exact=True,
                        label="chainD23")
    rep = alg.square_zero_report(7)
    assert rep.ok, ("chaining_d23 is not square-zero", rep.first_failure())
    assert alg.degree_report().ok
    return alg


def exterior_two():
    """Exterior algebra on two degree-1 generators, with the top-form
    pairing (total degree 2, the even-P case)."""
    Z, O = QQ.zero, QQ.one
    M = QQ.neg(O)
    d = 4   # basis 1, x, y, xy
    mult = [[[Z] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        mult[0][i][i] = O
        mult[i][0][i] = O
    mult[0][0] = [O, Z, Z, Z]
    mult[1][2][3] = O          # x * y = xy
    mult[2][1][3] = M          # y * x = -xy
    pairing = [[Z, Z, Z, O],
               [Z, Z, O, Z],
               [Z, M, Z, Z],
               [O, Z, Z, Z]]
    A = Algebra(QQ, ["1", "x", "y", "xy"], mult, [O, Z, Z, Z],
                degrees=[0, 1, 1, 2], pairing=pairing, label="EXT2")
    rep = A.validate()
    assert rep.ok, rep.first_failure()
    return AinftyAlgebra.from_algebra(A)


def passes_square_zero(exponent, algs, total_max):
    for alg in algs:
        du = AinftyBimodule.dual(alg, sign_exponent=exponent)
        if not du.square_zero_report(total_max).ok:
            return False
    return True


def passes_dictionary(exponent, alg, n_max):
    A = alg.source
    du = AinftyBimodule.dual(alg, sign_exponent=exponent)
    HC = HochschildComplex(A, dual=True)
    for n in range(0, n_max + 1):
        for t in tuples(A.dim, n):
            for out in range(A.dim):
                phi = HC.elementary(t, out)
                if delta(suspend_strict(phi, du)) != suspend_strict(
                        coboundary(phi), du):
                    return False
    return True


def passes_bimodule_map(exponent, algs, total_max):
    for alg in algs:
        du = AinftyBimodule.dual(alg, sign_exponent=exponent)
        F = InftyInnerProduct.from_pairing(alg, dual_module=du)
        if not F.bimodule_map_report(total_max).ok:
            return False
    return True


def main():
    t0 = time.time()
    oo_dual = AinftyAlgebra.from_algebra(dual_numbers(QQ))
    oo_ext = AinftyAlgebra.from_algebra(exterior_line(QQ))
    oo_dga = dga3()
    oo_ext2 = exterior_two()

    survivors = []
    for mask in range(1 << len(MONOMIALS)):
        exponent = make_exponent(mask)
        if not passes_square_zero(exponent, [oo_dual], 3):
            continue
        if not passes_square_zero(exponent, [oo_ext, oo_dga], 4):
            continue
        survivors.append(mask)
    print("after square-zero: %d candidates" % len(survivors))

    survivors = [m for m in survivors
                 if passes_square_zero(make_exponent(m), [oo_dga], 5)
                 and passes_square_zero(make_exponent(m), [oo_ext2], 4)]
    print("after deeper square-zero: %d candidates" % len(survivors))
    for mask in survivors:
        print("   ", describe(mask))

    survivors = [m for m in survivors
                 if passes_dictionary(make_exponent(m), oo_dual, 2)]
    print("after strict dictionary: %d candidates" % len(survivors))

    survivors = [m for m in survivors
                 if passes_bimodule_map(make_exponent(m),
                                        [oo_dual, oo_ext], 4)]
    print("after bimodule map (ungraded + odd pairing): %d candidates"
          % len(survivors))
    for mask in survivors:
        print("   ", describe(mask))

    survivors = [m for m in survivors
                 if passes_bimodule_map(make_exponent(m), [oo_ext2], 4)]
    print("after bimodule map (even pairing): %d candidates"
          % len(survivors))
    for mask in survivors:
        print("    mask=%d:  E = %s" % (mask, describe(mask)))

    oo_poly = poly3()
    survivors = [m for m in survivors
                 if passes_square_zero(make_exponent(m), [oo_poly], 4)
                 and passes_dictionary(make_exponent(m), oo_poly, 3)
                 and passes_bimodule_map(make_exponent(m), [oo_poly], 5)]
    print("after truncated-polynomial battery: %d candidates"
          % len(survivors))
    for mask in survivors:
        print("    mask=%d:  E = %s" % (mask, describe(mask)))

    d3s = [pure_d3(1), pure_d3(2), interacting_d23(), chaining_d23()]
    survivors = [m for m in survivors
                 if passes_square_zero(make_exponent(m), d3s, 6)]
    print("after arity-3 structures: %d candidates" % len(survivors))
    for mask in survivors:
        print("    mask=%d:  E = %s" % (mask, describe(mask)))
    print("%.1fs" % (time.time() - t0))


if __name__ == "__main__":
    main()
