"""Exact chain-level calculus on Hochschild cochains of finite-dimensional
unital algebras with a Frobenius pairing.

Layers:

* ``scalars``    -- exact fields (Q, F_p) and exact dense linear algebra
* ``algebra``    -- algebras, pairings, bimodules, built-in fixtures
* ``hochschild`` -- the strict cochain complex: coboundary, cup, insertion
                    products, bracket, the cyclic Delta operator, homotopies
* ``cohomology`` -- cocycle/coboundary linear algebra and induced class
                    operations
* ``ainfty``     -- coderivation-style higher structures, dual bimodules,
                    inner products, the primed operations
* ``symbols``    -- planar-tree symbol calculus and its differential
* ``cli``        -- batch front end
"""

__version__ = "0.1.0"
