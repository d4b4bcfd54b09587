"""Wiener-Hopf factorization and invertibility verdicts.

Scalar symbols split across the circle by their roots.  For a GSIO the
operator is equivalent after extension to a block Toeplitz operator with
the quotient symbol B^-1 A, whose partial indices decide invertibility and
give the kernel and cokernel dimensions exactly.
"""

import numpy as np

from gsio import (
    MatrixSymbol,
    RationalSymbol,
    extension_blocks,
    fredholm_verdict,
    gsio_symbol,
    monomial,
    wh_matrix2,
    wh_scalar,
    z,
    zbar,
)

# -- scalar factorization ------------------------------------------------------
s = RationalSymbol((z - 0.5) * (z - 2.0), z + 4.0)
fac = wh_scalar(s)
print("s = (z - 1/2)(z - 2)/(z + 4):")
print("  partial index:", fac.kappa[0])
print("  minus factor: ", fac.f_minus)
print("  plus factor:  ", fac.f_plus)
print("  reconstruction residual:", f"{fac.reconstruction_residual:.2e}")

# -- matrix factorization -------------------------------------------------------
f = MatrixSymbol([[2 - z, 0.0], [1.0, 2 - zbar]])
fac = wh_matrix2(f)
print("\ntriangular matrix symbol [[2-z, 0], [1, 2-conj(z)]]:")
print("  partial indices:", fac.kappa)
print("  residual:", f"{fac.reconstruction_residual:.2e}")

# -- extension blocks -----------------------------------------------------------
h = gsio_symbol(z, 0, 0, 1)
blocks = extension_blocks(h)
print("\nextension quotient for f = z, psi = 1:")
for i in range(2):
    print("  ", [repr(blocks.binv_a.entries[i][j]) for j in range(2)])
print("  det residual vs -f/psi:", f"{blocks.det_residual:.2e}")

# -- verdicts -------------------------------------------------------------------
print("\nverdicts:")
for name, h in (
    ("identity            ", gsio_symbol(1, 0, 0, 1)),
    ("f = z, psi = 1      ", gsio_symbol(z, 0, 0, 1)),
    ("f = psi = z         ", gsio_symbol(z, 0, 0, z)),
    ("f = z^2, psi = z^3  ", gsio_symbol(monomial(2), 0, 0, monomial(3))),
    ("f = z - 1 (singular)", gsio_symbol(z - 1, 0, 0, 1)),
):
    print(f"  {name}: {fredholm_verdict(h).describe()}")
