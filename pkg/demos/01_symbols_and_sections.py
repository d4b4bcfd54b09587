"""Symbols and finite sections: the basic calculus.

Builds Laurent and rational symbols, inspects Fourier data and winding
numbers, assembles the block section of a generalized singular integral
operator, and validates the assembly against the independent grid oracle.
"""

import numpy as np

from gsio import (
    RationalSymbol,
    compare_action,
    fourier_coeffs,
    gsio_section,
    gsio_symbol,
    hankel_section,
    invert,
    monomial,
    random_symbol,
    toeplitz_section,
    winding_number,
    z,
    zbar,
)

# -- scalar symbols ---------------------------------------------------------
s = RationalSymbol(z - 0.5, z - 3.0)
print("s = (z - 1/2)/(z - 3)")
print("  value at 1:        ", s.eval(1.0))
print("  c(0), c(1):        ", fourier_coeffs(s, 0, 1).coeff_array(0, 1))
print("  winding number:    ", winding_number(s), "(one zero inside, pole outside)")

r = invert(2 - z)
print("1/(2 - z) expands geometrically:",
      np.round(fourier_coeffs(r, 0, 4).coeff_array(0, 4).real, 6))

# -- sections ----------------------------------------------------------------
print("\nToeplitz section of z + conj(z) at order 4 (tridiagonal):")
print(toeplitz_section(z + zbar, 4).data.real)

print("Hankel section of conj(z)^2 at order 3 (rank 2, antidiagonal):")
print(hankel_section(monomial(-2), 3).data.real)

# the bilateral-shift symbol: every entry z
h = gsio_symbol(z, z, z, z)
print("\nGSIO section of the bilateral shift at order 2")
print("(mode order z^0, z^1, z^-1, z^-2):")
print(gsio_section(h, 2).data.real)

# -- oracle cross-check -------------------------------------------------------
h = random_symbol(3, seed=7)
residual = compare_action(h, n=48, trials=10, seed=1)
print("\nrandom degree-3 symbol, section action vs grid oracle:")
print(f"  max relative residual over 10 trials: {residual:.3e}")
