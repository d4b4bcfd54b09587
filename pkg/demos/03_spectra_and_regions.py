"""Spectra: essential curves, pseudospectral probes, inclusion regions,
and the special-case identities.

Raw eigenvalues of truncations are misleading for non-normal operators, so
the essential spectrum is probed through smallest singular values, which
do converge.  The inclusion region bounds the full spectrum using the two
off-diagonal Hankel norms.
"""

import numpy as np

from gsio import (
    dense_spectrum,
    essential_spectrum_curve,
    foguel_hankel_section,
    fredholm_index,
    gsio_section,
    gsio_symbol,
    inclusion_region,
    monomial,
    smallest_singular,
    special_case_spectrum,
    z,
    zbar,
)

# -- pseudospectral probe: f = psi = z --------------------------------------
h = gsio_symbol(z, 0, 0, z)
sec = gsio_section(h, 256)
print("pure shift symbol: eigenvalues of the section all sit at 0,")
print("  max |eigenvalue| =", f"{np.max(np.abs(dense_spectrum(sec))):.2e}")
print("but the probe sees the essential circle:")
for lam in (1.0, 1j, 2.0):
    print(f"  sigma_min(S - {lam}) = {smallest_singular(sec, lam):.4f}")

# -- essential curves ---------------------------------------------------------
h = gsio_symbol(z + 2, 0, 0, z - 2)
pts = essential_spectrum_curve(h, 256)
print("\nf = z + 2, psi = z - 2: essential spectrum = two unit circles at +-2")
print("  radii around +2 and -2:",
      f"{np.mean(np.abs(pts[:256] - 2)):.3f},",
      f"{np.mean(np.abs(pts[256:] + 2)):.3f}")

# -- index and inclusion ------------------------------------------------------
h = gsio_symbol(monomial(2), z, z, monomial(3))
print("\nf = z^2, psi = z^3: Fredholm index =", fredholm_index(h))

h = gsio_symbol(1 + 1j, 0.5 * z, zbar, 1 + 1j)
region = inclusion_region(h, (8, 8))
print(f"\nconstant diagonal with Hankel perturbations: delta = {region.delta}")
print("  spectrum confined to the disk |lambda - (1+1j)| <= delta:")
for probe in (1 + 1j, 1.4 + 1j, 1.6 + 1j):
    print(f"    {probe}: member = {region.contains(probe)}")

# -- special cases -------------------------------------------------------------
h = gsio_symbol(0, z, zbar, 1)
vals = sorted({complex(v) for v in np.round(special_case_spectrum(h, 16), 9)},
              key=lambda v: v.real)
print("\npsi = 1 special case, rank-one Hankel product:", vals)

sec = foguel_hankel_section(z + zbar + monomial(3), 128)
print("Foguel-Hankel section spectral radius (disk bound):",
      f"{np.max(np.abs(dense_spectrum(sec))):.2e}")
