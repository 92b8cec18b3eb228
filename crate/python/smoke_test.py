"""Quick check that the extension imports and agrees with a few hand values."""

import math

import dunkl_kg as dk

p = dk.WignerParams(0.5, 0.5, 0.5)
osc = dk.OscillatorConfig(m=0.5, omega=1.0)

# ground state carries no oscillator quanta, so E = m
e0 = dk.total_energy_cartesian([0, 0, 0], "+++", dk.WignerParams(), dk.OscillatorConfig())
assert e0 == 1.0, e0

assert math.isclose(dk.energy_1d(1, -1, 0.5, osc), 2 * 0.5 * (2 + 2), rel_tol=1e-14)

cart = dk.cartesian_levels(p, osc, 12.25)
sph = dk.spherical_levels(p, osc, 12.25)
assert [d for _, d in cart] == [d for _, d in sph], (cart, sph)

e_sph = dk.spectrum_spherical(1, 0, 0, "+++", p, osc)
e_cart = dk.total_energy_cartesian([1, 0, 0], "+++", p, osc)
assert math.isclose(e_sph, e_cart, rel_tol=1e-14)

cc = dk.CoulombConfig(m=1.0, g=0.1)
e = dk.coulomb_energy(0, 0, 0, "+++", dk.WignerParams(), cc)
rest, nonrel, fine = dk.fine_structure(0, 0, 0, "+++", dk.WignerParams(), cc)
# truncation remainder is O(g^6)
assert abs(e - (rest + nonrel + fine)) < 10 * cc.g**6

try:
    dk.coulomb_energy(0, 0, 0, "+++", dk.WignerParams(), dk.CoulombConfig(g=0.6))
except ValueError:
    pass
else:
    raise AssertionError("bound violation not rejected")

prof = dk.density_profile(0, 1, 0.5, osc, [-1.0, 0.0, 1.0])
assert prof["density_bare"][0] == prof["density_bare"][2]

reports = dk.verify_spectrum_1d(0.5, 1, osc, 2)
assert all(r["pass"] for r in reports), reports
shifted = dk.verify_spectrum_1d(0.5, 1, osc, 2, energy_shift=1e-2)
assert not any(r["pass"] for r in shifted)

print(f"dunkl_kg {dk.__version__}: ok ({len(cart)} levels, E0 = {e0})")
