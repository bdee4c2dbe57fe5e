"""A hauptmodul at level 14 from one Siegel orbit, and its j-map."""
from fractions import Fraction as F

from entanglement_atlas.congruence import modular_invariants
from entanglement_atlas.gl2 import ResidueMatrix, generate_group
from entanglement_atlas.siegel import build_orbits, divisor_of_orbit_power, find_relation, orbit_product

G = generate_group([ResidueMatrix.of(14, m) for m in [(10, 7, 5, 11), (2, 7, 3, 3), (5, 7, 9, 12)]], 14)
inv = modular_invariants(G)
print("genus", inv.genus, "index", inv.index)
print("cusps", [c.label for c in inv.cusp_data], "widths", [c.width for c in inv.cusp_data])

# %% orbits of the SL2 part on the fundamental set
orbits = build_orbits(G.sl2_part(), 14)
print(len(orbits), "orbits")
i = orbits.index_of((F(3, 14), 0))
print("orbit of (3/14, 0):", [(str(a), str(b)) for a, b in orbits.pairs(i)])
print("divisor of g^(168):", divisor_of_orbit_power(orbits, i, inv.cusp_data))

# %% the orbit product, normalised; it has no constant term, so shift by one
g, zeta = orbit_product(orbits, i, 14).normalized()
h = g - 1
print("root of unity", zeta)
for e, c in sorted(h.terms().items())[:10]:
    print(f"  q^({e}): {c.rational()}")

# %% j as a rational function of h, degrees (index, index - width at infinity)
rel = find_relation(h, 48, 34)
print("j =", rel.f)
