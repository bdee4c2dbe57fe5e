"""Square classes, quadratic twists and the genus-1 curve shared by G_s and G_n."""
from entanglement_atlas.catalog import entry_by_id, load_catalog
from entanglement_atlas.poly import Poly, RationalFunction as R
from entanglement_atlas.weierstrass import (
    WeierstrassModel,
    q_isomorphic,
    quadratic_twist,
    quartic_to_weierstrass,
    square_class,
)

# %% curves with a point of order 5, twisted by the square class of their discriminant
E_t = WeierstrassModel.short(R.parse("-27t^4 + 324t^3 - 378t^2 - 324t - 27"),
                             R.parse("54t^6 - 972t^5 + 4050t^4 + 4050t^2 + 972t + 54"))
d = square_class(E_t.discriminant)
print("Delta(E_t) mod squares:", d.constant, "*", d.poly)
tw = quadratic_twist(E_t, R(d.poly) * d.constant)
print("a4 =", tw.a4)
print("a6 =", tw.a6)
E1 = tw.evaluate(10)
print("t = 10: Delta mod squares", square_class(E1.discriminant).constant)

# %% both genus-1 entries land on one curve over Q
E = WeierstrassModel.of(0, -4, 0, 3, 1)
cat = load_catalog()
for eid in ("G_s", "G_n"):
    print(eid, "Q-isomorphic to y^2 = x^3 - 4x^2 + 3x + 1:", q_isomorphic(entry_by_id(cat, eid).genus1_model(), E))
C = Poly.parse("-(t - 3)(t^3 - 7t^2 + 7t + 7)")
print("quartic C at (3, 0):", q_isomorphic(quartic_to_weierstrass(C, (3, 0)), E))
