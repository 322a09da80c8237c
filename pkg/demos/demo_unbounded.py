"""Walkthrough: points of unbounded height inside the codimension-2 locus.

Take V = C x E inside E^3 over y^2 + y = x^3 - x, where C is the curve
x(Q) = x(P) + 1.  V fails surjection stability (project onto the base
curve), and the failure is constructive: for every level N we produce a
point of V killed by a rank-2 morphism whose height certifiably exceeds
N * ||z_k||.  No open subset of V has bounded height.
"""

from ellsplit.corpus import load_entry
from ellsplit.unbounded import find_base_point, generate_unbounded, verify_certificate

fib = load_entry("CxE").fibration
V = fib.variety
print(f"variety: {V.name} in E^{V.g}, dim {V.dimension}; base dim {fib.d1}")

base = find_base_point(fib, bound=2)
print(f"\nbase point x1 = {base.x1}")
print(f"annihilator phi1 = {[[e.a for e in r] for r in base.phi1.entries]}")
print(f"largest coordinate: k = {base.k}, ||z_k|| = {base.zk_norm.value:.6f}")

levels = [2, 4, 8, 16, 32, 64, 128]
certs = generate_unbounded(fib, base, levels, count=1, precision=1e-8)

print(f"\n{'N':>5} {'coeff':>6} {'seminorm':>12} {'bound N*||z_k||':>16} verified")
for c in certs:
    ok = verify_certificate(c, V) == []
    print(
        f"{c.level:5.0f} {c.coefficients[0]:6d} {c.measured.value:12.6f} "
        f"{c.bound_value.value:16.6f} {ok}"
    )

c = certs[-1]
digits = len(str(c.point[2].x.numerator))
print(f"\nlast certificate: fiber coordinate is {2 * c.coefficients[0]}*P,")
print(f"  an exact rational point whose x-numerator has {digits} digits")
print(f"assembled block morphism: {[[e.a for e in r] for r in c.assembled.entries]}")
print("its image at the point is exactly (O, O), rank", c.rank_assembled)
