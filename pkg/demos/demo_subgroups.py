"""Walkthrough: algebraic-subgroup membership and torsion-fiber streams.

The codimension-r locus S_r collects the points of a variety lying in an
algebraic subgroup (translated by torsion) of codimension at least r.  The
search enumerates one canonical matrix per subgroup class up to a norm
bound and certifies every hit exactly.
"""

from ellsplit.corpus import load_entry, torsion_pool
from ellsplit.curves import curve_37a1, curve_j0, power_point
from ellsplit.subgroups import TORSION, search_sr
from ellsplit.unbounded import dense_torsion_preimage

E = curve_37a1()
P = E.point(0, 0)
C = load_entry("C").variety

x1 = power_point([P, 2 * P])
print(f"sample on C: {x1}")
records = search_sr([x1], r=1, bound=2, translates=TORSION, variety=C)
for rec in records:
    print(
        "  certificate:",
        [[e.a for e in row] for row in rec.certificate.phi.entries],
        "| re-verified:",
        rec.reverify(),
    )

# a full-rank image of a non-torsion tuple can never be torsion
print("\nrank-2 search on the same sample:", search_sr([x1], 2, 2, TORSION))

# free-fiber families stream points lying over torsion tuples of a dominant
# projection; over the j = 0 curve the rational torsion is Z/6
diag = load_entry("diag-x-E").variety
pool = torsion_pool(curve_j0())
print(f"\ntorsion pool of y^2 = x^3 + 1: {pool}")


def solver(assign):
    T, S = assign
    return [power_point([T, T, S])]


stream = list(dense_torsion_preimage(diag, (1, 3), solver, pool))
print(f"diagonal x E: {len(stream)} certified points over torsion pairs; first three:")
for pt, rec in stream[:3]:
    print("  ", pt)
