"""Walkthrough: deciding splitness for the envelope surface.

The surface lives in the 4-torus and is cut out by

    z3 = 5 z1^4 (z4 - z2) + z1,      z2 = z1^5 + 1.

It is the union of (point, tangent-line) pairs over the plane quintic
z2 = z1^5 + 1, and famously is *not* a product of two curves - yet the
projection onto its first two coordinates collapses it onto the quintic,
so it fails the surjection-stability property that bounded-height results
hinge on.  This script reproduces that classification end to end.
"""

from ellsplit.corpus import load_entry
from ellsplit.structure import (
    build_split_witness,
    check_property_s,
    find_dominant_projection,
)

env = load_entry("envelope").variety
print(f"variety: {env.name}, ambient torus^{env.g}, dimension {env.dimension}")

report = check_property_s(env, n=0, bound=1)
print(f"\nverdict at bound 1: {report.verdict}")
print("witness matrix:", [[e.a for e in row] for row in report.witness.entries])
print("image dimension:", report.witness_report.image_dimension)
print("image ideal:", report.witness_report.render_generators())
print("deprived set empty:", report.deprived_set_empty)

# the same failure, phrased as a generic splitting: complete the witness to
# an isogeny of the ambient power squeezing the surface into a product with
# a too-small first factor
sw = build_split_witness(env, report)
print(f"\nsplit witness: W1 in a {sw.g1}-power with dim W1 = {sw.dim_w1}"
      f" < min(d, g1) = {min(env.dimension, sw.g1)}")

# a dominant pair of coordinates always exists; here the lex-first one is
# (1, 3): the quintic forbids (1, 2), but z3 moves freely over z1
print("\nlex-first dominant projection:", find_dominant_projection(env))

# contrast: a hypersurface whose equation has enough spread monomials to
# resist every small monomial collapse
hyp = load_entry("transverse-hypersurface").variety
rep2 = check_property_s(hyp, n=0, bound=2)
print(f"\n{hyp.name}: {rep2.verdict} after {rep2.candidates_checked} candidate classes")
