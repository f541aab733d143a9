"""
Principal bundles over a triangulated circle
============================================

A bundle over a simplicial complex is recorded by one object per vertex and
one morphism per edge, subject to a cocycle condition on triangles.  Over a
circle there are no triangles, so every labelling is a bundle.  Bundles up
to concordance correspond to conjugacy classes of the holonomy.
"""

from hotype import (are_concordant, chain_complex, circle, cyclic_group, enumerate_bundles,
                    groupoid_from_group, holonomy, homology, symmetric_group, total_space,
                    validate_bundle)

K = circle(3)
loop = ["v0", "v1", "v2", "v0"]
z2 = groupoid_from_group(cyclic_group(2))

# The connected double cover and the trivial one
for labels in (("1", "0", "0"), ("0", "0", "0")):
    b = validate_bundle(K, z2, {v: "*" for v in K.vertices}, dict(zip(K.edges(), labels)))
    t = total_space(b)
    print("holonomy", holonomy(b, loop), "-> total space homology", homology(chain_complex(t.total), 1))

# Enumerate every bundle and group them by concordance
for name, table in (("Z/2", cyclic_group(2)), ("Z/3", cyclic_group(3)), ("S3", symmetric_group(3))):
    e = enumerate_bundles(K, groupoid_from_group(table))
    hols = [sorted({holonomy(e.bundles[i], loop) for i in cls}) for cls in e.classes]
    print(f"{name}: {len(e.bundles)} bundles in {e.class_count} classes, holonomies {hols}")

# Two transpositions are conjugate in S3, so their bundles are concordant
s3 = groupoid_from_group(symmetric_group(3))
edge_labels = lambda first: dict(zip(K.edges(), (first, "012", "012")))
b0 = validate_bundle(K, s3, {v: "*" for v in K.vertices}, edge_labels("102"))
b1 = validate_bundle(K, s3, {v: "*" for v in K.vertices}, edge_labels("210"))
cert = are_concordant(b0, b1)
print("concordance (01) ~ (02):", cert.beta1)
