"""
Homology of classifying spaces
==============================

A finite group is a groupoid with one object.  Its nerve has one n-simplex
per string of n composable elements, and the homology of that nerve is the
group homology.  Cyclic groups show the familiar period-two pattern.
"""

from hotype import (classifying_homology, cyclic_group, groupoid_from_group, symmetric_group,
                    universal_total)

for m in (2, 3, 4, 5):
    report = classifying_homology(groupoid_from_group(cyclic_group(m)), k_max=4)
    print(f"B(Z/{m}):", report.homology, " simplices per level:", report.level_counts)

# S3 is not abelian; H_1 is its abelianization Z/2
s3 = groupoid_from_group(symmetric_group(3))
print("B(S3):  ", classifying_homology(s3, k_max=3).homology)

# The universal total object is built from the arrow groupoid.  Every arrow
# has exactly one morphism to each other arrow with the same target, so the
# nerve is acyclic: only H_0 survives, one copy of Z per object.
for name, g in (("Z/2", groupoid_from_group(cyclic_group(2))), ("S3", s3)):
    print(f"E({name}):", universal_total(g, k_max=2).report.homology)
