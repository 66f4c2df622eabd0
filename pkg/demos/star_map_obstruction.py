"""A degree-4 map of stars that fails to lift, and how raising the genus fixes it."""
from tropilift.fixtures import star_map
from tropilift.lifting import genus_relaxed_lift, liftable_augmented

phi = star_map()
ok, reports = liftable_augmented(phi)
print("liftable:", ok)
for r in reports:
    if r.verdict != "liftable":
        print(f"  {r.vertex}: partitions {r.partitions}, Hurwitz number {r.hurwitz}")
print("smallest source genera that work:", genus_relaxed_lift(phi, g_max=3))
