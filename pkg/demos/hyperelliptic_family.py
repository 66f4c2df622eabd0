"""Liftability of hyperelliptic graphs with k bridges at a centre of genus g."""
from tropilift.fixtures import hyper_family
from tropilift.gonality import gonality_witness
from tropilift.hyperelliptic import is_minimal, liftable_hyperelliptic

print(" k  g  liftable  2g >= k-2")
for k in range(1, 6):
    for g in range(3):
        m = hyper_family(k, g)
        if not is_minimal(m):
            continue
        print(f"{k:2d} {g:2d}  {str(liftable_hyperelliptic(m)):8s}  {2 * g >= k - 2}")

# the degree-2 quotient exists but has r = -1 at the centre, so it is not an
# effective witness; the search reports the next degree it can certify
d, phi = gonality_witness(hyper_family(3, 0))
print("gonality bound for k=3, g=0:", d, "via a target tree with",
      len(phi.target.vertices), "vertices")
