"""Lift counts for the Tate 2-isogeny and Jacobian maps for the banana morphism."""
from tropilift.fixtures import ribet
from tropilift.gluing import count_lifts, tate_gluing_data
from tropilift.jacobian import JacobianMap

phi, E0, rho = tate_gluing_data()
res = count_lifts(phi, E0, rho)
print(f"Tate: {res.gluing_data} gluing data, {res.classes} lift classes, "
      f"{res.automorphisms} automorphisms each")

jm = JacobianMap(ribet())
print(f"banana map: |Jac source| = {jm.src.order}, |Jac target| = {jm.tgt.order}")
print("pushforward surjective:", jm.is_surjective_pushforward())
print("|coker push| =", jm.coker_pushforward_order(), " |ker pull| =", len(jm.kernel_pullback()))
print("pairing adjoint:", jm.adjointness_check())
