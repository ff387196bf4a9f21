# An auxiliary-polynomial certificate for |R n (R + mu)|
#
# For a subgroup of order 300 in Z_6301^* we solve for a polynomial Psi that
# vanishes to order D on the moved intersection sets, write it out as JSON
# and check it again from scratch.

import json

from shiftlab import build_certificate, certificate_dumps, make_field, subgroup_of_order, verify_certificate
from shiftlab.bounds_lab import shifted_intersection
from shiftlab.errors import CertificateError

F = make_field(6301)
R = subgroup_of_order(F, 300)
mu = [7]
lambdas = R.coset_reps()[:2]

cert = build_certificate(R, mu, lambdas)
print("B =", cert.B, "D =", cert.D, "deg Psi =", cert.psi_degree)
print("unknowns:", cert.diagnostics["unknowns"], "equations:", cert.diagnostics["equations"])

exact = sum(len(shifted_intersection(R, mu, lam)) for lam in lambdas)
print("claimed bound", cert.claimed_bound, ">= exact", exact)

doc = json.loads(certificate_dumps(cert))
print(verify_certificate(doc))

# Flip one coefficient and the verifier notices.
doc["coeff_vector"][0][-1] = doc["coeff_vector"][0][-1] % 6300 + 1
try:
    verify_certificate(doc)
except CertificateError as exc:
    print("rejected:", exc)
