# Explicit-constant bounds against exact counts
#
# Sum of |R n (R + lambda mu)| over an invariant set Q, next to the bound
# 8 (|Q|^(1/3) + 1)^2 |R|; then the exact E_3 chain and the doubling ratios
# for every small subgroup of one prime.

from shiftlab import invariant_set, make_field, subgroup_of_order, theorem11_check, theorem55_report
from shiftlab.bounds_lab import fourier_max, garcia_voloch_check

F = make_field(5101)
R = subgroup_of_order(F, 100)
for m in (1, 3, 5):
    Q = invariant_set(R, R.coset_reps()[:m])
    rep = theorem11_check(R, Q, [1])
    print(m, rep.hypotheses, rep.lhs, round(rep.rhs), rep.verdict)

# The Garcia-Voloch bound for every admissible subgroup of Z_241^*.
reports = garcia_voloch_check(make_field(241))
print(len(reports), "checks,", sum(r.verdict == "PASS" for r in reports), "pass")
print("largest count^3 / (64 t^2):", max(r.lhs**3 / (64 * r.t**2) for r in reports))

F = make_field(4801)
for t in F.divisors():
    if t * t <= F.p:
        chain, _, minus, plus = theorem55_report(subgroup_of_order(F, t))
        print(t, chain.verdict, f"{minus.ratio:.3f} {plus.ratio:.3f}")

print("max nontrivial Fourier coefficient of R:", fourier_max(subgroup_of_order(F, 96)))
