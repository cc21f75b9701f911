"""Tour of the pointwise criteria and their grid reports.

Each sufficient condition asks that a functional of f (built through a
companion map Q) stays inside a region for every z in the unit disk: a
half-plane for the positivity conditions, the disk family U(k) for the
derivative conditions, a radius bound for the Becker-type expression.
This script walks the catalog through all of them.
"""

from qcx import (
    CayleyMap,
    CompanionMap,
    CriterionParams,
    DiskGrid,
    IdentityMap,
    KoebeMap,
    PolynomialMap,
    evaluate_criterion,
)

grid = DiskGrid(48, 96)


def show(title, report):
    print(f"{title:46s} passed={str(report.passed):5s} "
          f"sup={report.sup_value:+.6f}  margin={report.margin:+.6f}  "
          f"worst={report.worst_point:.4f}")
    if report.smallest_bound is not None:
        print(f"{'':46s} smallest admissible bound {report.smallest_bound:.6f}")
    if report.concluded_dilatation is not None:
        print(f"{'':46s} concluded extension dilatation "
              f"{report.concluded_dilatation:.6f}")


print("= positivity (phi-like) =")
ident = CompanionMap.identity()
show("identity, Phi = w", evaluate_criterion(
    "phi_like", IdentityMap(), ident, CriterionParams(), grid))
show("koebe, Phi = w (starlike)", evaluate_criterion(
    "phi_like", KoebeMap(), ident, CriterionParams(), grid))

print()
print("= Becker-type radius bound =")
show("identity, c = 0.2, bound 0.2", evaluate_criterion(
    "gen_becker", IdentityMap(), ident,
    CriterionParams(k=0.5, k_prime=0.2, c=0.2 + 0j), grid))
show("koebe, bound 0.9 (sup tends to 6)", evaluate_criterion(
    "gen_becker", KoebeMap(), ident,
    CriterionParams(k=0.9, k_prime=0.9), grid))

# the half-plane map against the pole companion at -1: exact cancellation
show("cayley against pole companion at -1", evaluate_criterion(
    "moebius_becker", CayleyMap(), None,
    CriterionParams(k=0.1, c2=-1 + 0j), grid))

print()
print("= derivative conditions in U(k') =")
show("f = z + z^2/4, Q = id, bound 0.34", evaluate_criterion(
    "nw", PolynomialMap([1, 0.25]), ident,
    CriterionParams(k=0.5, k_prime=0.34), grid))
show("f = z + 0.95 z^2 (leaves U(0.5))", evaluate_criterion(
    "nw", PolynomialMap([1, 0.95]), ident,
    CriterionParams(k=0.5, k_prime=0.5), grid))
show("Moebius derivative form, pole -5", evaluate_criterion(
    "moebius_nw", PolynomialMap([1, 0.2]), None,
    CriterionParams(k=0.6, gamma=0.2 + 0j, delta=1 + 0j), grid))

print()
print("= Bazilevic-type positivity =")
from qcx import ConstMap  # noqa: E402

show("f = p = koebe, s = 1", evaluate_criterion(
    "bazilevic", KoebeMap(), ConstMap(1.0),
    CriterionParams(s=1 + 0j, p=KoebeMap()), grid))
