# From the trivial branch to nonconstant periodic solutions
#
# For the quartic double well the rescaled equation on a 2 pi period has
# bifurcation points at lambda = m^{2s}.  We trace the branch leaving the
# first one, fit the pitchfork law amplitude^2 ~ c (lambda - 1), and then
# undo the rescaling to realize solutions of the original equation with
# periods approaching the minimal-period bound from above.

from fracperiodic import (
    DoubleWell,
    FracOrder,
    classify_criticality,
    continue_branch,
    detect_bifurcation_points,
    verify_T0_bound,
)

frac = FracOrder(0.5)
well = DoubleWell.quartic()

points = detect_bifurcation_points(frac, well, 4)
print("bifurcation points on the trivial branch (expected m^{2s}):")
for m, lam in enumerate(points, start=1):
    print(f"  m = {m}:  lambda = {lam:.10f}")
print()

branch = continue_branch(frac, well, lambda_start=1.0, steps=25, ds_arc=0.05)
c, r2 = branch.pitchfork_fit()
print(f"branch from lambda = 1: {len(branch.points)} points, "
      f"direction {branch.direction}")
print(f"  normal-form sign check : {classify_criticality(frac, well, 1)}")
print(f"  amplitude^2 fit        : c = {c:.4f}, R^2 = {r2:.4f}")
for p in branch.points[::6]:
    print(f"  lambda = {p.lam:.4f}  amplitude = {p.amplitude:.4f}  "
          f"residual = {p.residual:.1e}")
print()

report = verify_T0_bound(frac, well, lambda_grid=[1.001, 1.01, 1.1, 1.5, 2.0])
print(f"minimal-period bound 2 pi (-F''(0))^(-1/2s) = {report.bound:.6f}")
print("periods realized by rescaled branch solutions:")
for e in report.entries:
    print(f"  lambda = {e.lam:5.3f}  T = {e.period:9.6f}  "
          f"amplitude = {e.amplitude:.4f}  residual = {e.residual_rescaled:.1e}")
print(f"closest approach to the bound: {report.min_period - report.bound:.2e}")
