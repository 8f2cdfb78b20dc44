"""
A star-shaped domain with a C^4 map
====================================

The star map is the identity inside the ball of radius 1/2 and blends
out to the boundary r = S(direction) with a quintic, so it is only four
times differentiable.  Convergence is slower than on the ellipsoid and
only three to four digits are reliable, so the pointwise residual is
left out.
"""

from balleig import convergence_report, get_map

report = convergence_report(
    get_map("star"),
    bc="neumann",
    degrees=range(1, 15),
    ranks=[1, 2],
    reference_degree=15,
    residuals=False,
)

cols = report.columns()
print("  ".join(f"{c:>9s}" for c in cols))
for row in report.rows:
    print("  ".join(f"{row[c]:9d}" if c in ("n", "N_n") else f"{row[c]:9.2e}" for c in cols))
report.write_csv("star_table.csv")
print("\nwrote star_table.csv")
