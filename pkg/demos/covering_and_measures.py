"""Covering numbers, the uniform measure and weak homogeneity on small spaces.

Run: python3 demos/covering_and_measures.py
"""
from unimetric import covering, measure
from unimetric.metric_core import cycle_space, grid_space

for name, space in [("6-cycle", cycle_space(6)), ("4x4 grid", grid_space(2, 4))]:
    print(f"== {name} ({space.n} points)")
    prof = covering.cover_profile(space)
    print("   r      N   M")
    for r, N, M in prof.entries:
        print(f"   {r:<6.3f} {N:<3d} {M}")

    mu, diag = measure.uniform_measure(space)
    print("uniform measure support size:", diag.support_sizes[-1])

    rep = measure.weak_homogeneity(space, measure=mu)
    print("weak homogeneity constant C_minus =", rep.C_minus,
          "| sup h_plus/h_minus =", rep.quasi_ratio)
    rows = measure.check_thm21(space, mu, rep.C_minus, mode="exact")
    print("h_minus(r) >= C_minus/N(r) at every breakpoint:", all(r[3] for r in rows))
    print()
