# What the same shove does when nobody adjusts the steps.
#
# With step lengths frozen at L_c, the error obeys e_{i+1} = A e_i, so
# after a push the error norm grows geometrically at the unstable
# eigenvalue e^(omega T_c) = 3.498 per step. The ratio of consecutive
# error norms converges to that eigenvalue within a few steps, because
# the stable component (eigenvalue 0.286) dies out quickly.

from lipgait import (
    Disturbance,
    WalkerParams,
    build_step_matrices,
    design_cycle,
    open_loop_eigenvalues,
    simulate,
    step_sequence_errors,
)

params = WalkerParams(h=1.0, g=9.8, m=50.0, L_max=0.75)
cycle = design_cycle(params, L_c=0.5, T_c=0.4)
lam_hi, lam_lo = open_loop_eigenvalues(build_step_matrices(params, cycle.T_c))
print(f"predicted growth rate: e^(omega T_c) = {lam_hi:.4f} per step")

push = Disturbance(step_index=3, phase=0.5, F=-20.0, duration=0.02)
trace = simulate(params, cycle, None, disturbances=[push], n_steps=14)
errs = step_sequence_errors(trace)

print("\nstep  |e_i|        ratio to previous")
for i in range(3, 14):
    ratio = errs[i] / errs[i - 1] if errs[i - 1] > 0 else float("nan")
    note = ""
    if i >= 4 and abs(ratio - lam_hi) / lam_hi < 0.02:
        note = "  (within 2% of the eigenvalue)"
    print(f"{i + 1:4d}  {errs[i]:.4e}   {ratio:8.4f}{note}")

print(
    f"\nby step 14 the COM is {errs[13]:.1f} m (in mixed units) off the cycle: "
    "the gait has fallen apart"
)
print(f"growth check: {lam_hi:.4f}^10 = {lam_hi**10:.3e}, "
      f"|e_14|/|e_4| = {errs[13] / errs[3]:.3e}")
