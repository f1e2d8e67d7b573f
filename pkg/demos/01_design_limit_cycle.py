# Designing a periodic gait and checking why it cannot stand on its own.
#
# A walker that keeps its COM at constant height h reduces to
# xddot = (g/h) x between support exchanges. Sampling at step boundaries
# gives a linear step-to-step map; a desired (step length, step time)
# pair fixes a unique periodic orbit through that map.

import numpy as np

from lipgait import (
    WalkerParams,
    apply_step,
    build_step_matrices,
    design_cycle,
    flow,
    is_controllable,
    open_loop_eigenvalues,
    orbital_energy,
)

params = WalkerParams(h=1.0, g=9.8, m=50.0, L_max=0.75)
print("walker: h=1 m, g=9.8 m/s^2, m=50 kg, L_max=0.75 m")
print(f"natural frequency omega = {params.omega:.4f} 1/s")

# -- the gait cycle ----------------------------------------------------
cycle = design_cycle(params, L_c=0.5, T_c=0.4)
print("\ncycle for L_c=0.5 m, T_c=0.4 s:")
print(f"  step-start state x_c = ({cycle.x_c.x:.4f} m, {cycle.x_c.xdot:.4f} m/s)")

# the fixed point really is fixed: one full step maps it to itself
M = build_step_matrices(params, cycle.T_c)
next_start = apply_step(M, cycle.x_c, cycle.L_c)
print(f"  after one step: ({next_start.x:.10f}, {next_start.xdot:.10f})")

# and the stance phase is symmetric about mid-stance
end = flow(params, cycle.x_c, cycle.T_c)
print(f"  stance ends at ({end.x:.4f} m, {end.xdot:.4f} m/s): mirror image, same speed")

# orbital energy is the conserved quantity of the stance dynamics
E = orbital_energy(params, cycle.x_c)
print(f"  orbital energy = {E:.5f} m^2/s^2 (> 0, so the COM crosses the stance foot)")
for t in (0.1, 0.2, 0.3):
    drift = orbital_energy(params, flow(params, cycle.x_c, t)) - E
    print(f"    drift after {t:.1f} s of stance: {drift:+.2e}")

# -- why feedback is necessary -----------------------------------------
lam_hi, lam_lo = open_loop_eigenvalues(M)
print(f"\nstep-map eigenvalues: {lam_hi:.4f} and {lam_lo:.4f}")
print("one of them exceeds 1, so any deviation from the cycle grows by ~3.5x per step")

verdict = is_controllable(M)
print(f"controllability certificate det[B, AB] = {verdict.determinant:.4f} (nonzero:")
print("step length adjustments can steer both position and velocity error)")

# growth in action: nudge the start state by 1 mm and iterate the map
s = type(cycle.x_c)(cycle.x_c.x + 1e-3, cycle.x_c.xdot)
print("\nerror norm after each uncontrolled step, starting 1 mm off the cycle:")
for i in range(1, 7):
    s = apply_step(M, s, cycle.L_c)
    err = np.hypot(s.x - cycle.x_c.x, s.xdot - cycle.x_c.xdot)
    print(f"  step {i}: {err:.5f}")
