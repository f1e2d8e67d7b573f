# Recovering from a mid-step shove by changing where the next foot lands.
#
# The walker starts exactly on its gait cycle. Halfway through step 3 a
# horizontal force of -20 N acts on the COM for 20 ms. A deadbeat
# step-length controller (both closed-loop poles at zero) measures the
# step-start error and commands L = L_c - K e; the error is gone two
# controlled steps later.

import os

from lipgait import (
    Disturbance,
    WalkerParams,
    build_step_matrices,
    design_cycle,
    phase_portrait,
    pole_place,
    simulate,
)
from lipgait.figures import render_com_figure, render_phase_figure
from lipgait.output import read_csv_columns, write_steps_csv, write_text, write_trace_csv

params = WalkerParams(h=1.0, g=9.8, m=50.0, L_max=0.75)
cycle = design_cycle(params, L_c=0.5, T_c=0.4)
M = build_step_matrices(params, cycle.T_c)

gains = pole_place(M, 0.0, 0.0)
print(f"deadbeat gains: k1 = {gains.k1:.4f}, k2 = {gains.k2:.4f}")

push = Disturbance(step_index=3, phase=0.5, F=-20.0, duration=0.02)
trace = simulate(params, cycle, gains, disturbances=[push], n_steps=20)

print("\nstep  |e_i|        L commanded  L applied  clamped")
for rec in trace.steps[:10]:
    mark = " <- push lands here" if rec.disturbed else ""
    print(
        f"{rec.index:4d}  {rec.error_norm:.3e}  {rec.L_commanded:.5f}      "
        f"{rec.L_applied:.5f}    {str(rec.clamped):5s}{mark}"
    )
print("(steps 11-20 stay on the cycle)")

# the phase portrait closes again once the error is absorbed
portrait = phase_portrait(trace)
landing = portrait.jumps[-1][1]
print(
    f"\nfinal support exchange lands at ({landing[0]:.6f}, {landing[1]:.6f}); "
    f"cycle start is ({cycle.x_c.x}, {cycle.x_c.xdot:.6f})"
)

# write the CSVs and render the figures from them, the same pipeline the
# CLI uses (figures are a pure function of the CSV bytes)
out = os.path.join("demo_out", "push_recovery")
write_trace_csv(os.path.join(out, "trace.csv"), trace)
write_steps_csv(os.path.join(out, "steps.csv"), trace)
trace_cols = read_csv_columns(os.path.join(out, "trace.csv"))
steps_cols = read_csv_columns(os.path.join(out, "steps.csv"))
write_text(os.path.join(out, "fig2_com.svg"), render_com_figure(trace_cols))
write_text(os.path.join(out, "fig3_phase.svg"), render_phase_figure(trace_cols, steps_cols))
print(f"\nwrote trace.csv, steps.csv and figures under {out}/")
