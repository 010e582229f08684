# %% [markdown]
# # A single oscillating spin
#
# The carrier swings between down and up with a four-tick period.  At every
# integer tick one amplitude is exactly zero, so a readout is deterministic
# once the start label and tick parity are known.

# %%
from chronospin import OscillatingSpin, Spin, amplitudes_at, measure_z, run_single_spin_ensemble
from chronospin.plots import oscillation_trace, trace_svg

for tick, p_down, p_up in oscillation_trace(Spin.DOWN, 8):
    print(f"tick {tick}: P(down)={p_down:.0f} P(up)={p_up:.0f}")

# %% [markdown]
# Readouts depend only on the start label and the parity of the elapsed ticks.

# %%
for start in Spin:
    spin = OscillatingSpin(start)
    print(start, "even ->", measure_z(spin, 10).value, "| odd ->", measure_z(spin, 11).value)

print("amplitudes two ticks after a down start:", amplitudes_at(OscillatingSpin(Spin.DOWN), 2))

# %% [markdown]
# Timing is far coarser than a tick, so start label and parity are unknown per
# run.  Averaging over both recovers the 50/50 statistics of the superposition.

# %%
summary = run_single_spin_ensemble(100_000, seed=1)
for cell, f, se in zip(summary.cells, summary.frequencies, summary.stderr):
    print(f"{cell:>5}: {f:.4f} ± {se:.4f}")

# %%
with open("single_spin_trace.svg", "w") as fh:
    fh.write(trace_svg(Spin.DOWN, 8))
print("wrote single_spin_trace.svg")
