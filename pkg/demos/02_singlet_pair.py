# %% [markdown]
# # Singlet pair without entanglement
#
# Two carriers start from opposite labels on a shared clock.  The product
# state's same-sign coefficients are sin*cos terms that vanish at every tick.

# %%
from chronospin import ExperimentConfig, SingletPair, Spin, pair_amplitudes, run_experiment
from chronospin.singlet import pair_amplitudes_at_time

pair = SingletPair.from_start(Spin.DOWN)
for n in range(4):
    print(n, pair_amplitudes(pair, n))
print("off-grid t=0.5:", pair_amplitudes_at_time(pair, 0.5))

# %% [markdown]
# Reading both particles along z at the same tick: never the same label.

# %%
result = run_experiment(ExperimentConfig("singlet-zz", trials=100_000, seed=2))
s = result.summaries[0]
for cell, n in zip(s.cells, s.counts):
    print(f"{cell:>10}: {n}")
