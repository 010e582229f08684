# %% [markdown]
# # CHSH combination (exploratory)
#
# Each setting pair is realized as a separate sequential run at the relative
# angle.  Under the post-selection reading the rejected trials are what lets
# |S| exceed 2.

# %%
import math

from chronospin import ExperimentConfig, chsh

settings = (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)
for rule in ("paper-ensemble", "born-projection"):
    res = chsh(ExperimentConfig("chsh", trials=100_000, seed=4, angles=settings, rule=rule))
    lo, hi = res.interval
    print(f"{rule:>16}: S = {res.s:+.4f} ± {res.sigma:.4f}  4σ [{lo:+.4f}, {hi:+.4f}]"
          f"  (QM {res.qm_s:+.4f}, {res.label})")
