"""
Three checkers, one answer
==========================

The fixed-point checker works on profiles.  Two independent routes give
the same answers: translating to an ordinary game structure and checking
there, and brute force over memoryless strategies.  Here we compare all
three on random models.
"""

# %%
import random

from ratl import cgs_mcheck, mcheck, mcheck_naive, random_model, translate
from ratl.checker import StrategyLimitError
from ratl.formula import to_text
from ratl.workbench import random_formula

rng = random.Random(2024)
agree = skipped = 0
for seed in range(200):
    model = random_model(seed, n_agents=rng.randint(1, 3), n_states=rng.randint(1, 4))
    phi = random_formula(rng, model.props, model.n_agents, depth=3)
    fast = mcheck(model, phi)
    assert fast == cgs_mcheck(translate(model), phi), to_text(phi)
    try:
        assert fast == mcheck_naive(model, phi, limit=20_000), to_text(phi)
    except StrategyLimitError:
        skipped += 1
        continue
    agree += 1

print(f"{agree} instances agree on all three engines, {skipped} too large for brute force")

# %% [markdown]
# One instance in detail.

# %%
from ratl import parse_formula

model = random_model(7)
for text in ("<1> (p U q)", "<1,2> G !r", "<> X p"):
    phi = parse_formula(text)
    print(f"{to_text(phi):<20}", sorted(mcheck(model, phi)), sorted(mcheck_naive(model, phi)))
