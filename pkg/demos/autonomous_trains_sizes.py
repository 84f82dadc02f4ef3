"""
How much smaller is a model with roles?
=======================================

In the autonomous-trains model every train votes for one train to be let
into the tunnel.  Without roles a transition table has to list every
assignment of votes to trains, n**n rows.  With roles only the vote
counts matter, so there are as many rows as ways to split n votes among
n candidates.
"""

# %%
import math

from ratl import degree_formula, gen_autonomous_trains, size_report, translate

# %%
print(f"{'trains':>6} {'profiles':>10} {'tuples':>12} {'ratio':>10}")
for n in range(2, 8):
    model = gen_autonomous_trains(n)
    row = size_report(model).row("q0")
    assert row.profiles == degree_formula(n) == math.comb(2 * n - 1, n)
    print(f"{n:>6} {row.profiles:>10} {row.tuples:>12} {row.tuples / row.profiles:>10.1f}")

# %% [markdown]
# The same numbers can be read off the translated structure for small n.

# %%
model = gen_autonomous_trains(4)
cgs = translate(model)
print("q0 tuples in the translation:", cgs.tuple_count("q0"))
print(size_report(model, cgs).to_table())
