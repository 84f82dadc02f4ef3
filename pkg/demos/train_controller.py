"""
Trains at a gate
================

A controller guards a one-track tunnel.  Trains ask to enter, the
controller rejects, waits or grants, and a train that got permission can
go in.  Since all trains behave alike, they share one role and the
transitions only look at how many trains picked each action.
"""

# %%
from ratl import gen_train_controller, mcheck, parse_formula, serialize_model

model = gen_train_controller(2)
print(serialize_model(model))

# %% [markdown]
# Agents 1 and 2 are trains, agent 3 is the controller.  Together they can
# always get a train into the tunnel:

# %%
def holds(text):
    states = mcheck(model, parse_formula(text))
    return " ".join(q for q in model.states if q in states) or "(nowhere)"

print("<1,2,3> F in_gate   ", holds("<1,2,3> F in_gate"))

# %% [markdown]
# Without the controller the trains cannot reach the tunnel from the
# start: the controller can keep rejecting.  Once a grant is on the
# table they can.

# %%
print("<1,2> F in_gate     ", holds("<1,2> F in_gate"))

# %% [markdown]
# The controller alone can keep every train outside.

# %%
print("<3> G out_of_gate   ", holds("<3> G out_of_gate"))
print("<3> X grant         ", holds("<3> X grant"))

# %% [markdown]
# A single train cannot force a grant no matter what the others do.

# %%
print("!<1> F grant        ", holds("!<1> F grant"))
