# %% [markdown]
# D_{5,2} collapses onto a wedge of four 5-spheres.
#
# Inclusion-exclusion on edge 12, then on edge 34, leaves 20 cells R34 in
# dimensions 4, 5, 6; a hand-made matching there leaves four critical 5-cells.

# %%
from domcomplex import ComplexSpec, betti, critical_census, enumerate_complex
from domcomplex.morse import (
    d52_matching,
    enumerate_r34_matchings,
    reference_matching,
    r34_label,
    verify_acyclic,
)

t = enumerate_complex(ComplexSpec(5, 2))
parts = d52_matching(t)
print("R12:", len(parts.r12), "cells;  R34:", len(parts.r34), "cells")

m = reference_matching()
print("pairs:", [(r34_label(a), r34_label(b)) for a, b in m.pairs()])
census = critical_census(m, parts.r34)
print("critical in R34:", sorted(r34_label(c) for c in census.critical[5]))
print("whole complex:", critical_census(parts.total, t).counts,
      "acyclic:", verify_acyclic(parts.total, t).acyclic)
print("Betti:", betti(t).b)

# %% [markdown]
# How many matchings of R34 would do the same job?  It depends on what
# counts.  Every complete matching (4-cells up, 6-cells down) leaves four
# critical 5-cells; most are acyclic.  Requiring the 5-cells shared by two
# 6-cells to be paired downward cuts the list to 16.

# %%
found = enumerate_r34_matchings(parts.r34)
print(found.counts())
print("hand-made matching among the 16:", any(x == m for x in found.shared_down))
