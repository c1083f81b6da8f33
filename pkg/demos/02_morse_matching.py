# %% [markdown]
# An acyclic matching on D_{n,n-2} with one critical vertex and N_n critical
# triangles, so the complex is a wedge of N_n two-spheres.

# %%
from domcomplex import ComplexSpec, betti, critical_census, dnn2_matching, enumerate_complex, wedge_count
from domcomplex.graphs import format_mask
from domcomplex.morse import verify_acyclic

# %% the smallest case, n = 4, by hand
t = enumerate_complex(ComplexSpec(4, 2))
parts = dnn2_matching(t)
print("R12 has", len(parts.r12), "cells")
for name, m in [("Q12", parts.q12), ("Q23", parts.q23)]:
    for tau, sigma in m.pairs():
        print(f"  {name}: {format_mask(tau, 4)} -> {format_mask(sigma, 4)}")
census = critical_census(parts.total, t)
print("critical 2-cells:", [format_mask(c, 4) for c in census.critical[2]])

# %% the pattern continues
for n in range(4, 9):
    t = enumerate_complex(ComplexSpec(n, n - 2))
    parts = dnn2_matching(t)
    census = critical_census(parts.total, t)
    acyclic = verify_acyclic(parts.total, t).acyclic
    print(f"n={n}: {len(t):5d} cells, critical {census.counts}, acyclic={acyclic}, N_n={wedge_count(n)}")

# %% homology agrees with the critical counts (a perfect matching for homology)
for n in range(4, 8):
    t = enumerate_complex(ComplexSpec(n, n - 2))
    print(f"n={n}: Betti {betti(t, 'gf2').b}")
