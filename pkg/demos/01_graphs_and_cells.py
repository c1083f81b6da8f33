# %% [markdown]
# Graphs as edge masks, domination, and the complexes D_{n,k}
#
# A graph on vertices 1..n is an integer: bit r is the r-th edge in the
# order 12, 13, ..., 1n, 23, ...  A set of edges is a cell of D_{n,k} when the
# graph needs at least k vertices to dominate it.

# %%
import numpy as np

from domcomplex import ComplexSpec, LabeledGraph, enumerate_complex, f_vector, facets
from domcomplex.graphs import domination_number, edge_index

print("edge 23 on five vertices has index", edge_index(2, 3, 5))

square = LabeledGraph.parse("13|14|23|24", 4)
print(square, "as a mask:", bin(square.edges), "gamma =", domination_number(square))

# %% adding isolated vertices pushes gamma up by one each
for n in range(4, 9):
    g = LabeledGraph.parse("13|14|23|24", n)
    print(f"n={n}: gamma(4-cycle + {n - 4} isolated) = {domination_number(g)}")

# %% [markdown]
# D_{4,2}: seven facets, three of them tetrahedra.

# %%
d42 = enumerate_complex(ComplexSpec(4, 2))
for g in facets(d42):
    print(f"  dim {g.dim}: {g}")
print("f-vector", f_vector(d42).c)

# %% f-vectors of the whole k-ladder for n = 6, as a numpy array
rows = [f_vector(enumerate_complex(ComplexSpec(6, k))).c for k in range(2, 7)]
width = max(len(r) for r in rows)
F = np.array([list(r) + [0] * (width - len(r)) for r in rows])
print(F)
signs = (-1) ** np.arange(width)
print("Euler characteristics by k = 2..6:", F @ signs)
