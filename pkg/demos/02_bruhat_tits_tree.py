"""Walking around the Bruhat-Tits tree of PGL_2 over F_3((1/X)).

Run: python demos/02_bruhat_tits_tree.py
"""

from ffcusp.algebra import GF, Polynomial
from ffcusp.bttree import (
    BoundaryPoint, Mat2, TreeVertex, apply_mat, busemann, depth_infty,
    geodesic_ray, tree_distance, vertex_from_matrix,
)
from ffcusp.cf import CFSource, golden_spec
from ffcusp.laurent import LaurentSeries

F = GF(3)
X = Polynomial.x(F)
o = TreeVertex.standard(F)           # the class of O^2

# vertices of the standard ray toward infinity
ray = [TreeVertex.standard(F, n) for n in range(4)]
print('standard ray:', ray)
print('depths in the horoball at infinity:', [depth_infty(v) for v in ray])

# every vertex has q + 1 neighbours
print('neighbours of o:', o.neighbors())

# lattices given by a basis
M = Mat2(F, X * X, X + 1, 0, 1)
v = vertex_from_matrix(M)
print('vertex of', M, '->', v, ' distance from o:', tree_distance(o, v))

# GL_2 acts by isometries
g = Mat2(F, 1, 0, X, 1)
print('d(o, v) =', tree_distance(o, v), '  d(g o, g v) =', tree_distance(apply_mat(g, o), apply_mat(g, v)))

# geodesic toward the golden boundary point
xi = BoundaryPoint(F, CFSource(golden_spec(F)))
path = geodesic_ray(o, xi, 6)
for w in path:
    print(f'  level {w.level:3d}  busemann_xi(w, o) = {busemann(xi, w, o)}')

# zero as a boundary point and the ray down to it
zero = BoundaryPoint(F, LaurentSeries.zero(F))
print('toward 0:', geodesic_ray(o, zero, 3)[-1])
