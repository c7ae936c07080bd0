"""Tour of the basic machinery on the single-edge graph K2.

The walk on K2 is fully solvable by hand, so every number printed below can
be checked on paper: the transition matrix is cos(t) I + i sin(t) A, the
vertex state hops to the other vertex at t = pi/2, returns at t = pi, and
spreads uniformly at t = pi/4.
"""

import numpy as np

from qwalk import (
    complete_graph,
    decompose_graph,
    detect_local_uniform_mixing,
    detect_periodicity,
    detect_pst,
    transition_matrix,
    vertex_state,
)

g = complete_graph(2)
d = decompose_graph(g)

print("adjacency matrix:")
print(g.adjacency())
print("\ndistinct eigenvalues:", d.theta)
print("projection onto the +1 eigenspace:")
print(d.idempotents[0].real)

print("\nU(pi/2) = i * A, a perfect swap up to phase:")
print(np.round(transition_matrix(d, np.pi / 2), 12))

state = vertex_state(2, 0)

report = detect_periodicity(state, d)
print(f"\nperiodicity: {report.verdict}, minimum period sigma = {report.witness_time:.12f}")
print(f"  certificate: Delta = {report.certificate.delta}, gcd of multipliers = {report.certificate.g}")

report = detect_pst(state, d)
print(f"perfect state transfer: {report.verdict} at tau = {report.witness_time:.12f} (= sigma/2)")
print("  target state:")
print(np.round(report.target.matrix.real, 12))

report = detect_local_uniform_mixing(d, 0, t_max=5.0)
print(f"local uniform mixing: {report.verdict} at t = {report.witness_time:.12f} (= pi/4)")
print(f"  probability defect at the witness: {report.residual:.3e}")
