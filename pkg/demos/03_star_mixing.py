"""Uniform mixing on stars, and a transfer between unlike states.

A star with n leaves mixes uniformly from its center at
t = arccos(1/sqrt(n+1))/sqrt(n).  The 3-leaf star does more: all four
vertices mix at one common time, and the center state transfers perfectly
onto the pure state spread evenly over the leaves.
"""

import numpy as np

from qwalk import (
    decompose_graph,
    detect_local_uniform_mixing,
    detect_pst,
    detect_uniform_mixing,
    scan_flatness,
    star_graph,
    vertex_state,
)

print("local uniform mixing at the star center (closed form vs detector):")
for leaves in range(2, 7):
    d = decompose_graph(star_graph(leaves))
    report = detect_local_uniform_mixing(d, 0, t_max=5.0)
    expected = np.arccos(1 / np.sqrt(leaves + 1)) / np.sqrt(leaves)
    print(
        f"  {leaves} leaves: witness t = {report.witness_time:.9f}, "
        f"formula {expected:.9f}, defect {report.residual:.1e}"
    )

k13 = star_graph(3)
d = decompose_graph(k13)

report = detect_uniform_mixing(d, t_max=5.0)
print(f"\nK_{{1,3}} mixes uniformly from every vertex at t = {report.witness_time:.9f}")
print("  (closed form 2*pi/(3*sqrt(3)) =", 2 * np.pi / (3 * np.sqrt(3)), ")")

scan = scan_flatness(k13.adjacency().astype(float), 0, window=(0.0, 2.0))
print("  oracle flatness scan at the center found minima:", [round(t, 6) for t, _ in scan.minima])

pst = detect_pst(vertex_state(4, 0), d)
print(f"\ncenter state transfer: {pst.verdict} at tau = {pst.witness_time:.9f}")
print("  the target is the leaf-uniform pure state:")
print(np.round(pst.target.matrix.real, 6))
print("  note tau equals pi/(2*sqrt(3)), the smallest time any orthogonal transfer allows")
