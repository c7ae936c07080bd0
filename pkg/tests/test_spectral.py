"""Spectral decompositions, transition matrices, vertex relations, interlacing."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk import (
    dense_expm,
    decompose_graph,
    decompose_oriented,
    graph_stats,
    interlacing_check,
    natural_orientation,
    bipartition,
    path_graph,
    skew_adjacency,
    spectral_decompose,
    transition_matrix,
    vertex_spectral_relation,
)
from conftest import random_graph, random_orientation

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)


def test_k2_idempotents_by_hand(k2, decomp):
    d = decomp(k2)
    assert np.allclose(d.theta, [1.0, -1.0], atol=1e-12)
    assert np.allclose(d.idempotents[0], np.full((2, 2), 0.5), atol=1e-12)
    assert np.allclose(d.idempotents[1], np.array([[0.5, -0.5], [-0.5, 0.5]]), atol=1e-12)


def test_p3_spectrum(p3, decomp):
    d = decomp(p3)
    # characteristic polynomial t^3 - 2t has roots 0, +/- sqrt(2)
    assert np.allclose(d.theta, [SQRT2, 0.0, -SQRT2], atol=1e-12)
    assert d.mult == (1, 1, 1)


def test_oriented_c3_spectrum(oriented_c3, decomp):
    d = decomp(oriented_c3)
    # circulant: eigenvalues of -iS are 2*sin(2*pi*k/3)
    expected = sorted(2 * np.sin(2 * np.pi * k / 3) for k in range(3))[::-1]
    assert np.allclose(d.theta, expected, atol=1e-12)
    assert np.allclose(d.theta, [SQRT3, 0.0, -SQRT3], atol=1e-12)


def test_multiplicities_group(c4, decomp):
    d = decomp(c4)
    assert np.allclose(d.theta, [2.0, 0.0, -2.0], atol=1e-9)
    assert d.mult == (1, 2, 1)


def test_decompose_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        spectral_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_decompose_respects_size_cap(monkeypatch):
    monkeypatch.setenv("QWALK_MAX_N", "3")
    with pytest.raises(ValueError, match="cap"):
        spectral_decompose(np.eye(4))


def test_transition_quarter_period_k2(k2, decomp):
    d = decomp(k2)
    u = transition_matrix(d, np.pi / 2)
    assert np.allclose(u, 1j * k2.adjacency(), atol=1e-12)


def test_transition_zero_is_identity(p3, decomp):
    assert np.allclose(transition_matrix(decomp(p3), 0.0), np.eye(3), atol=1e-14)


def test_transition_oriented_c3_period(oriented_c3, decomp):
    d = decomp(oriented_c3)
    u = transition_matrix(d, 2 * np.pi / SQRT3)
    assert np.linalg.norm(u - np.eye(3)) <= 1e-9


def test_oriented_transition_is_real_orthogonal(oriented_c3, decomp, rng):
    d = decomp(oriented_c3)
    for t in rng.uniform(0, 10, size=5):
        u = transition_matrix(d, t)
        assert np.abs(u.imag).max() <= 1e-9
        assert np.linalg.norm(u.real @ u.real.T - np.eye(3)) <= 1e-9


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.0, max_value=10.0), st.floats(min_value=0.0, max_value=10.0))
def test_unitarity_and_group_law(t, s):
    d = decompose_graph(path_graph(4))
    u_t, u_s = transition_matrix(d, t), transition_matrix(d, s)
    assert np.linalg.norm(u_t @ u_t.conj().T - np.eye(4)) <= 4 * 1e-9
    assert np.linalg.norm(transition_matrix(d, t + s) - u_t @ u_s) <= 4 * 1e-9


def test_unitarity_hundred_random_times(k13, decomp, rng):
    d = decomp(k13)
    for t in rng.uniform(0.0, 10.0, size=100):
        u = transition_matrix(d, t)
        assert np.linalg.norm(u @ u.conj().T - np.eye(4)) <= 4 * 1e-9


def test_oracle_equivalence_on_corpus(k2, p3, c4, k13, oriented_c3, decomp, rng):
    for x in (k2, p3, c4, k13, oriented_c3):
        d = decomp(x)
        h = d.source
        for t in rng.uniform(0, 10, size=5):
            gap = np.linalg.norm(transition_matrix(d, t) - dense_expm(1j * t * h))
            assert gap <= 1e-8


def test_vertex_relation_k2(k2, decomp):
    rel = vertex_spectral_relation(decomp(k2), 0, 1)
    assert rel.kind == "strongly_cospectral"
    assert rel.signs == (1, -1)


def test_vertex_relation_p3_ends(p3, decomp):
    rel = vertex_spectral_relation(decomp(p3), 0, 2)
    assert rel.kind == "strongly_cospectral"
    assert rel.signs == (1, -1, 1)


def test_vertex_relation_p3_end_vs_center(p3, decomp):
    rel = vertex_spectral_relation(decomp(p3), 0, 1)
    assert rel.kind == "unrelated"


def test_vertex_relation_c4_adjacent_cospectral_only(c4, decomp):
    rel = vertex_spectral_relation(decomp(c4), 0, 1)
    assert rel.kind == "cospectral"


def test_vertex_relation_c4_antipodal_strong(c4, decomp):
    rel = vertex_spectral_relation(decomp(c4), 0, 2)
    assert rel.kind == "strongly_cospectral"


def test_interlacing_p3_ends(p3):
    assert interlacing_check(p3.adjacency().astype(float), [0, 2])


def test_interlacing_oriented_c3(oriented_c3):
    h = -1j * skew_adjacency(oriented_c3)
    assert interlacing_check(h, [0, 1])
    assert interlacing_check(h, [1, 2])


def test_interlacing_rejects_full_subset(p3):
    with pytest.raises(ValueError):
        interlacing_check(p3.adjacency().astype(float), [0, 1, 2])


def test_interlacing_detects_violation():
    h = np.diag([3.0, 0.0, -3.0])
    # a fake "submatrix" spectrum outside the outer spectrum cannot arise from
    # a principal submatrix; check the predicate itself on a real one instead
    assert interlacing_check(h, [0])
    assert interlacing_check(h, [0, 2])


def test_oriented_eigenvalue_bound_random(rng):
    for _ in range(40):
        n = int(rng.integers(2, 9))
        x = random_orientation(rng, random_graph(rng, n))
        d = decompose_oriented(x)
        bound = graph_stats(x).max_valency
        assert np.abs(d.theta).max() <= bound + 1e-9


def test_oriented_conjugate_pairing_random(rng):
    for _ in range(25):
        n = int(rng.integers(2, 9))
        x = random_orientation(rng, random_graph(rng, n))
        d = decompose_oriented(x)
        # eigenvalues symmetric about zero
        assert np.allclose(np.sort(d.theta), np.sort(-d.theta), atol=1e-9)
        for r, theta in enumerate(d.theta):
            partner = int(np.argmin(np.abs(d.theta + theta)))
            assert np.linalg.norm(d.idempotents[partner] - d.idempotents[r].conj()) <= n * 1e-9


def test_bipartite_equivalence_p4_c4(p4, c4, rng):
    for g in (p4, c4):
        parts = bipartition(g)
        x = natural_orientation(g, parts)
        s = skew_adjacency(x).astype(float)
        a = g.adjacency().astype(float)
        for t in rng.uniform(0, 10, size=10):
            lhs = np.abs(dense_expm(t * s))
            rhs = np.abs(dense_expm(1j * t * a))
            assert np.abs(lhs - rhs).max() <= 1e-9


def test_decomposition_residuals_small(k13, decomp):
    res = decomp(k13).residuals()
    assert max(res.values()) <= 4 * 1e-9


def test_ambiguity_warning_near_threshold():
    h = np.diag([0.0, 5e-9])  # gap inside the warning band around 1e-9
    d = spectral_decompose(h, tol=1e-9)
    assert d.warnings and "ambiguous" in d.warnings[0]
