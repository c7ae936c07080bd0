"""Spectral decompositions of Hermitian matrices and walk transition matrices.

Real symmetric adjacency matrices and the Hermitian matrices -iS of oriented
graphs are both handled here; every downstream operation works off the same
SpectralDecomposition.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, OrientedGraph, skew_adjacency

DEFAULT_GROUPING_TOL = 1e-9
_DEFAULT_MAX_N = 512


def _max_n() -> int:
    return int(os.environ.get("QWALK_MAX_N", _DEFAULT_MAX_N))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (decreasing) with orthogonal projection idempotents."""

    theta: np.ndarray  # (m,) strictly decreasing
    idempotents: np.ndarray  # (m, n, n) Hermitian projectors
    mult: tuple[int, ...]
    source: np.ndarray  # the decomposed Hermitian matrix
    tol: float
    warnings: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.source.shape[0]

    @property
    def m(self) -> int:
        return len(self.theta)

    def idempotent(self, r: int) -> np.ndarray:
        return self.idempotents[r]

    def residuals(self) -> dict[str, float]:
        """Numerical defects of the defining identities, for verification."""
        ident = np.eye(self.n)
        completeness = float(np.linalg.norm(self.idempotents.sum(axis=0) - ident))
        orth = 0.0
        for r in range(self.m):
            for s in range(self.m):
                prod = self.idempotents[r] @ self.idempotents[s]
                if r == s:
                    prod = prod - self.idempotents[r]
                orth = max(orth, float(np.linalg.norm(prod)))
        recon = float(
            np.linalg.norm(self.source - np.einsum("r,rij->ij", self.theta, self.idempotents))
        )
        herm = max(
            float(np.linalg.norm(e - e.conj().T)) for e in self.idempotents
        )
        mult_gap = max(
            abs(float(np.trace(e).real) - k) for e, k in zip(self.idempotents, self.mult)
        )
        return {
            "completeness": completeness,
            "orthogonality": orth,
            "reconstruction": recon,
            "hermitian_idempotents": herm,
            "multiplicity": mult_gap,
        }


def spectral_decompose(h: np.ndarray, tol: float = DEFAULT_GROUPING_TOL) -> SpectralDecomposition:
    """Group the eigenvalues of a Hermitian matrix and form the projectors.

    Two raw eigenvalues share a group iff their gap is at most
    tol * max(1, ||H||); gaps within a factor 10 of that threshold are
    flagged as ambiguous and the warning is carried into detector reports.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("matrix must be square")
    n = h.shape[0]
    if n > _max_n():
        raise ValueError(f"matrix size {n} exceeds cap {_max_n()} (set QWALK_MAX_N to raise)")
    scale = max(1.0, float(np.linalg.norm(h, 2))) if n else 1.0
    herm_defect = float(np.linalg.norm(h - h.conj().T))
    if herm_defect > tol * scale:
        raise ValueError(f"matrix is not Hermitian (defect {herm_defect:g})")
    hs = (h + h.conj().T) / 2.0

    raw, vecs = np.linalg.eigh(hs)  # ascending
    scale = max(1.0, float(np.abs(raw).max())) if n else 1.0
    threshold = tol * scale

    warnings = []
    groups: list[list[int]] = [[0]] if n else []
    for i in range(1, n):
        gap = raw[i] - raw[i - 1]
        if gap <= threshold:
            groups[-1].append(i)
        else:
            groups.append([i])
        if threshold / 10 <= gap <= threshold * 10:
            warnings.append(
                f"ambiguous eigenvalue gap {gap:.3e} near grouping threshold {threshold:.3e}"
            )

    theta = []
    idem = []
    mult = []
    for idx in groups:
        block = vecs[:, idx]
        theta.append(float(raw[idx].mean()))
        idem.append(block @ block.conj().T)
        mult.append(len(idx))
    # decreasing eigenvalue order
    theta_arr = np.array(theta[::-1])
    idem_arr = np.array(idem[::-1]) if idem else np.zeros((0, n, n), dtype=complex)
    theta_arr.setflags(write=False)
    idem_arr.setflags(write=False)
    src = hs.copy()
    src.setflags(write=False)
    return SpectralDecomposition(
        theta=theta_arr,
        idempotents=idem_arr,
        mult=tuple(mult[::-1]),
        source=src,
        tol=tol,
        warnings=tuple(warnings),
    )


def decompose_graph(g: Graph, tol: float = DEFAULT_GROUPING_TOL) -> SpectralDecomposition:
    """Decompose the adjacency matrix of an undirected graph."""
    return spectral_decompose(g.adjacency().astype(float), tol)


def decompose_oriented(x: OrientedGraph, tol: float = DEFAULT_GROUPING_TOL) -> SpectralDecomposition:
    """Decompose -iS for an oriented graph; exp(tS) = exp(it(-iS)) downstream."""
    return spectral_decompose(-1j * skew_adjacency(x), tol)


def transition_matrix(d: SpectralDecomposition, t: float) -> np.ndarray:
    """U(t) = sum_r exp(i t theta_r) E_r."""
    phases = np.exp(1j * t * d.theta)
    return np.einsum("r,rij->ij", phases, d.idempotents)


def transition_batch(d: SpectralDecomposition, ts: np.ndarray) -> np.ndarray:
    """Stack of U(t) for an array of times."""
    phases = np.exp(1j * np.multiply.outer(np.asarray(ts, dtype=float), d.theta))
    return np.einsum("kr,rij->kij", phases, d.idempotents)


@dataclass(frozen=True)
class VertexRelation:
    kind: str  # "unrelated" | "cospectral" | "strongly_cospectral"
    signs: tuple[int, ...] | None = None  # per idempotent, theta decreasing; 0 when both vanish


def vertex_spectral_relation(
    d: SpectralDecomposition, a: int, b: int, tol: float = 1e-8
) -> VertexRelation:
    """Classify a vertex pair by per-idempotent projections of e_a and e_b.

    Cospectral means equal projection norms for every eigenvalue; strongly
    cospectral additionally requires E_r e_a = +/- E_r e_b, and the sign
    sequence (ordered by decreasing eigenvalue) is returned.
    """
    if a == b:
        raise ValueError("vertices must be distinct")
    cols_a = d.idempotents[:, :, a]
    cols_b = d.idempotents[:, :, b]
    norms_a = np.linalg.norm(cols_a, axis=1)
    norms_b = np.linalg.norm(cols_b, axis=1)
    if np.abs(norms_a - norms_b).max() > tol:
        return VertexRelation("unrelated")
    signs = []
    strongly = True
    for r in range(d.m):
        if norms_a[r] <= tol:
            signs.append(0)
            continue
        overlap = np.vdot(cols_b[r], cols_a[r]).real
        s = 1 if overlap >= 0 else -1
        if np.linalg.norm(cols_a[r] - s * cols_b[r]) > tol:
            strongly = False
            break
        signs.append(s)
    if strongly:
        return VertexRelation("strongly_cospectral", tuple(signs))
    return VertexRelation("cospectral")


def interlacing_check(h: np.ndarray, subset, tol: float = 1e-9) -> bool:
    """Do the eigenvalues of the principal submatrix interlace those of H?"""
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    subset = sorted(set(int(v) for v in subset))
    if not subset or len(subset) >= n:
        raise ValueError("subset must be nonempty and proper")
    if subset[0] < 0 or subset[-1] >= n:
        raise ValueError("subset index out of range")
    lam = np.linalg.eigvalsh((h + h.conj().T) / 2)
    sub = h[np.ix_(subset, subset)]
    mu = np.linalg.eigvalsh((sub + sub.conj().T) / 2)
    k = len(subset)
    for i in range(k):
        if mu[i] < lam[i] - tol or mu[i] > lam[i + n - k] + tol:
            return False
    return True


def eigenvalue_support_indices(d: SpectralDecomposition, a: int, tol: float = 1e-8) -> tuple[int, ...]:
    """Indices r with E_r e_a != 0 (the eigenvalue support of vertex a)."""
    if not (0 <= a < d.n):
        raise ValueError("vertex index out of range")
    norms = np.linalg.norm(d.idempotents[:, :, a], axis=1)
    return tuple(int(r) for r in np.nonzero(norms > tol)[0])
