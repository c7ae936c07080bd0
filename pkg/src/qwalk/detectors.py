"""Decision procedures: periodicity, perfect state transfer, pretty-good
transfer targets, uniform mixing, and the periodic-vertex counting bounds.

Periodicity and transfer verdicts ride on the integer ratio certificate and
are re-verified by evolving the state; mixing detection is a semi-decision
(scan up to t_max) because no closed mixing-time formula exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certificates import (
    DEFAULT_CERT_TOL,
    DEFAULT_MAX_DEN,
    RatioCertificate,
    RatioConditionAmbiguous,
    RatioConditionFailure,
    minimum_period,
    ratio_condition,
)
from .graphs import Graph, OrientedGraph, graph_stats
from .spectral import SpectralDecomposition, eigenvalue_support_indices, transition_matrix
from .states import (
    BlockDecomposition,
    DensityMatrix,
    EigenvalueSupport,
    block_decompose,
    density_matrix,
    evolve,
)

DEFAULT_ACCEPT_TOL = 1e-8
DEFAULT_FLAT_TOL = 1e-9
DEFAULT_MIXING_GRID = 10**5
PGST_PAIR_CAP = 20
_TIME_RESOLUTION = 1e-13


class EnumerationCapExceeded(RuntimeError):
    """Sign-pattern enumeration would exceed the configured cap."""

    def __init__(self, count: int):
        super().__init__(f"would enumerate {count} sign patterns")
        self.count = count


@dataclass(frozen=True)
class DetectionReport:
    verdict: str  # "yes" | "no" | "inconclusive"
    witness_time: float | None = None
    target: DensityMatrix | None = None
    residual: float = 0.0
    certificate: RatioCertificate | None = None
    reason: str | None = None
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        warnings = list(self.warnings)
        if self.reason:
            warnings.insert(0, f"reason: {self.reason}")
        return {
            "verdict": self.verdict,
            "witness_time": self.witness_time,
            "residual": self.residual,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "warnings": warnings,
        }


@dataclass(frozen=True)
class SignPattern:
    """Signs over unordered off-diagonal support pairs (r < s)."""

    eps: dict[tuple[int, int], int]

    def sign(self, r: int, s: int) -> int:
        return self.eps[(min(r, s), max(r, s))]


def _grouping_ambiguous(d: SpectralDecomposition) -> tuple[str, ...]:
    return tuple(w for w in d.warnings if "ambiguous" in w)


def detect_periodicity(
    p: DensityMatrix,
    d: SpectralDecomposition,
    accept_tol: float = DEFAULT_ACCEPT_TOL,
    cert_tol: float = DEFAULT_CERT_TOL,
    max_den: int = DEFAULT_MAX_DEN,
    blocks: BlockDecomposition | None = None,
) -> DetectionReport:
    """Is the real state periodic, and with what minimum period?

    Stationary states (empty off-diagonal support) are periodic for every t.
    Otherwise the ratio condition decides: a certificate yields the period
    sigma = 2*pi/(sqrt(Delta)*g), confirmed by evolving the state; a failure
    witness refutes periodicity.
    """
    if not p.real:
        raise ValueError("periodicity detection requires a real state")
    ambiguous = _grouping_ambiguous(d)
    if ambiguous:
        return DetectionReport(
            "inconclusive", reason="ambiguous spectral grouping", warnings=ambiguous
        )
    b = blocks if blocks is not None else block_decompose(p, d)
    if not b.support.off_diagonal:
        residual = float(np.linalg.norm(evolve(b, 1.0).matrix - p.matrix))
        return DetectionReport(
            "yes",
            witness_time=0.0,
            residual=residual,
            warnings=("stationary: the state commutes with the walk, so every t is a period",),
        )
    outcome = ratio_condition(b.support, d.theta, max_den, cert_tol, rational_state=p.rational)
    if isinstance(outcome, RatioConditionFailure):
        return DetectionReport("no", reason=outcome.describe())
    if isinstance(outcome, RatioConditionAmbiguous):
        return DetectionReport("inconclusive", reason=outcome.reason)
    sigma = minimum_period(outcome)
    residual = float(np.linalg.norm(evolve(b, sigma).matrix - p.matrix))
    if residual > accept_tol:
        return DetectionReport(
            "inconclusive",
            witness_time=sigma,
            residual=residual,
            certificate=outcome,
            reason=f"certificate found but return residual {residual:g} exceeds tolerance",
        )
    return DetectionReport("yes", witness_time=sigma, residual=residual, certificate=outcome)


def detect_pst(
    p: DensityMatrix,
    d: SpectralDecomposition,
    accept_tol: float = DEFAULT_ACCEPT_TOL,
    cert_tol: float = DEFAULT_CERT_TOL,
    max_den: int = DEFAULT_MAX_DEN,
) -> DetectionReport:
    """Does the real state transfer perfectly to a distinct real state?

    A periodic state with minimum period sigma can only transfer at sigma/2,
    and the real target there is unique, so evolving to sigma/2 and testing
    realness and distinctness decides the question completely.
    """
    if not p.real:
        raise ValueError("transfer detection requires a real state")
    b = block_decompose(p, d)
    per = detect_periodicity(p, d, accept_tol, cert_tol, max_den, blocks=b)
    if per.verdict == "no":
        return DetectionReport("no", reason=f"not periodic ({per.reason})")
    if per.verdict == "inconclusive":
        return DetectionReport("inconclusive", reason=per.reason, warnings=per.warnings)
    if per.certificate is None:
        return DetectionReport("no", reason="stationary state never leaves its initial density")
    sigma = per.witness_time
    tau = sigma / 2.0
    half = evolve(b, tau).matrix
    imag_size = float(np.abs(half.imag).max())
    if imag_size > accept_tol:
        return DetectionReport(
            "no",
            residual=imag_size,
            certificate=per.certificate,
            reason=(
                "the state at half period is not real, and perfect transfer between "
                "real states can only happen there"
            ),
        )
    target = density_matrix(half.real.astype(complex), tol=max(p.tol, 1e-8))
    distance = float(np.linalg.norm(target.matrix - p.matrix))
    if distance <= accept_tol:
        return DetectionReport(
            "no",
            residual=distance,
            certificate=per.certificate,
            reason="the state returns to itself at half period; no distinct real image",
        )
    residual = verify_transfer(p, target, d, tau)
    return DetectionReport(
        "yes",
        witness_time=tau,
        target=target,
        residual=residual,
        certificate=per.certificate,
    )


def verify_transfer(p: DensityMatrix, q: DensityMatrix, d: SpectralDecomposition, t: float) -> float:
    """Frobenius distance ||U(t) P U(-t) - Q|| for externally supplied claims."""
    if p.n != q.n or p.n != d.n:
        raise ValueError("dimension mismatch")
    u = transition_matrix(d, t)
    return float(np.linalg.norm(u @ p.matrix @ u.conj().T - q.matrix))


def pgst_candidates(
    p: DensityMatrix,
    b: BlockDecomposition,
    d: SpectralDecomposition,
    psd_tol: float = 1e-9,
    pair_cap: int = PGST_PAIR_CAP,
) -> list[tuple[SignPattern, DensityMatrix]]:
    """All real density matrices reachable by pretty-good transfer from p.

    Any target agrees with p on diagonal blocks and flips signs of some
    off-diagonal blocks, so candidates are the PSD members of the sign-flip
    family.  The all-plus pattern (p itself) is always first.
    """
    pairs = b.off_diagonal_pairs()
    if len(pairs) > pair_cap:
        raise EnumerationCapExceeded(2 ** len(pairs))
    n = b.n
    base = np.zeros((n, n), dtype=complex)
    for r, s in b.blocks:
        if r == s:
            base += b.blocks[(r, s)]
    combos = []
    for r, s in pairs:
        combo = b.blocks[(r, s)] + b.blocks.get((s, r), b.blocks[(r, s)].conj().T)
        combos.append(combo)

    count = 2 ** len(pairs)
    out: list[tuple[SignPattern, DensityMatrix]] = []
    chunk = 4096
    signs_of = lambda i: [1 - 2 * ((i >> k) & 1) for k in range(len(pairs))]
    for start in range(0, count, chunk):
        stop = min(start + chunk, count)
        batch = np.broadcast_to(base, (stop - start, n, n)).copy()
        for k, combo in enumerate(combos):
            signs = np.array([1 - 2 * ((i >> k) & 1) for i in range(start, stop)])
            batch += signs[:, None, None] * combo
        batch = (batch + batch.conj().transpose(0, 2, 1)) / 2
        min_eigs = np.linalg.eigvalsh(batch)[:, 0] if stop > start else np.array([])
        for local, i in enumerate(range(start, stop)):
            if min_eigs[local] < -psd_tol:
                continue
            pattern = SignPattern({pair: s for pair, s in zip(pairs, signs_of(i))})
            out.append((pattern, density_matrix(batch[local], tol=max(p.tol, 1e-8))))
    return out


@dataclass(frozen=True)
class BestTransfer:
    t: float
    residual: float


def _refine_spectral(value_fn, lo: float, hi: float, best_t: float, best_v: float):
    """Shrink a bracket around a minimum of a spectral-path objective."""
    while hi - lo > _TIME_RESOLUTION:
        count = 65
        step = (hi - lo) / (count - 1)
        if step <= _TIME_RESOLUTION / 4:
            break
        ts = lo + step * np.arange(count)
        values = value_fn(ts)
        k = int(values.argmin())
        if values[k] < best_v:
            best_v = float(values[k])
            best_t = float(ts[k])
        lo = ts[max(k - 1, 0)]
        hi = ts[min(k + 1, count - 1)]
    return best_t, best_v


def _scan_spectral(value_fn, t_max: float, steps: int, refine_below: float, slope: float):
    """Grid scan plus refinement; returns ascending refined minima and floor.

    Only candidates whose grid value could plausibly dip below refine_below
    within one slope-bounded step get refined, plus the global minimum.
    """
    ts = np.linspace(0.0, t_max, steps + 1)
    values = value_fn(ts)
    step = ts[1] - ts[0]
    cutoff = max(refine_below, 2.0 * slope * step)
    interior = (values[1:-1] <= values[:-2]) & (values[1:-1] <= values[2:])
    candidates = [i + 1 for i in np.nonzero(interior)[0]]
    global_idx = int(values.argmin())
    if 0 < global_idx < len(ts) - 1 and global_idx not in candidates:
        candidates.append(global_idx)
    floor = float(values.min())
    refined = []
    for i in sorted(candidates):
        if values[i] > cutoff and i != global_idx:
            continue
        t, v = _refine_spectral(value_fn, ts[i - 1], ts[i + 1], float(ts[i]), float(values[i]))
        refined.append((t, v))
        floor = min(floor, v)
    return refined, floor, step


def pgst_witness_search(
    p: DensityMatrix,
    q: DensityMatrix,
    d: SpectralDecomposition,
    t_max: float,
    accept_tol: float = DEFAULT_ACCEPT_TOL,
    step: float | None = None,
) -> BestTransfer:
    """Best transfer time found on [0, t_max]; a semi-decision, never a proof.

    Grid scan of ||U(t) P U(-t) - Q|| with local refinement.  The default
    step follows the certified period when one exists, else 1e-2.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if step is None:
        step = 1e-2
        if p.real:
            try:
                b = block_decompose(p, d)
                if b.support.off_diagonal:
                    outcome = ratio_condition(b.support, d.theta, rational_state=p.rational)
                    if isinstance(outcome, RatioCertificate):
                        step = min(1e-2, minimum_period(outcome) / 64.0)
            except ValueError:
                pass
    pm, qm = p.matrix, q.matrix

    def value_fn(ts):
        phases = np.exp(1j * np.multiply.outer(ts, d.theta))
        u = np.einsum("kr,rij->kij", phases, d.idempotents)
        return np.linalg.norm(u @ pm @ u.conj().transpose(0, 2, 1) - qm, axis=(1, 2))

    steps = max(2, int(math.ceil(t_max / step)))
    slope = 2.0 * float(np.abs(d.theta).max()) if d.m else 0.0
    refined, floor, _ = _scan_spectral(
        value_fn, t_max, steps, refine_below=10 * accept_tol, slope=slope
    )
    best_t, best_v = 0.0, float(value_fn(np.array([0.0]))[0])
    for t, v in refined:
        if v < best_v:
            best_t, best_v = t, v
    end_v = float(value_fn(np.array([t_max]))[0])
    if end_v < best_v:
        best_t, best_v = t_max, end_v
    return BestTransfer(best_t, min(best_v, floor))


def _vertex_support(d: SpectralDecomposition, a: int, tol: float = 1e-8) -> EigenvalueSupport:
    idx = eigenvalue_support_indices(d, a, tol)
    pairs = frozenset((r, s) for r in idx for s in idx)
    return EigenvalueSupport(pairs, d.theta)


def _mixing_report(
    value_fn,
    t_max: float,
    flat_tol: float,
    grid_points: int,
    extra_warnings: tuple[str, ...],
    slope: float,
) -> DetectionReport:
    steps = max(64, int(grid_points))
    refined, floor, step = _scan_spectral(
        value_fn, t_max, steps, refine_below=100 * flat_tol, slope=slope
    )
    for t, v in sorted(refined):
        if v <= flat_tol:
            return DetectionReport("yes", witness_time=t, residual=v, warnings=extra_warnings)
    return DetectionReport(
        "no",
        residual=floor,
        reason=f"scan floor {floor:g} above flatness tolerance {flat_tol:g}",
        warnings=extra_warnings + (f"semi-decision: searched t in [0, {t_max:g}] only",),
    )


def detect_local_uniform_mixing(
    d: SpectralDecomposition,
    a: int,
    t_max: float = 20.0,
    flat_tol: float = DEFAULT_FLAT_TOL,
    grid_points: int = DEFAULT_MIXING_GRID,
    cert_tol: float = DEFAULT_CERT_TOL,
    max_den: int = DEFAULT_MAX_DEN,
    oriented: bool | None = None,
) -> DetectionReport:
    """Does the walk ever spread vertex a uniformly over all vertices?

    Stage one reports the ratio condition on the vertex support: for walks on
    oriented graphs a flat column is forced to have algebraic entries, so a
    failed ratio condition rules mixing out; for plain graphs the same check
    is advisory only.  Stage two minimizes the max-entry probability defect
    of U(t) e_a by grid scan and refinement.
    """
    if oriented is None:
        oriented = bool(np.abs(d.source.imag).max() > 1e-12)
    warnings = []
    support = _vertex_support(d, a)
    if support.off_diagonal:
        outcome = ratio_condition(support, d.theta, max_den, cert_tol, rational_state=True)
        if isinstance(outcome, RatioCertificate):
            warnings.append("necessary-condition check: vertex support satisfies the ratio condition")
        elif isinstance(outcome, RatioConditionFailure):
            kind = "hard necessary condition (oriented walk)" if oriented else "advisory for plain graphs"
            warnings.append(f"necessary-condition check: ratio condition fails; {kind}")
        else:
            warnings.append(f"necessary-condition check inconclusive: {outcome.reason}")
    cols = d.idempotents[:, :, a]  # (m, n)
    n = d.n

    def value_fn(ts):
        phases = np.exp(1j * np.multiply.outer(ts, d.theta))
        amps = phases @ cols
        return np.abs(np.abs(amps) ** 2 - 1.0 / n).max(axis=1)

    slope = 2.0 * float(np.abs(d.theta).max()) if d.m else 0.0
    report = _mixing_report(value_fn, t_max, flat_tol, grid_points, tuple(warnings), slope)
    if report.verdict == "yes" and oriented and any("fails" in w for w in warnings):
        report = DetectionReport(
            "inconclusive",
            witness_time=report.witness_time,
            residual=report.residual,
            reason="scan found a flat time but the oriented necessary condition fails",
            warnings=report.warnings,
        )
    return report


def detect_uniform_mixing(
    d: SpectralDecomposition,
    t_max: float = 20.0,
    flat_tol: float = DEFAULT_FLAT_TOL,
    grid_points: int = DEFAULT_MIXING_GRID,
) -> DetectionReport:
    """Is there one time at which every vertex state mixes uniformly?"""
    n = d.n

    def value_fn(ts):
        phases = np.exp(1j * np.multiply.outer(ts, d.theta))
        u = np.einsum("kr,rij->kij", phases, d.idempotents)
        return np.abs(np.abs(u) ** 2 - 1.0 / n).max(axis=(1, 2))

    slope = 2.0 * float(np.abs(d.theta).max()) if d.m else 0.0
    return _mixing_report(value_fn, t_max, flat_tol, grid_points, (), slope)


@dataclass(frozen=True)
class VertexBounds:
    ecc_plus_one: int
    support_size: int
    upper: int  # 2 * max_valency + 1
    consistent: bool


def periodic_vertex_bounds(
    x: Graph | OrientedGraph,
    d: SpectralDecomposition,
    a: int,
    certified_periodic: bool = False,
    tol: float = 1e-8,
) -> VertexBounds:
    """Counting bounds on the vertex eigenvalue support.

    ecc(a) + 1 <= |esupp(a)| holds on every connected graph; for a certified
    periodic vertex the support also fits into 2 * max_valency + 1 slots, so
    `consistent` includes that upper bound when requested.
    """
    stats = graph_stats(x)
    if not stats.connected:
        raise ValueError("bounds require a connected graph")
    support_size = len(eigenvalue_support_indices(d, a, tol))
    ecc = stats.eccentricity[a]
    upper = 2 * stats.max_valency + 1
    consistent = ecc + 1 <= support_size
    if certified_periodic:
        consistent = consistent and support_size <= upper
    return VertexBounds(ecc + 1, support_size, upper, consistent)


@dataclass(frozen=True)
class PhaseCheck:
    scalar: bool
    zeta: complex
    root_of_unity: bool


def controllability_phase_check(
    p: DensityMatrix,
    d: SpectralDecomposition,
    t: float,
    tol: float = DEFAULT_ACCEPT_TOL,
) -> PhaseCheck:
    """For controllable states with a real image at t, U(2t) must be scalar.

    Returns the scalar zeta = U(2t)/I and whether zeta^n is 1; a non-scalar
    U(2t) flags a violated assumption upstream rather than raising.
    """
    u2 = transition_matrix(d, 2.0 * t)
    n = d.n
    zeta = complex(np.trace(u2) / n)
    scalar = bool(np.linalg.norm(u2 - zeta * np.eye(n)) <= n * tol)
    root = bool(abs(zeta**n - 1.0) <= n * tol)
    return PhaseCheck(scalar=scalar, zeta=zeta, root_of_unity=root)


def transfer_sign_pattern(
    p: DensityMatrix,
    q: DensityMatrix,
    d: SpectralDecomposition,
    tol: float = DEFAULT_ACCEPT_TOL,
) -> dict[tuple[int, int], int] | None:
    """Signs eps with E_r Q E_s = eps_{r,s} E_r P E_s, or None if they fail.

    Diagonal pairs must carry +1; used to validate detected transfer targets.
    """
    bp = block_decompose(p, d)
    bq = block_decompose(q, d)
    if set(bp.blocks) != set(bq.blocks):
        return None
    signs = {}
    for (r, s), block_p in bp.blocks.items():
        block_q = bq.blocks[(r, s)]
        if r == s:
            if np.linalg.norm(block_q - block_p) > tol:
                return None
            signs[(r, s)] = 1
            continue
        if np.linalg.norm(block_q - block_p) <= tol:
            signs[(r, s)] = 1
        elif np.linalg.norm(block_q + block_p) <= tol:
            signs[(r, s)] = -1
        else:
            return None
    return signs
