"""Assemble a global configuration from per-hyperedge local scans.

Each scan reports its hyperedge's geometry in a private chart that is off by
an unknown affine (or Euclidean) transform. Affine relations are invariant
under invertible chart transforms, so the strong affinity matrix of the
unknown global configuration can be assembled directly from the charts; its
kernel recovers the configuration up to one global affine map. When the
charts' internal distances are trusted, a least-squares fit of a Gram matrix
on the measured squared lengths upgrades the result to a Euclidean one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import numkernel
from .errors import (
    InconsistentLengthsError,
    InconsistentScansError,
    InvalidInputError,
    NonUniqueTransformError,
    NotAffinelyRigidError,
)
from .hypergraph import Graph, Hypergraph, as_hypergraph
from .numkernel import DEFAULT_REL_TOL
from .rigidity import (
    AffinityMatrix,
    Framework,
    conic_at_infinity_test,
    _direction_monomials,
)

logger = logging.getLogger(__name__)

AFFINE = "affine"
EUCLIDEAN = "euclidean"


@dataclass(frozen=True, eq=False)
class Scan:
    """One hyperedge observed in a private chart.

    ``coordinates[k]`` is the observed point of ``members[k]``.
    """

    members: tuple[int, ...]
    coordinates: np.ndarray

    def __post_init__(self):
        if len(self.members) == 0:
            raise InvalidInputError("a scan must cover at least one vertex")
        if len(set(self.members)) != len(self.members):
            raise InvalidInputError("scan members must be distinct")
        coords = np.array(self.coordinates, dtype=float)
        if coords.ndim != 2 or coords.shape[0] != len(self.members):
            raise InvalidInputError(
                f"scan of {len(self.members)} vertices has chart shape "
                f"{coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise InvalidInputError("scan chart contains non-finite entries")
        coords.flags.writeable = False
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "members", tuple(int(u) for u in self.members))


@dataclass(frozen=True, eq=False)
class ScanSet:
    """A collection of scans over a common vertex set."""

    vertex_count: int
    scans: tuple[Scan, ...]
    trust: str

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidInputError("vertex_count must be positive")
        if self.trust not in (AFFINE, EUCLIDEAN):
            raise InvalidInputError(f"unknown trust class {self.trust!r}")
        if not self.scans:
            raise InvalidInputError("a scan set needs at least one scan")
        dims = {scan.coordinates.shape[1] for scan in self.scans}
        if len(dims) != 1:
            raise InvalidInputError(f"scans disagree on dimension: {sorted(dims)}")
        for scan in self.scans:
            for u in scan.members:
                if not 0 <= u < self.vertex_count:
                    raise InvalidInputError(f"scan vertex {u} out of range")
        object.__setattr__(self, "scans", tuple(self.scans))

    @property
    def dim(self) -> int:
        return self.scans[0].coordinates.shape[1]

    def hypergraph(self) -> Hypergraph:
        """The hypergraph whose hyperedges are the scanned vertex sets."""
        return Hypergraph.from_hyperedges(
            self.vertex_count, [scan.members for scan in self.scans]
        )

    def covered_vertices(self) -> set[int]:
        covered: set[int] = set()
        for scan in self.scans:
            covered.update(scan.members)
        return covered


@dataclass(frozen=True, eq=False)
class Registration:
    """A recovered configuration and the class of its residual indeterminacy.

    ``diagnostics`` holds the affinity corank, spectral margins of the rank
    decision, and per-scan best-fit residuals (relative to the configuration
    diameter).
    """

    config: np.ndarray
    gauge: str
    diagnostics: dict

    def __post_init__(self):
        config = np.array(self.config, dtype=float)
        config.flags.writeable = False
        object.__setattr__(self, "config", config)


def best_fit_affine(
    source: np.ndarray, target: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """Least-squares affine map source -> target; returns (A, b, max error)."""
    source = np.asarray(source, dtype=float)
    target = np.asarray(target, dtype=float)
    ones = np.ones((source.shape[0], 1))
    design = np.hstack([source, ones])
    solution, *_ = np.linalg.lstsq(design, target, rcond=None)
    a = solution[:-1].T
    b = solution[-1]
    mapped = source @ a.T + b
    error = float(np.linalg.norm(mapped - target, axis=1).max())
    return a, b, error


def best_fit_euclidean(
    source: np.ndarray, target: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """Best rigid motion (orthogonal map + shift) source -> target.

    Reflections are allowed: congruence does not distinguish handedness.
    Returns (R, t, max pointwise error).
    """
    source = np.asarray(source, dtype=float)
    target = np.asarray(target, dtype=float)
    src_center = source.mean(axis=0)
    dst_center = target.mean(axis=0)
    cross = (target - dst_center).T @ (source - src_center)
    u, _, vt = np.linalg.svd(cross)
    rotation = u @ vt
    shift = dst_center - rotation @ src_center
    mapped = source @ rotation.T + shift
    error = float(np.linalg.norm(mapped - target, axis=1).max())
    return rotation, shift, error


def _assembled_affinity(scan_set: ScanSet, rel_tol: float) -> AffinityMatrix:
    """Affinity rows computed scan-by-scan in local charts."""
    v = scan_set.vertex_count
    rows: list[np.ndarray] = []
    provenance: list[int] = []
    for index, scan in enumerate(scan_set.scans):
        lift = np.vstack([np.ones(len(scan.members)), scan.coordinates.T])
        kernel = numkernel.numerical_kernel(lift, rel_tol)
        for col in range(kernel.dimension):
            row = np.zeros(v)
            row[list(scan.members)] = kernel.basis[:, col]
            rows.append(row)
            provenance.append(index)
    matrix = np.array(rows) if rows else np.zeros((0, v))
    return AffinityMatrix(matrix, tuple(provenance), strong=True)


def _configuration_from_kernel(basis: np.ndarray, d: int) -> np.ndarray:
    """Deterministic gauge fix: drop the ones direction, SVD, fix signs."""
    v = basis.shape[0]
    deflated = basis - np.outer(np.ones(v), basis.mean(axis=0))
    left, _, _ = np.linalg.svd(deflated, full_matrices=False)
    config = left[:, :d]
    for axis in range(d):
        anchor = int(np.argmax(np.abs(config[:, axis])))
        if config[anchor, axis] < 0:
            config[:, axis] = -config[:, axis]
    return config - config[0]


def _diameter(points: np.ndarray) -> float:
    spread = points.max(axis=0) - points.min(axis=0)
    return float(np.linalg.norm(spread))


def _scan_residuals(
    scan_set: ScanSet, config: np.ndarray, gauge: str
) -> list[float]:
    fit = best_fit_euclidean if gauge == EUCLIDEAN else best_fit_affine
    scale = max(_diameter(config), 1e-300)
    residuals = []
    for scan in scan_set.scans:
        members = list(scan.members)
        _, _, error = fit(scan.coordinates, config[members])
        residuals.append(error / scale)
    return residuals


def affine_register(scan_set: ScanSet, rel_tol: float = DEFAULT_REL_TOL) -> Registration:
    """Recover the configuration up to one global affine transform.

    Assembles the strong affinity matrix from the local charts and reads the
    configuration off its (d+1)-dimensional kernel. A corank above d+1 means
    the scan hypergraph is not affinely rigid; a corank below d+1 means the
    scans are inconsistent beyond ``rel_tol`` (raise the tolerance above the
    noise floor for noisy charts).
    """
    v, d = scan_set.vertex_count, scan_set.dim
    missing = set(range(v)) - scan_set.covered_vertices()
    if missing:
        raise InvalidInputError(f"vertices {sorted(missing)} appear in no scan")
    if v < d + 1:
        raise InvalidInputError(f"need at least d+1 = {d + 1} vertices, got {v}")
    affinity = _assembled_affinity(scan_set, rel_tol)
    kernel = numkernel.numerical_kernel(affinity.matrix, rel_tol)
    corank = kernel.dimension
    if corank > d + 1:
        raise NotAffinelyRigidError(corank, d + 1)
    if corank < d + 1:
        raise InconsistentScansError(
            f"affinity corank {corank} fell below d+1 = {d + 1}: scan noise "
            f"exceeds rel_tol {rel_tol:g}"
        )
    config = _configuration_from_kernel(kernel.basis, d)
    singulars = np.linalg.svd(affinity.matrix, compute_uv=False)
    rank = v - corank
    diagnostics = {
        "corank": corank,
        "rank_margin": float(singulars[rank - 1] / singulars[0]) if rank else 1.0,
        "kernel_gap": float(singulars[rank] / singulars[0])
        if rank < len(singulars)
        else 0.0,
        "scan_residuals": _scan_residuals(scan_set, config, AFFINE),
    }
    return Registration(config, AFFINE, diagnostics)


def _symmetric_from_packed(packed: np.ndarray, d: int) -> np.ndarray:
    gram = np.zeros((d, d))
    gram[np.diag_indices(d)] = packed[:d]
    position = d
    for i in range(d):
        for j in range(i + 1, d):
            gram[i, j] = gram[j, i] = packed[position]
            position += 1
    return gram


def remove_affine(
    registration: Registration,
    lengths: Iterable[tuple[int, int, float]],
    rel_tol: float = DEFAULT_REL_TOL,
) -> Registration:
    """Upgrade an affine-gauge configuration to a Euclidean-gauge one.

    Fits a symmetric Gram matrix G so that the recovered directions reproduce
    the measured squared lengths, then applies a Cholesky-type factor of G.
    The fit is unique exactly when the measured directions do not lie on a
    conic at infinity; how far they stay from one is reported as the
    ``conic_margin`` diagnostic (relative smallest singular value of the
    monomial system — no guarantee beyond that is attempted for noisy
    near-degenerate data).
    """
    if registration.gauge != AFFINE:
        raise InvalidInputError("remove_affine expects an affine-gauge registration")
    config = registration.config
    v, d = config.shape
    constraints = []
    for u, w, squared in lengths:
        u, w = int(u), int(w)
        if not (0 <= u < v and 0 <= w < v) or u == w:
            raise InvalidInputError(f"bad length pair ({u}, {w})")
        if not np.isfinite(squared) or squared <= 0:
            raise InvalidInputError(f"squared length for ({u}, {w}) must be positive")
        constraints.append((u, w, float(squared)))
    if not constraints:
        raise InvalidInputError("no length constraints given")

    pairs = sorted({(min(u, w), max(u, w)) for u, w, _ in constraints})
    gamma = Graph.from_edges(v, pairs)
    if conic_at_infinity_test(Framework(gamma, config), rel_tol):
        raise NonUniqueTransformError(
            "measured directions lie on a conic at infinity; the Gram fit "
            "is not unique"
        )

    directions = np.array([config[u] - config[w] for u, w, _ in constraints])
    design = _direction_monomials(directions)
    target = np.array([squared for _, _, squared in constraints])
    monomial_spectrum = np.linalg.svd(design, compute_uv=False)
    conic_margin = float(monomial_spectrum[-1] / monomial_spectrum[0])
    packed = numkernel.least_squares(design, target)
    gram = _symmetric_from_packed(packed, d)
    factor = numkernel.psd_cholesky(gram)
    if factor is None:
        raise InconsistentLengthsError(
            "fitted Gram matrix is not positive semidefinite; measured "
            "lengths are mutually inconsistent"
        )
    upgraded = config @ factor
    achieved = np.array(
        [np.sum((upgraded[u] - upgraded[w]) ** 2) for u, w, _ in constraints]
    )
    diagnostics = dict(registration.diagnostics)
    diagnostics["length_error"] = float((np.abs(achieved - target) / target).max())
    diagnostics["conic_margin"] = conic_margin
    return Registration(upgraded, EUCLIDEAN, diagnostics)


def euclidean_register(
    scan_set: ScanSet, rel_tol: float = DEFAULT_REL_TOL
) -> Registration:
    """Affine registration followed by length-based gauge removal.

    Requires metrically trustworthy charts; every pairwise distance inside
    every scan becomes a constraint for the Gram fit.
    """
    if scan_set.trust != EUCLIDEAN:
        raise InvalidInputError(
            "euclidean_register needs a scan set with euclidean trust"
        )
    affine = affine_register(scan_set, rel_tol)
    lengths: list[tuple[int, int, float]] = []
    for scan in scan_set.scans:
        members = scan.members
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                squared = float(
                    np.sum((scan.coordinates[a] - scan.coordinates[b]) ** 2)
                )
                lengths.append((members[a], members[b], squared))
    upgraded = remove_affine(affine, lengths, rel_tol)
    diagnostics = dict(upgraded.diagnostics)
    diagnostics["scan_residuals"] = _scan_residuals(
        scan_set, upgraded.config, EUCLIDEAN
    )
    return Registration(upgraded.config, EUCLIDEAN, diagnostics)


def synthetic_scan_set(
    framework: Framework,
    trust: str = AFFINE,
    seed: int | None = None,
    noise: float = 0.0,
) -> ScanSet:
    """Scans of a known framework, each in a random private chart.

    Affine trust applies a random invertible linear map plus shift per scan;
    euclidean trust applies a random orthogonal map plus shift. ``noise``
    adds centered gaussian error of that size relative to the chart diameter.
    """
    if trust not in (AFFINE, EUCLIDEAN):
        raise InvalidInputError(f"unknown trust class {trust!r}")
    theta = as_hypergraph(framework.structure)
    d = framework.dim
    rng = np.random.default_rng(seed)
    scans = []
    for h in theta.hyperedges:
        members = tuple(sorted(h))
        chart = framework.coordinates[list(members)].copy()
        if trust == AFFINE:
            while True:
                a = rng.standard_normal((d, d))
                if abs(np.linalg.det(a)) > 0.1:
                    break
        else:
            a, _ = np.linalg.qr(rng.standard_normal((d, d)))
        chart = chart @ a.T + rng.standard_normal(d)
        if noise > 0:
            chart = chart + noise * max(_diameter(chart), 1e-300) * rng.standard_normal(
                chart.shape
            )
        scans.append(Scan(members, chart))
    return ScanSet(framework.vertex_count, tuple(scans), trust)
