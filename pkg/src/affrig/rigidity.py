"""Affinity-matrix rank tests, equilibrium stresses, and rigidity certificates.

The central object is the strong affinity matrix of a framework: one block of
rows per hyperedge, spanning every affine relation among that hyperedge's
points. A framework whose configuration affinely spans R^d is affinely rigid
exactly when this matrix has corank d+1 (the kernel then reduces to the span
of the all-ones vector and the d coordinate vectors). Everything else here
is built around that rank test: a randomized exact version over a large prime
field, stress-matrix constructions that certify the neighborhood variant
cheaply, and one-sided certificates of universal rigidity.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

import numpy as np

from . import numkernel
from .errors import (
    DegenerateInstanceError,
    ImproperFrameworkError,
    InvalidInputError,
    UnsupportedInstanceError,
)
from .hypergraph import (
    Graph,
    Hypergraph,
    as_hypergraph,
    body_graph,
    is_k_vertex_connected,
    neighborhood_hypergraph,
    squared_graph,
)
from .numkernel import DEFAULT_PRIME, DEFAULT_REL_TOL

logger = logging.getLogger(__name__)

RIGID = "rigid"
FLEXIBLE = "flexible"
INCONCLUSIVE = "inconclusive"

AFFINE_ROUTE = "affine-rigidity"
PSD_ROUTE = "psd-stress"


@dataclass(frozen=True, eq=False)
class Framework:
    """A combinatorial structure together with a point per vertex.

    ``coordinates`` is a (vertex_count, dim) array; the ambient dimension is
    read off its column count.
    """

    structure: Graph | Hypergraph
    coordinates: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coordinates, dtype=float)
        if coords.ndim != 2:
            raise InvalidInputError(
                f"coordinates must be a 2-d array, got shape {coords.shape}"
            )
        if coords.shape[0] != self.structure.vertex_count:
            raise InvalidInputError(
                f"{self.structure.vertex_count} vertices but "
                f"{coords.shape[0]} coordinate rows"
            )
        if coords.shape[1] < 1:
            raise InvalidInputError("ambient dimension must be positive")
        if not np.all(np.isfinite(coords)):
            raise InvalidInputError("coordinates contain non-finite entries")
        coords.flags.writeable = False
        object.__setattr__(self, "coordinates", coords)

    @property
    def dim(self) -> int:
        return self.coordinates.shape[1]

    @property
    def vertex_count(self) -> int:
        return self.structure.vertex_count


@dataclass(frozen=True, eq=False)
class AffinityMatrix:
    """Rows of affine relations, one block per hyperedge, over v columns.

    ``row_provenance[r]`` is the index of the hyperedge that produced row r.
    The ``strong`` flag records that each block spans *all* relations of its
    hyperedge.
    """

    matrix: np.ndarray
    row_provenance: tuple[int, ...]
    strong: bool


@dataclass(frozen=True, eq=False)
class StressMatrix:
    """v×v equilibrium stress: edge-sparse, zero row sums, annihilates coords.

    ``zero_rows`` lists vertices whose row came out identically zero (too few
    neighbors to admit a relation).
    """

    matrix: np.ndarray
    symmetric: bool
    zero_rows: tuple[int, ...] = ()


@dataclass(frozen=True)
class RigidityVerdict:
    verdict: str
    corank: int
    certificate: str
    one_sided: bool


@dataclass(frozen=True, eq=False)
class UniversalRigidityResult:
    """One-sided outcome: ``certified`` true or nothing (never a refutation)."""

    certified: bool
    route: str
    certificate: str
    target: str | None = None
    stress: StressMatrix | None = None


def affine_span_dimension(coordinates, rel_tol: float = DEFAULT_REL_TOL) -> int:
    """Dimension of the affine span of a point set (rank of centered coords)."""
    coords = np.asarray(coordinates, dtype=float)
    if coords.shape[0] == 0:
        return -1
    centered = coords - coords.mean(axis=0)
    return numkernel.numerical_rank(centered, rel_tol)


def _lift(coords: np.ndarray) -> np.ndarray:
    """The (d+1)×k matrix [ones; coordinates transposed] of a point list."""
    return np.vstack([np.ones(coords.shape[0]), coords.T])


def strong_affinity_matrix(
    framework: Framework, rel_tol: float = DEFAULT_REL_TOL
) -> AffinityMatrix:
    """All affine relations of every hyperedge, scattered into v columns.

    For a hyperedge on points q_1..q_k, the relations are the vectors a with
    sum(a) = 0 and sum(a_i q_i) = 0, i.e. the kernel of the (d+1)×k lift
    [ones; coords]. Hyperedges with affinely independent points contribute
    nothing. Rows are unit norm (they come from an orthonormal kernel basis).
    """
    theta = as_hypergraph(framework.structure)
    v, d = framework.vertex_count, framework.dim
    if v < d + 1:
        raise UnsupportedInstanceError(
            f"need at least d+1 = {d + 1} vertices, got {v}"
        )
    rows: list[np.ndarray] = []
    provenance: list[int] = []
    for index, h in enumerate(theta.hyperedges):
        members = sorted(h)
        kernel = numkernel.numerical_kernel(
            _lift(framework.coordinates[members]), rel_tol
        )
        for col in range(kernel.dimension):
            row = np.zeros(v)
            row[members] = kernel.basis[:, col]
            rows.append(row)
            provenance.append(index)
    matrix = np.array(rows) if rows else np.zeros((0, v))
    return AffinityMatrix(matrix, tuple(provenance), strong=True)


def affinity_corank(
    affinity: AffinityMatrix, rel_tol: float = DEFAULT_REL_TOL
) -> int:
    """Kernel dimension of an affinity matrix over its v columns."""
    v = affinity.matrix.shape[1]
    return v - numkernel.numerical_rank(affinity.matrix, rel_tol)


def _require_proper(framework: Framework, rel_tol: float) -> None:
    v, d = framework.vertex_count, framework.dim
    if v < d + 1:
        raise UnsupportedInstanceError(
            f"need at least d+1 = {d + 1} vertices, got {v}"
        )
    span = affine_span_dimension(framework.coordinates, rel_tol)
    if span < d:
        raise ImproperFrameworkError(span, d)


def affine_rigidity_test(
    framework: Framework, rel_tol: float = DEFAULT_REL_TOL
) -> RigidityVerdict:
    """Decide affine rigidity of a proper framework by the corank test.

    Corank d+1 means the kernel is exactly the span of {ones, coordinate
    axes}, so every affinely-compatible configuration is an affine image of
    this one: rigid. Corank above d+1 exhibits an extra kernel direction:
    flexible. Corank below d+1 cannot happen for proper frameworks.
    """
    _require_proper(framework, rel_tol)
    v, d = framework.vertex_count, framework.dim
    affinity = strong_affinity_matrix(framework, rel_tol)
    corank = affinity_corank(affinity, rel_tol)
    assert corank >= d + 1, (
        f"corank {corank} below d+1 = {d + 1} on a proper framework"
    )
    verdict = RIGID if corank == d + 1 else FLEXIBLE
    certificate = (
        f"strong affinity matrix {affinity.matrix.shape[0]}x{v}, "
        f"rank {v - corank}, relative cutoff {rel_tol:g}"
    )
    return RigidityVerdict(verdict, corank, certificate, one_sided=False)


def field_affinity_corank(
    structure: Graph | Hypergraph,
    d: int,
    coords: list[list[int]],
    q: int = DEFAULT_PRIME,
) -> int:
    """Corank of the strong affinity matrix over F_q, built exactly.

    ``coords`` holds one length-d integer tuple per vertex; entries may be
    arbitrary integers and are reduced into the field.
    """
    theta = as_hypergraph(structure)
    if d < 1:
        raise InvalidInputError("dimension must be positive")
    v = theta.vertex_count
    if len(coords) != v or any(len(point) != d for point in coords):
        raise InvalidInputError(f"need {v} integer points of length {d}")
    rows: list[list[int]] = []
    for h in theta.hyperedges:
        members = sorted(h)
        lift = [[1] * len(members)] + [
            [coords[u][axis] for u in members] for axis in range(d)
        ]
        for vec in numkernel.prime_field_nullspace(
            numkernel.PrimeFieldMatrix.from_integers(lift, q)
        ):
            row = [0] * v
            for value, u in zip(vec, members):
                row[u] = value
            rows.append(row)
    if not rows:
        return v
    return v - numkernel.prime_field_rank(
        numkernel.PrimeFieldMatrix.from_integers(rows, q)
    )


def generic_affine_rigidity_test(
    structure: Graph | Hypergraph,
    d: int,
    trials: int = 3,
    seed: int | None = None,
    prime: int = DEFAULT_PRIME,
    randomize_prime: bool = False,
) -> RigidityVerdict:
    """Decide generic affine rigidity by exact rank tests over a prime field.

    Each trial samples a configuration uniformly over F_q and computes the
    affinity-matrix corank with exact field arithmetic; the minimum over
    trials is reported. Since corank at any configuration only exceeds the
    generic corank, hitting d+1 proves generic rigidity outright; a larger
    minimum means "flexible" up to the chance that every sample was
    degenerate, which is bounded per trial by (a few minor degrees)/q — below
    1e-14 here — so the flexible verdict is flagged one-sided.
    """
    theta = as_hypergraph(structure)
    if d < 1:
        raise InvalidInputError("dimension must be positive")
    if trials < 1:
        raise InvalidInputError("trials must be positive")
    v = theta.vertex_count
    if v < d + 1:
        raise UnsupportedInstanceError(
            f"need at least d+1 = {d + 1} vertices, got {v}"
        )
    rng = random.Random(seed)
    best: int | None = None
    moduli: list[int] = []
    for _ in range(trials):
        q = numkernel.draw_modulus(rng) if randomize_prime else prime
        moduli.append(q)
        while True:
            coords = [[rng.randrange(q) for _ in range(d)] for _ in range(v)]
            span_lift = [[1] * v] + [[coords[u][axis] for u in range(v)] for axis in range(d)]
            full = numkernel.prime_field_rank(
                numkernel.PrimeFieldMatrix.from_integers(span_lift, q)
            )
            if full == d + 1:
                break
            logger.debug("resampling improper random configuration")
        corank = field_affinity_corank(theta, d, coords, q)
        assert corank >= d + 1
        best = corank if best is None else min(best, corank)
        if best == d + 1:
            break
    assert best is not None
    q_text = (
        f"q in {sorted(set(moduli))}" if randomize_prime else f"q = {moduli[0]}"
    )
    if best == d + 1:
        certificate = f"affinity corank {best} over F_q ({q_text}); exact witness"
        return RigidityVerdict(RIGID, best, certificate, one_sided=False)
    certificate = (
        f"minimum affinity corank {best} over F_q ({q_text}) in "
        f"{len(moduli)} trials"
    )
    return RigidityVerdict(FLEXIBLE, best, certificate, one_sided=True)


def choose_exceptional(gamma: Graph, d: int) -> tuple[int, ...]:
    """The d+1 pinned vertices: highest degree first, ties by index."""
    if gamma.vertex_count < d + 1:
        raise UnsupportedInstanceError(
            f"need at least d+1 = {d + 1} vertices, got {gamma.vertex_count}"
        )
    ranked = sorted(range(gamma.vertex_count), key=lambda u: (-gamma.degree(u), u))
    return tuple(sorted(ranked[: d + 1]))


def _perturbed_simplex(d: int, rng: np.random.Generator) -> np.ndarray:
    """d+1 points in R^d: a unit-edge regular simplex plus generic noise."""
    corners = np.eye(d + 1) - 1.0 / (d + 1)
    _, _, vt = np.linalg.svd(corners, full_matrices=False)
    simplex = corners @ vt[:d].T
    simplex /= np.linalg.norm(simplex[0] - simplex[1])
    return simplex + 0.05 * rng.standard_normal(simplex.shape)


def _barycentric_margin(
    point: np.ndarray, hull_points: np.ndarray
) -> tuple[float, np.ndarray | None]:
    """Best lower bound on barycentric coordinates of point in hull_points.

    Solves max t s.t. sum(l_j h_j) = point, sum(l_j) = 1, l_j >= t. A positive
    optimum exhibits the point in the relative interior of the hull; an
    infeasible program means the point is off the hull's affine span.
    """
    from scipy.optimize import linprog

    k, d = hull_points.shape
    cost = np.zeros(k + 1)
    cost[k] = -1.0
    a_eq = np.zeros((d + 1, k + 1))
    a_eq[:d, :k] = hull_points.T
    a_eq[d, :k] = 1.0
    b_eq = np.concatenate([point, [1.0]])
    a_ub = np.zeros((k, k + 1))
    a_ub[:, :k] = -np.eye(k)
    a_ub[:, k] = 1.0
    result = linprog(
        cost,
        A_ub=a_ub,
        b_ub=np.zeros(k),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=[(None, None)] * (k + 1),
        method="highs",
    )
    if not result.success:
        return -np.inf, None
    return -result.fun, result.x[:k]


def rubber_band_embedding(
    gamma: Graph,
    d: int,
    exceptional: tuple[int, ...] | str = "auto",
    seed: int | None = None,
    weights: dict[tuple[int, int], float] | None = None,
    jitter: float = 1e-6,
) -> Framework:
    """Pin d+1 vertices on a perturbed simplex; relax the rest on springs.

    Every non-exceptional vertex lands at the weighted average of its
    neighbors (positive random weights unless given), then the whole
    configuration is nudged by ``jitter`` times its diameter, rejecting
    nudges that push some non-exceptional vertex out of the relative interior
    of its neighbors' convex hull. ``jitter=0`` returns the exact relaxation.
    """
    if d < 1:
        raise InvalidInputError("dimension must be positive")
    if not isinstance(gamma, Graph):
        raise InvalidInputError("rubber-band relaxation is defined on graphs")
    v = gamma.vertex_count
    if v < d + 1:
        raise UnsupportedInstanceError(
            f"need at least d+1 = {d + 1} vertices, got {v}"
        )
    if exceptional == "auto":
        pinned = choose_exceptional(gamma, d)
    else:
        pinned = tuple(int(u) for u in exceptional)
        if len(set(pinned)) != d + 1:
            raise InvalidInputError(
                f"exceptional set must contain d+1 = {d + 1} distinct vertices"
            )
        for u in pinned:
            if not 0 <= u < v:
                raise InvalidInputError(f"exceptional vertex {u} out of range")
    if not is_k_vertex_connected(gamma, d + 1):
        logger.warning(
            "graph is not %d-connected; rubber-band output may be degenerate",
            d + 1,
        )
    rng = np.random.default_rng(seed)
    pins = _perturbed_simplex(d, rng)

    if weights is None:
        weight_of = {e: float(rng.uniform(0.5, 1.5)) for e in gamma.sorted_edges()}
    else:
        weight_of = {}
        for e in gamma.sorted_edges():
            u, w = e
            value = weights.get(e, weights.get((w, u)))
            if value is None:
                raise InvalidInputError(f"missing weight for edge {e}")
            if not value > 0:
                raise InvalidInputError(f"weight for edge {e} must be positive")
            weight_of[e] = float(value)

    interior = [u for u in range(v) if u not in set(pinned)]
    reached = set(pinned)
    frontier = list(pinned)
    while frontier:
        x = frontier.pop()
        for y in gamma.neighbors(x):
            if y not in reached:
                reached.add(y)
                frontier.append(y)
    stranded = [u for u in interior if u not in reached]
    if stranded:
        raise DegenerateInstanceError(
            f"vertices {stranded} are disconnected from the pinned set"
        )

    laplacian = np.zeros((v, v))
    for (u, w), omega in weight_of.items():
        laplacian[u, u] += omega
        laplacian[w, w] += omega
        laplacian[u, w] -= omega
        laplacian[w, u] -= omega
    coords = np.zeros((v, d))
    coords[list(pinned)] = pins
    if interior:
        sub = laplacian[np.ix_(interior, interior)]
        rhs = -laplacian[np.ix_(interior, list(pinned))] @ pins
        try:
            coords[interior] = np.linalg.solve(sub, rhs)
        except np.linalg.LinAlgError as exc:
            raise DegenerateInstanceError(f"singular rubber-band system: {exc}")

    if jitter == 0.0 or not interior:
        return Framework(gamma, coords)

    diameter = max(
        float(np.linalg.norm(coords[a] - coords[b]))
        for a in range(v)
        for b in range(a + 1, v)
    )
    for attempt in range(10):
        nudged = coords + jitter * diameter * rng.standard_normal(coords.shape)
        margins = (
            _barycentric_margin(nudged[u], nudged[list(gamma.neighbors(u))])[0]
            for u in interior
        )
        if all(margin > 1e-9 for margin in margins):
            return Framework(gamma, nudged)
        logger.debug("jitter attempt %d broke convex containment", attempt + 1)
    raise DegenerateInstanceError(
        "could not keep every free vertex inside its neighbors' hull; "
        "the graph is too sparse for a generic rubber-band configuration"
    )


def positive_stress(
    framework: Framework, exceptional: tuple[int, ...]
) -> StressMatrix:
    """Stress with positive off-diagonal rows at every non-pinned vertex.

    Each such vertex must lie in the relative interior of its neighbors'
    hull (as rubber-band outputs do); its row holds barycentric coordinates
    there, with -1 on the diagonal. Pinned rows are zero.
    """
    gamma = framework.structure
    if not isinstance(gamma, Graph):
        raise InvalidInputError("positive stresses are defined on graphs")
    v = framework.vertex_count
    pinned = set(exceptional)
    omega = np.zeros((v, v))
    for u in range(v):
        if u in pinned:
            continue
        nbrs = list(gamma.neighbors(u))
        margin, weights = _barycentric_margin(
            framework.coordinates[u], framework.coordinates[nbrs]
        )
        if weights is None or margin <= 0:
            raise DegenerateInstanceError(
                f"vertex {u} is not interior to its neighbors' hull"
            )
        omega[u, nbrs] = weights
        omega[u, u] = -1.0
    return StressMatrix(omega, symmetric=False, zero_rows=tuple(sorted(pinned)))


def nonsymmetric_stress(
    framework: Framework,
    seed=None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> StressMatrix:
    """Random equilibrium stress, one independent row per vertex.

    Row u is a uniformly random unit element of the kernel of the d×deg(u)
    matrix of edge vectors out of u, with the diagonal set to minus the row
    sum; vertices whose edge vectors are linearly independent get a zero row.
    """
    gamma = framework.structure
    if not isinstance(gamma, Graph):
        raise InvalidInputError("stress construction is defined on graphs")
    rng = np.random.default_rng(seed)
    v = framework.vertex_count
    omega = np.zeros((v, v))
    zero_rows: list[int] = []
    for u in range(v):
        nbrs = list(gamma.neighbors(u))
        if not nbrs:
            zero_rows.append(u)
            continue
        edge_vectors = (framework.coordinates[nbrs] - framework.coordinates[u]).T
        kernel = numkernel.numerical_kernel(edge_vectors, rel_tol)
        if kernel.dimension == 0:
            zero_rows.append(u)
            continue
        row = kernel.basis @ rng.standard_normal(kernel.dimension)
        row /= np.linalg.norm(row)
        omega[u, nbrs] = row
        omega[u, u] = -row.sum()
    if zero_rows:
        logger.debug("zero stress rows at vertices %s", zero_rows)
    return StressMatrix(omega, symmetric=False, zero_rows=tuple(zero_rows))


def stress_corank(stress: StressMatrix, rel_tol: float = DEFAULT_REL_TOL) -> int:
    """Kernel dimension of a stress matrix."""
    v = stress.matrix.shape[1]
    return v - numkernel.numerical_rank(stress.matrix, rel_tol)


def neighborhood_affine_rigidity_test(
    framework: Framework,
    rel_tol: float = DEFAULT_REL_TOL,
    seed: int | None = None,
) -> RigidityVerdict:
    """Affine rigidity of (p, N(Γ)): stress shortcut first, rank test second.

    Stage 1 draws one random non-symmetric stress; corank d+1 certifies
    rigidity immediately. Otherwise stage 2 stacks d+2 independent stresses
    with the strong affinity matrix of the neighborhood hypergraph, whose
    corank settles the verdict either way.
    """
    gamma = framework.structure
    if not isinstance(gamma, Graph):
        raise InvalidInputError("neighborhood rigidity is defined on graphs")
    _require_proper(framework, rel_tol)
    v, d = framework.vertex_count, framework.dim
    rng = np.random.default_rng(seed)

    stage1 = nonsymmetric_stress(framework, rng, rel_tol)
    corank1 = stress_corank(stage1, rel_tol)
    if corank1 == d + 1:
        certificate = (
            f"non-symmetric equilibrium stress of corank {corank1} (stage 1)"
        )
        return RigidityVerdict(RIGID, corank1, certificate, one_sided=False)

    stacked = [nonsymmetric_stress(framework, rng, rel_tol).matrix for _ in range(d + 2)]
    neighborhood = Framework(neighborhood_hypergraph(gamma), framework.coordinates)
    affinity = strong_affinity_matrix(neighborhood, rel_tol)
    combined = np.vstack(stacked + [affinity.matrix])
    corank = affinity_corank(affinity, rel_tol)
    combined_corank = v - numkernel.numerical_rank(combined, rel_tol)
    if combined_corank != corank:
        logger.warning(
            "stacked stresses disagree with affinity corank (%d vs %d)",
            combined_corank,
            corank,
        )
    assert corank >= d + 1
    verdict = RIGID if corank == d + 1 else FLEXIBLE
    certificate = (
        f"stage-1 stress corank {corank1}; neighborhood affinity matrix "
        f"{affinity.matrix.shape[0]}x{v} with corank {corank} (stage 2)"
    )
    return RigidityVerdict(verdict, corank, certificate, one_sided=False)


def _direction_monomials(directions: np.ndarray) -> np.ndarray:
    """Rows of squares and doubled cross terms, one per direction."""
    count, d = directions.shape
    columns = [directions[:, i] * directions[:, i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            columns.append(2.0 * directions[:, i] * directions[:, j])
    return np.column_stack(columns) if columns else np.zeros((count, 0))


def conic_at_infinity_test(
    framework: Framework, rel_tol: float = DEFAULT_REL_TOL
) -> bool:
    """Whether some nonzero symmetric Q annihilates every edge direction.

    Hypergraph frameworks are tested on their body graph. If any hyperedge's
    points affinely span R^d, its pairwise directions already rule every
    conic out, so the answer is false without building the monomial system.
    """
    theta = as_hypergraph(framework.structure)
    d = framework.dim
    for h in theta.hyperedges:
        members = sorted(h)
        if len(members) >= d + 1:
            if affine_span_dimension(framework.coordinates[members], rel_tol) == d:
                return False
    edges = body_graph(theta).sorted_edges()
    unknowns = d * (d + 1) // 2
    if not edges:
        return True
    directions = np.array(
        [framework.coordinates[u] - framework.coordinates[w] for u, w in edges]
    )
    monomials = _direction_monomials(directions)
    if unknowns == 0:
        return True
    return numkernel.numerical_kernel(monomials, rel_tol).dimension > 0


def universal_rigidity_certificate(
    framework: Framework,
    via: str = AFFINE_ROUTE,
    rel_tol: float = DEFAULT_REL_TOL,
    seed: int | None = None,
) -> UniversalRigidityResult:
    """One-sided certification of universal rigidity.

    The affine route certifies the input framework itself: affinely rigid
    plus body-graph edge directions not on a conic at infinity. The PSD route
    (graph frameworks) turns a corank-(d+1) non-symmetric stress Ω into the
    symmetric PSD stress ΩᵀΩ of rank v-d-1, certifying the framework of the
    squared graph. Failure of either route is reported as inconclusive,
    never as a refutation.
    """
    v, d = framework.vertex_count, framework.dim
    if via == AFFINE_ROUTE:
        try:
            verdict = affine_rigidity_test(framework, rel_tol)
        except (ImproperFrameworkError, UnsupportedInstanceError) as exc:
            return UniversalRigidityResult(
                False, via, f"affine rank test not applicable: {exc}"
            )
        if verdict.verdict != RIGID:
            return UniversalRigidityResult(
                False,
                via,
                f"not affinely rigid (corank {verdict.corank}); "
                "universal rigidity may still hold",
            )
        if conic_at_infinity_test(framework, rel_tol):
            return UniversalRigidityResult(
                False, via, "edge directions lie on a conic at infinity"
            )
        return UniversalRigidityResult(
            True,
            via,
            "affinely rigid (corank d+1) and body-graph edge directions are "
            "not on a conic at infinity",
            target="input framework",
        )
    if via == PSD_ROUTE:
        if not isinstance(framework.structure, Graph):
            raise InvalidInputError("the PSD route is defined on graph frameworks")
        stress = nonsymmetric_stress(framework, seed, rel_tol)
        corank = stress_corank(stress, rel_tol)
        if corank != d + 1:
            return UniversalRigidityResult(
                False, via, f"random stress corank {corank}, need {d + 1}"
            )
        squared = Framework(squared_graph(framework.structure), framework.coordinates)
        if conic_at_infinity_test(squared, rel_tol):
            return UniversalRigidityResult(
                False,
                via,
                "squared-graph edge directions lie on a conic at infinity",
            )
        psd = StressMatrix(stress.matrix.T @ stress.matrix, symmetric=True)
        return UniversalRigidityResult(
            True,
            via,
            f"symmetric PSD stress of rank {v - d - 1} for the squared graph, "
            "whose edge directions avoid every conic at infinity",
            target="squared-graph framework",
            stress=psd,
        )
    raise InvalidInputError(f"unknown route {via!r}")


def affinity_residuals(
    affinity: AffinityMatrix, framework: Framework
) -> dict[str, float]:
    """Worst-case violations of the affinity-matrix contract.

    Returns row-sum residual (rows scaled to unit norm), off-support mass,
    and the relative residual of the lifted coordinate vectors under the
    matrix.
    """
    theta = as_hypergraph(framework.structure)
    matrix = affinity.matrix
    row_sum = 0.0
    off_support = 0.0
    for r in range(matrix.shape[0]):
        row = matrix[r]
        norm = np.linalg.norm(row)
        if norm > 0:
            row_sum = max(row_sum, abs(row.sum()) / norm)
        support = sorted(theta.hyperedges[affinity.row_provenance[r]])
        outside = np.delete(row, support)
        if outside.size:
            off_support = max(off_support, float(np.abs(outside).max()))
    kernel_residual = _kernel_residual(matrix, framework.coordinates)
    return {
        "row_sum": row_sum,
        "off_support": off_support,
        "kernel_residual": kernel_residual,
    }


def _kernel_residual(matrix: np.ndarray, coordinates: np.ndarray) -> float:
    """Relative residual of {ones, coordinate axes} under the matrix."""
    if matrix.shape[0] == 0:
        return 0.0
    scale = np.linalg.norm(matrix, 2)
    if scale == 0:
        return 0.0
    worst = 0.0
    vectors = [np.ones(coordinates.shape[0])] + [
        coordinates[:, axis] for axis in range(coordinates.shape[1])
    ]
    for vec in vectors:
        worst = max(
            worst,
            float(np.linalg.norm(matrix @ vec) / (scale * np.linalg.norm(vec))),
        )
    return worst


def stress_residuals(
    stress: StressMatrix, framework: Framework
) -> dict[str, float]:
    """Worst-case violations of the stress-matrix contract."""
    gamma = framework.structure
    if not isinstance(gamma, Graph):
        raise InvalidInputError("stress residuals are defined on graphs")
    matrix = stress.matrix
    v = framework.vertex_count
    sparsity = 0.0
    for u in range(v):
        for w in range(v):
            if u != w and not gamma.has_edge(u, w):
                sparsity = max(sparsity, abs(float(matrix[u, w])))
    scale = max(float(np.linalg.norm(matrix, 2)), 1e-300)
    row_sum = float(np.abs(matrix.sum(axis=1)).max()) / scale
    kernel_residual = _kernel_residual(matrix, framework.coordinates)
    symmetry = (
        float(np.linalg.norm(matrix - matrix.T, 2)) / scale if stress.symmetric else 0.0
    )
    return {
        "sparsity": sparsity,
        "row_sum": row_sum,
        "kernel_residual": kernel_residual,
        "symmetry": symmetry,
    }
