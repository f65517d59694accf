from fractions import Fraction

import numpy as np
import pytest

from affrig.errors import InvalidInputError
from affrig.numkernel import (
    DEFAULT_PRIME,
    PRIME_POOL_60BIT,
    KernelBasis,
    PrimeFieldMatrix,
    is_prime,
    least_squares,
    numerical_kernel,
    numerical_rank,
    prime_field_corank,
    prime_field_nullspace,
    prime_field_rank,
    psd_cholesky,
)


def fraction_rank(rows):
    """Exact rational rank, the reference for everything mod-q."""
    work = [[Fraction(x) for x in row] for row in rows]
    if not work:
        return 0
    rank = 0
    for col in range(len(work[0])):
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * p for x, p in zip(work[r], work[rank])]
        rank += 1
    return rank


class TestNumericalKernel:
    def test_single_row(self):
        k = numerical_kernel([[1.0, -1.0, 0.0]])
        assert k.dimension == 2

    def test_zero_matrix(self):
        k = numerical_kernel(np.zeros((2, 4)))
        assert k.dimension == 4
        np.testing.assert_allclose(k.basis, np.eye(4))

    def test_empty_row_count(self):
        k = numerical_kernel(np.zeros((0, 3)))
        assert k.dimension == 3

    def test_single_hyperedge_affinity(self):
        # One hyperedge containing four generic planar points: its null-space
        # row must annihilate exactly span{1, x, y}, leaving a 3-dim kernel.
        rng = np.random.default_rng(3)
        coords = rng.normal(size=(4, 2))
        lift = np.vstack([np.ones(4), coords.T])
        row_basis = numerical_kernel(lift)
        assert row_basis.dimension == 1
        affinity = row_basis.basis.T
        kernel = numerical_kernel(affinity)
        assert kernel.dimension == 3
        for vec in (np.ones(4), coords[:, 0], coords[:, 1]):
            assert np.linalg.norm(affinity @ vec) <= 1e-9 * np.linalg.norm(affinity)

    def test_basis_orthonormal_and_annihilated(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            rows, cols, inner = rng.integers(1, 9, size=3)
            a = rng.normal(size=(rows, inner)) @ rng.normal(size=(inner, cols))
            k = numerical_kernel(a)
            if k.dimension:
                gram = k.basis.T @ k.basis
                assert np.linalg.norm(gram - np.eye(k.dimension)) <= 1e-10
                image = a @ k.basis
                norm = np.linalg.norm(a, 2)
                assert np.linalg.norm(image, 2) <= k.threshold_used * max(norm, 1e-300)

    def test_rank_plus_kernel_is_cols(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            rows, cols, inner = rng.integers(1, 9, size=3)
            a = rng.normal(size=(rows, inner)) @ rng.normal(size=(inner, cols))
            k = numerical_kernel(a)
            assert numerical_rank(a) + k.dimension == cols
            assert numerical_rank(a) == min(rows, cols, inner)

    def test_scale_invariance(self):
        rng = np.random.default_rng(13)
        a = rng.normal(size=(4, 6)) @ rng.normal(size=(6, 5))
        for scale in (1e-12, 1.0, 1e12):
            assert numerical_kernel(scale * a).dimension == 1

    def test_rejects_bad_tol(self):
        with pytest.raises(InvalidInputError):
            numerical_kernel(np.eye(2), rel_tol=0.0)
        with pytest.raises(InvalidInputError):
            numerical_kernel(np.eye(2), rel_tol=1.5)

    def test_rejects_nan(self):
        with pytest.raises(InvalidInputError):
            numerical_kernel([[1.0, np.nan]])

    def test_result_type(self):
        k = numerical_kernel(np.eye(3))
        assert isinstance(k, KernelBasis)
        assert k.dimension == 0
        assert k.basis.shape == (3, 0)


class TestPrimality:
    def test_known_values(self):
        assert is_prime(2)
        assert is_prime(DEFAULT_PRIME)
        assert not is_prime(1)
        assert not is_prime(2**61 + 1)
        assert not is_prime(3 * 5 * 7)

    def test_pool_members(self):
        assert len(set(PRIME_POOL_60BIT)) == len(PRIME_POOL_60BIT)
        for q in PRIME_POOL_60BIT:
            assert is_prime(q)
            assert q.bit_length() == 60

    def test_against_sieve(self):
        sieve = [True, True] + [True] * 2000
        sieve[0] = sieve[1] = False
        for i in range(2, 45):
            if sieve[i]:
                for j in range(i * i, 2002, i):
                    sieve[j] = False
        for n in range(2002):
            assert is_prime(n) == sieve[n], n


class TestPrimeField:
    def test_identity_rank(self):
        eye = [[1 if i == j else 0 for j in range(5)] for i in range(5)]
        assert prime_field_rank(PrimeFieldMatrix.from_integers(eye)) == 5

    def test_duplicate_row(self):
        m = PrimeFieldMatrix.from_integers([[1, 2, 3], [1, 2, 3], [0, 1, 1]])
        assert prime_field_rank(m) == 2

    def test_random_square_full_rank(self):
        # Uniform entries make singularity a <= 10/q event per trial; over
        # 1000 trials a single failure would be astronomically unlikely.
        rng = np.random.default_rng(17)
        q = DEFAULT_PRIME
        for _ in range(1000):
            rows = [
                [int(x) for x in rng.integers(0, q, size=10, dtype=np.uint64)]
                for _ in range(10)
            ]
            assert prime_field_rank(PrimeFieldMatrix.from_integers(rows, q)) == 10

    def test_matches_rational_rank(self):
        rng = np.random.default_rng(19)
        for _ in range(100):
            rows = int(rng.integers(1, 8))
            cols = int(rng.integers(1, 8))
            m = rng.integers(-1000, 1001, size=(rows, cols))
            if rng.random() < 0.5 and rows > 1:
                m[rows - 1] = m[0] * int(rng.integers(-3, 4))
            expected = fraction_rank(m.tolist())
            got = prime_field_rank(PrimeFieldMatrix.from_integers(m.tolist()))
            assert got == expected

    def test_corank(self):
        m = PrimeFieldMatrix.from_integers([[1, 1, 0], [0, 0, 0]])
        assert prime_field_corank(m) == 2

    def test_nullspace_annihilated(self):
        rng = np.random.default_rng(41)
        q = DEFAULT_PRIME
        for _ in range(25):
            rows = int(rng.integers(1, 7))
            cols = int(rng.integers(1, 7))
            m = PrimeFieldMatrix.from_integers(
                rng.integers(-50, 51, size=(rows, cols)).tolist(), q
            )
            basis = prime_field_nullspace(m)
            assert len(basis) == prime_field_corank(m)
            for vec in basis:
                assert any(vec)
                for row in m.entries:
                    assert sum(a * x for a, x in zip(row, vec)) % q == 0

    def test_nullspace_of_lift(self):
        # Four planar points with one affine dependence: the kernel of the
        # [ones; coords] lift is one-dimensional.
        lift = [[1, 1, 1, 1], [0, 2, 0, 2], [0, 0, 3, 3]]
        basis = prime_field_nullspace(PrimeFieldMatrix.from_integers(lift))
        assert len(basis) == 1

    def test_negative_entries_reduced(self):
        m = PrimeFieldMatrix.from_integers([[-1, 1]])
        assert m.entries[0][0] == DEFAULT_PRIME - 1
        assert prime_field_rank(m) == 1

    def test_rejects_small_modulus(self):
        with pytest.raises(InvalidInputError):
            PrimeFieldMatrix.from_integers([[1]], modulus=10007)

    def test_rejects_composite_modulus(self):
        with pytest.raises(InvalidInputError):
            PrimeFieldMatrix.from_integers([[1]], modulus=2**61 - 3)

    def test_rejects_unreduced_entries(self):
        with pytest.raises(InvalidInputError):
            PrimeFieldMatrix(((DEFAULT_PRIME,),), DEFAULT_PRIME)

    def test_rejects_ragged_rows(self):
        with pytest.raises(InvalidInputError):
            PrimeFieldMatrix(((1, 2), (3,)), DEFAULT_PRIME)


class TestLeastSquares:
    def test_identity(self):
        b = np.array([3.0, -1.0, 2.0])
        np.testing.assert_allclose(least_squares(np.eye(3), b), b)

    def test_overdetermined_consistent(self):
        rng = np.random.default_rng(23)
        a = rng.normal(size=(8, 3))
        x_true = rng.normal(size=3)
        b = a @ x_true
        x = least_squares(a, b)
        assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(b)
        np.testing.assert_allclose(x, x_true, atol=1e-9)

    def test_minimal_norm_on_dependent_columns(self):
        rng = np.random.default_rng(29)
        base = rng.normal(size=(6, 2))
        a = np.hstack([base, base @ rng.normal(size=(2, 3))])
        b = a @ rng.normal(size=5)
        x = least_squares(a, b)
        assert np.linalg.norm(a @ x - b) <= 1e-8 * np.linalg.norm(b)
        np.testing.assert_allclose(x, np.linalg.pinv(a) @ b, atol=1e-9)

    def test_residual_orthogonal_to_columns(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            a = rng.normal(size=(7, 4))
            b = rng.normal(size=7)
            x = least_squares(a, b)
            bound = 1e-8 * np.linalg.norm(a) * np.linalg.norm(b)
            assert np.linalg.norm(a.T @ (a @ x - b)) <= bound

    def test_shape_mismatch(self):
        with pytest.raises(InvalidInputError):
            least_squares(np.eye(3), np.ones(2))


class TestPsdCholesky:
    def test_identity(self):
        np.testing.assert_allclose(psd_cholesky(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        np.testing.assert_allclose(
            psd_cholesky([[4.0, 0.0], [0.0, 9.0]]), [[2.0, 0.0], [0.0, 3.0]]
        )

    def test_round_trip_random_factors(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            d = int(rng.integers(1, 7))
            factor = np.tril(rng.normal(size=(d, d)))
            g = factor @ factor.T
            lower = psd_cholesky(g)
            assert lower is not None
            assert np.allclose(lower, np.tril(lower))
            norm = max(np.linalg.norm(g), 1e-300)
            assert np.linalg.norm(lower @ lower.T - g) <= 1e-8 * norm

    def test_singular_psd(self):
        u = np.array([[1.0, 2.0, -1.0]])
        g = u.T @ u
        lower = psd_cholesky(g)
        assert lower is not None
        assert np.linalg.norm(lower @ lower.T - g) <= 1e-8 * np.linalg.norm(g)

    def test_slightly_indefinite_is_clipped(self):
        g = np.diag([1.0, -1e-9])
        lower = psd_cholesky(g)
        assert lower is not None
        clipped = np.diag([1.0, 0.0])
        assert np.linalg.norm(lower @ lower.T - clipped) <= 1e-8

    def test_decisively_indefinite(self):
        assert psd_cholesky(np.diag([1.0, -0.5])) is None

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidInputError):
            psd_cholesky([[1.0, 2.0], [0.0, 1.0]])

    def test_rejects_nonsquare(self):
        with pytest.raises(InvalidInputError):
            psd_cholesky(np.ones((2, 3)))
