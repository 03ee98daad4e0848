import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from luob.operators import (HermitianOperator, LocalUnitary, PureStateVector, SpaceShape,
                            apply_local_unitary, haar_unitary, lu_mixture, max_schmidt_rank_in_range,
                            operator_rank, partial_trace, random_local_unitary, schmidt_rank,
                            spectral_decompose, swap_conjugate)
from luob.tolerances import Tolerances, ValidationError


def random_psd(dims, rank, rng):
    n = int(np.prod(dims))
    v = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return HermitianOperator(v @ v.conj().T, dims)


class TestValidation:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            HermitianOperator(np.array([[1, 1], [0, 1]]), (2,))

    def test_rejects_negative(self):
        with pytest.raises(ValidationError, match="semidefinite"):
            HermitianOperator(np.diag([1.0, -1.0]), (2,))

    def test_indefinite_allowed_when_flagged(self):
        H = HermitianOperator(np.diag([1.0, -1.0]), (2,), psd=False)
        assert H.trace() == 0

    def test_shape_mismatch(self):
        with pytest.raises(ValidationError, match="does not match"):
            HermitianOperator(np.eye(3), (2, 2))

    def test_non_normalized_vector(self):
        with pytest.raises(ValidationError, match="normalized"):
            PureStateVector(np.array([1.0, 1.0]), (2,))

    def test_non_unitary_factor(self):
        with pytest.raises(ValidationError, match="unitary"):
            LocalUnitary((np.array([[1, 1], [0, 1]]),))

    def test_bad_dims(self):
        with pytest.raises(ValidationError):
            SpaceShape((2, 0))

    def test_custom_tolerance_loosens_hermiticity(self):
        m = np.array([[1, 1e-8], [0, 1]])
        with pytest.raises(ValidationError):
            HermitianOperator(m, (2,))
        HermitianOperator(m, (2,), tol=Tolerances(herm=1e-6))

    def test_party_parsing(self):
        s = SpaceShape((2, 2, 2))
        assert s.parse_parties("A:B") == (0, 1)
        assert s.parse_parties("AC") == (0, 2)
        assert s.parse_parties([2, 0]) == (0, 2)
        with pytest.raises(ValidationError):
            s.parse_parties("D")


class TestSpectral:
    def test_descending_and_reconstruct(self, rng):
        H = random_psd((2, 3), 4, rng)
        dec = spectral_decompose(H)
        assert np.all(np.diff(dec.eigenvalues) <= 1e-12)
        assert dec.rank == 4
        assert np.max(np.abs(dec.reconstruct() - H.matrix)) < 1e-9 * np.max(np.abs(H.matrix))

    def test_zero_operator_has_rank_zero(self):
        assert operator_rank(HermitianOperator(np.zeros((4, 4)), (2, 2))) == 0

    def test_rank_is_scale_invariant(self, rng):
        H = random_psd((3, 3), 2, rng)
        for c in (1e-8, 1.0, 1e8):
            assert operator_rank(HermitianOperator(c * H.matrix, H.shape)) == 2


class TestSchmidt:
    def test_bell_and_product(self):
        bell = PureStateVector.from_kets((2, 2), {(0, 0): 1, (1, 1): 1})
        prod = PureStateVector.from_kets((2, 2), {(0, 0): 1, (0, 1): 1})
        assert schmidt_rank(bell) == 2
        assert schmidt_rank(prod) == 1

    def test_multipartite_cut(self):
        ghz = PureStateVector.from_kets((2, 2, 2), {(0, 0, 0): 1, (1, 1, 1): 1})
        assert schmidt_rank(ghz, "A:B") == 2
        with pytest.raises(ValidationError):
            schmidt_rank(ghz, "ABC")

    def test_max_in_range_reaches_generic_value(self):
        # span{|00>, |11>} contains the Bell state, so rank 2 is found
        H = HermitianOperator(np.diag([1.0, 0, 0, 1.0]), (2, 2))
        assert max_schmidt_rank_in_range(H) == 2
        assert max_schmidt_rank_in_range(HermitianOperator(np.diag([1.0, 0, 0, 0]), (2, 2))) == 1


class TestLocalUnitaries:
    def test_haar_unitary_is_unitary(self, rng):
        for n in (1, 2, 3, 5):
            u = haar_unitary(n, rng)
            assert np.allclose(u.conj().T @ u, np.eye(n), atol=1e-12)

    def test_random_local_unitary_deterministic(self):
        a = random_local_unitary((2, 3), 7).matrix()
        b = random_local_unitary((2, 3), 7).matrix()
        assert np.array_equal(a, b)

    def test_matrix_is_kron(self, rng):
        U = random_local_unitary((2, 3), rng)
        assert np.allclose(U.matrix(), np.kron(U.factors[0], U.factors[1]))

    def test_swap_brute_force(self, rng):
        H = random_psd((2, 2), 2, rng)
        S = np.zeros((4, 4))
        for i in range(2):
            for j in range(2):
                S[2 * j + i, 2 * i + j] = 1
        assert np.allclose(swap_conjugate(H).matrix, S @ H.matrix @ S.T)
        with pytest.raises(ValidationError):
            swap_conjugate(random_psd((2, 3), 1, rng))

    def test_partial_trace_brute_force(self, rng):
        H = random_psd((2, 3), 3, rng)
        m = H.matrix
        ref_a = np.array([[sum(m[3 * i + k, 3 * j + k] for k in range(3)) for j in range(2)] for i in range(2)])
        ref_b = np.array([[sum(m[3 * k + i, 3 * k + j] for k in range(2)) for j in range(3)] for i in range(3)])
        assert np.allclose(partial_trace(H, 0), ref_a)
        assert np.allclose(partial_trace(H, 1), ref_b)

    def test_mixture_rejects_bad_weights(self, rng):
        H = random_psd((2, 2), 1, rng)
        U = random_local_unitary((2, 2), 1)
        with pytest.raises(ValidationError):
            lu_mixture(H, [(0.3, U), (0.3, U)])
        with pytest.raises(ValidationError):
            lu_mixture(H, [])
        with pytest.raises(ValidationError):
            lu_mixture(H, [(1.0, random_local_unitary((2, 3), 1))])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dims=st.sampled_from([(2, 2), (2, 3), (3, 3), (2, 2, 2)]),
       rank=st.integers(1, 4))
def test_lu_conjugation_preserves_spectrum_and_schmidt(seed, dims, rank):
    rng = np.random.default_rng(seed)
    H = random_psd(dims, rank, rng)
    U = random_local_unitary(dims, rng)
    Hp = apply_local_unitary(H, U)
    ev, evp = spectral_decompose(H).eigenvalues, spectral_decompose(Hp).eigenvalues
    assert np.allclose(ev, evp, atol=1e-9 * ev[0])
    v = spectral_decompose(H).eigenvectors[0]
    w = PureStateVector.normalized(U.matrix() @ v.amplitudes, dims)
    assert schmidt_rank(v) == schmidt_rank(w)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), terms=st.integers(1, 5))
def test_mixture_trace_and_psd(seed, terms):
    rng = np.random.default_rng(seed)
    H = random_psd((2, 3), 3, rng)
    w = rng.random(terms) + 0.01
    w = w / w.sum()
    mix = lu_mixture(H, [(float(p), random_local_unitary((2, 3), rng)) for p in w])
    assert abs(mix.trace() - H.trace()) <= 1e-10 * H.trace()
    ev = np.linalg.eigvalsh(mix.matrix)
    assert ev[0] >= -1e-9 * ev[-1]
