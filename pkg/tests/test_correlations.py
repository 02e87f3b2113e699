import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwent import correlations as corr
from hwent.errors import InputError
from hwent.states import DensityMatrix, ghz, kron, maximally_mixed, purity, random_mixed, random_pure

from conftest import bell

MIXED_DIMS = [(2, 2), (2, 3), (3, 3), (2, 2, 2), (2, 2, 3), (2, 2, 2, 2)]
PAIR_DIMS = [(2, 2), (2, 3), (3, 3), (2, 4)]
TRIPLE_DIMS = [(2, 2, 2), (2, 2, 4), (2, 3, 4), (3, 3, 3)]
N_PURE = 1000


def test_qubit_ground_state_vector():
    data = corr.extract(DensityMatrix(np.diag([1.0, 0.0]).astype(complex), (2,)))
    np.testing.assert_allclose(data.vector([0]), [0, 1, 0], atol=1e-15)


def test_maximally_mixed_has_no_correlations():
    data = corr.extract(maximally_mixed((2, 2, 2)))
    for s in corr.subsets(3):
        assert corr.norm_sq(data, s) < 1e-28


def test_ghz3_full_norm():
    assert corr.norm_sq(corr.extract(ghz(3)), (0, 1, 2)) == pytest.approx(4.0, abs=1e-10)


def test_bell_saturates_pair_bound():
    assert corr.norm_sq(corr.extract(bell()), (0, 1)) == pytest.approx(3.0, abs=1e-10)
    assert corr.pair_norm_bound(2, 2) == pytest.approx(3.0, abs=1e-15)
    assert corr.triple_norm_bound(2, 2, 2) == pytest.approx(4.0, abs=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 7])
def test_pure_single_qudit_norm(d):
    for seed in range(5):
        data = corr.extract(random_pure((d,), seed))
        assert corr.norm_sq(data, (0,)) == pytest.approx(4 * (d - 1) / d**2, abs=1e-10)


def test_tensor_shapes_and_labels():
    data = corr.extract(random_mixed((2, 3, 4), seed=0))
    assert data.tensor((0, 2)).shape == (3, 15)
    assert data.vector((0, 1, 2)).shape == (3 * 8 * 15,)
    assert sorted(data.to_dict()["tensors"]) == ["1", "12", "123", "13", "2", "23", "3"]
    assert data.imag_residue < 1e-12


def test_dict_roundtrip():
    data = corr.extract(random_mixed((2, 3), seed=2), "minus")
    back = corr.CorrelationData.from_dict(data.to_dict())
    assert back.phase == "minus"
    for s in corr.subsets(2):
        np.testing.assert_array_equal(back.tensor(s), data.tensor(s))


def test_norm_sq_errors():
    data = corr.extract(bell())
    with pytest.raises(InputError):
        corr.norm_sq(data, ())
    with pytest.raises(InputError):
        corr.norm_sq(data, (0, 2))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(2, 3), st.integers(0, 2**31))
def test_product_state_factorizes(da, db, seed):
    a = random_mixed((da,), seed=seed)
    b = random_mixed((db,), seed=seed + 1)
    data = corr.extract(DensityMatrix(kron(a.matrix, b.matrix), (da, db)))
    np.testing.assert_allclose(data.vector((0, 1)), np.kron(data.vector((0,)), data.vector((1,))), atol=1e-10)
    outer = np.outer(data.vector((0,)), data.vector((1,)))
    np.testing.assert_allclose(corr.matricize(data, [0], [1]), outer, atol=1e-10)


def test_matricize_preserves_entries():
    g3 = corr.extract(ghz(3))
    m = corr.matricize(g3, [0], [1, 2])
    assert m.shape == (3, 9)
    assert np.linalg.matrix_rank(m) <= 3
    assert np.sum(m * m) == pytest.approx(corr.norm_sq(g3, (0, 1, 2)))
    g4 = corr.extract(ghz(4))
    m = corr.matricize(g4, [0, 1], [2, 3])
    assert np.sum(m * m) == pytest.approx(corr.norm_sq(g4, (0, 1, 2, 3)))


def test_matricize_row_party_order():
    data = corr.extract(random_mixed((2, 3, 2), seed=9))
    t = data.tensor((0, 1, 2))
    np.testing.assert_array_equal(corr.matricize(data, [1], [0, 2]), t.transpose(1, 0, 2).reshape(8, 9))
    np.testing.assert_array_equal(corr.matricize(data, [2, 0], [1]), corr.matricize(data, [0, 2], [1]))


@pytest.mark.parametrize("rows, cols", [([0], [0, 1]), ([], [1]), ([0], [])])
def test_matricize_errors(rows, cols):
    with pytest.raises(InputError):
        corr.matricize(corr.extract(ghz(3)), rows, cols)


def test_zero_tensors_reconstruct_maximally_mixed():
    dims = (2, 2, 2)
    tensors = {s: np.zeros([dims[p] ** 2 - 1 for p in s]) for s in corr.subsets(3)}
    rho = corr.reconstruct(corr.CorrelationData(dims, tensors))
    np.testing.assert_allclose(rho.matrix, np.eye(8) / 8, atol=1e-15)


@pytest.mark.parametrize("dims", MIXED_DIMS)
@pytest.mark.parametrize("phase", ["plus", "minus"])
def test_round_trip(dims, phase):
    for seed in range(5):
        rho = random_mixed(dims, seed=seed)
        back = corr.reconstruct(corr.extract(rho, phase))
        assert np.max(np.abs(back.matrix - rho.matrix)) <= 1e-12


@pytest.mark.parametrize("dims", MIXED_DIMS)
def test_purity_identity(dims):
    for seed in range(5):
        rho = random_mixed(dims, seed=seed)
        assert corr.purity_identity(corr.extract(rho)) == pytest.approx(purity(rho), abs=1e-10)


def test_purity_identity_bipartite_form():
    d1, d2 = 2, 3
    data = corr.extract(random_pure((d1, d2), 3))
    t1, t2, t12 = (corr.norm_sq(data, s) for s in ((0,), (1,), (0, 1)))
    explicit = 1 / (d1 * d2) + d1 / (4 * d2) * t1 + d2 / (4 * d1) * t2 + d1 * d2 / 16 * t12
    assert corr.purity_identity(data) == pytest.approx(explicit, abs=1e-14)
    assert explicit == pytest.approx(1.0, abs=1e-10)


def test_purity_identity_examples_and_errors():
    assert corr.purity_identity(corr.extract(maximally_mixed((2, 2, 2, 2)))) == pytest.approx(1 / 16)
    with pytest.raises(InputError):
        corr.purity_identity(corr.extract(random_pure((3,), 0)))


@pytest.mark.parametrize("dims", PAIR_DIMS)
def test_pair_norm_bound_on_pure_states(dims):
    bound = corr.pair_norm_bound(*dims)
    worst = max(corr.norm_sq(corr.extract(random_pure(dims, seed)), (0, 1)) for seed in range(N_PURE))
    assert worst <= bound + 1e-9


@pytest.mark.parametrize("dims", TRIPLE_DIMS)
def test_triple_norm_bound_on_pure_states(dims):
    assert corr.pairwise_product_condition(*dims)
    bound = corr.triple_norm_bound(*dims)
    worst = max(corr.norm_sq(corr.extract(random_pure(dims, seed)), (0, 1, 2)) for seed in range(N_PURE))
    assert worst <= bound + 1e-9


@pytest.mark.parametrize("dims", PAIR_DIMS)
def test_local_norm_relation_for_pure_states(dims):
    d1, d2 = dims
    for seed in range(20):
        data = corr.extract(random_pure(dims, seed))
        lhs = d1 / 4 * corr.norm_sq(data, (0,)) - d2 / 4 * corr.norm_sq(data, (1,))
        assert lhs == pytest.approx(1 / d2 - 1 / d1, abs=1e-10)


def test_triple_bound_symmetric():
    assert corr.triple_norm_bound(2, 3, 4) == pytest.approx(corr.triple_norm_bound(4, 2, 3), abs=1e-15)
    assert not corr.pairwise_product_condition(2, 2, 5)


@pytest.mark.parametrize("dims", [(2, 3), (3, 3, 2), (2, 2, 2, 2)])
def test_norms_independent_of_phase(dims):
    rho = random_mixed(dims, seed=11)
    plus, minus = corr.extract(rho, "plus"), corr.extract(rho, "minus")
    for s in corr.subsets(len(dims)):
        assert corr.norm_sq(plus, s) == pytest.approx(corr.norm_sq(minus, s), abs=1e-10)


def test_subset_labels():
    assert corr.subsets(3) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    assert corr.subset_label((2, 0)) == "13"
    assert corr.parse_subset_label("31") == (0, 2)
    with pytest.raises(InputError):
        corr.parse_subset_label("1x")
