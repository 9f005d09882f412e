"""Biorthogonal eigendecomposition of dense non-Hermitian matrices."""

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, strategies as st

from conftest import greedy_match_dev
from epscan import biortho, model
from epscan.errors import DefectiveMatrix


def test_identity_matrix():
    eig = biortho.eigendecompose(np.eye(3, dtype=complex))
    npt.assert_allclose(eig.values, np.ones(3))
    npt.assert_allclose(eig.overlap_matrix(), np.eye(3), atol=1e-14)
    assert eig.residual_norm < 1e-14
    assert eig.dim == 3


def test_two_level_flip():
    eig = biortho.eigendecompose(np.array([[0.0, 1.0], [1.0, 0.0]]))
    npt.assert_allclose(eig.values, [-1.0, 1.0], atol=1e-14)


def test_sort_order_lexicographic():
    order = biortho.sort_order(np.array([1.0 + 2.0j, 1.0 + 1.0j, 0.0]))
    npt.assert_array_equal(order, [2, 1, 0])


def test_random_nonnormal_biorthonormality():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    eig = biortho.eigendecompose(m)
    npt.assert_allclose(eig.overlap_matrix(), np.eye(6), atol=1e-10)
    assert eig.residual_norm < 1e-10
    assert eig.completeness_defect() < 1e-10
    assert greedy_match_dev(eig.values, np.linalg.eigvals(m)) < 1e-10
    # spectral reconstruction from the dyadic sum
    recon = (eig.rights * eig.values) @ eig.lefts
    npt.assert_allclose(recon, m, atol=1e-9)


def test_values_sorted():
    rng = np.random.default_rng(8)
    m = rng.normal(size=(5, 5))
    eig = biortho.eigendecompose(m)
    order = biortho.sort_order(eig.values)
    npt.assert_array_equal(order, np.arange(5))


def test_eigenvector_residuals():
    rng = np.random.default_rng(21)
    m = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    eig = biortho.eigendecompose(m)
    for k in range(7):
        right_res = np.max(np.abs(m @ eig.rights[:, k] - eig.values[k] * eig.rights[:, k]))
        left_res = np.max(np.abs(eig.lefts[k] @ m - eig.values[k] * eig.lefts[k]))
        assert right_res < 1e-12
        assert left_res < 1e-10


def test_degenerate_block_repair():
    # an exactly degenerate pair: raw LAPACK left/right sets are not
    # biorthogonal inside the cluster and need the block solve
    rng = np.random.default_rng(5)
    w = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    m = w @ np.diag([1.0, 1.0, 2.0]) @ np.linalg.inv(w)
    eig = biortho.eigendecompose(m)
    npt.assert_allclose(eig.overlap_matrix(), np.eye(3), atol=1e-12)
    assert eig.residual_norm < 1e-12


def test_defective_matrix_raises():
    # the overlap inversion inside blows up before the rank check trips,
    # which emits a harmless overflow warning on the way to the raise
    with np.errstate(over="ignore"), pytest.raises(DefectiveMatrix):
        biortho.eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_binormalize_scaling():
    rights, lefts = biortho.binormalize(2.0 * np.eye(2), np.eye(2))
    npt.assert_allclose(np.linalg.norm(rights, axis=0), [1.0, 1.0])
    npt.assert_allclose(lefts @ rights, np.eye(2), atol=1e-14)


def test_binormalize_hermitian_lefts_are_adjoints():
    rng = np.random.default_rng(12)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = a + a.conj().T
    eig = biortho.eigendecompose(m)
    npt.assert_allclose(eig.lefts, eig.rights.conj().T, atol=1e-10)


def test_binormalize_near_parallel_raises():
    rights = np.array([[1.0, 1.0], [0.0, 1e-14]])
    with np.errstate(over="ignore"):
        with pytest.raises(DefectiveMatrix):
            biortho.binormalize(rights, np.eye(2))


def test_cluster_quasi_degenerate_basic():
    groups = biortho.cluster_quasi_degenerate([0.0, 0.01, 1.0], gap=0.1)
    assert groups == [[0, 1], [2]]
    groups = biortho.cluster_quasi_degenerate([0.0, 0.01, 1.0], gap=0.001)
    assert groups == [[0], [1], [2]]
    assert biortho.cluster_quasi_degenerate([], gap=0.1) == []
    with pytest.raises(ValueError):
        biortho.cluster_quasi_degenerate([0.0], gap=0.0)


def test_cluster_orders_by_real_part():
    groups = biortho.cluster_quasi_degenerate([5.0, 0.0, 5.001, -3.0], gap=0.1)
    assert groups == [[3], [1], [0, 2]]


def test_cluster_conjugate_pair_shares_group():
    groups = biortho.cluster_quasi_degenerate([1.0 + 0.2j, 1.0 - 0.2j, 2.0], gap=0.5)
    assert groups == [[1, 0], [2]]


def test_cluster_circuit_qed_sizes(base_params):
    h0 = model.build_full_hamiltonian(base_params.replace(g=0.0))
    vals = np.linalg.eigvals(h0)
    groups = biortho.cluster_quasi_degenerate(vals, base_params.omega_r / 4.0)
    assert [len(g) for g in groups] == [1, 3, 4, 4, 4, 4, 4, 4, 3, 1]


@given(st.lists(st.integers(min_value=0, max_value=40), min_size=1, max_size=8))
def test_cluster_matches_pairwise_closure(ks):
    # single-linkage on sorted reals must equal the transitive closure of
    # "real parts closer than gap"; grid values keep the boundary unambiguous
    values = np.array([0.01 * k for k in ks])
    gap = 0.015
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) < gap:
                parent[find(i)] = find(j)
    want = {}
    for i in range(len(values)):
        want.setdefault(find(i), set()).add(i)
    got = {frozenset(g) for g in biortho.cluster_quasi_degenerate(values, gap)}
    assert got == {frozenset(s) for s in want.values()}
