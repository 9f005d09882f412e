"""Exact diagonalization spectra, level tracking, and EP2 detection."""

import numpy as np
import numpy.testing as npt
import pytest

from conftest import greedy_match_dev
from epscan import cubic, model, spectra
from epscan.errors import InvalidParams, ParityAmbiguous, TrackingAmbiguous

EP2_MIDPOINTS_G004 = [
    0.117225, 0.117927, 0.121335, 0.125873, 0.132140, 0.143385, 0.150200,
    0.158392, 0.176115, 0.192951, 0.203017, 0.228831, 0.260496,
]


@pytest.fixture(scope="module")
def branches_g004(base_params):
    params = base_params.replace(gamma=0.004)
    values = np.linspace(0.0, 0.4, 401)
    return params, spectra.track_levels(params, "g", values)


# ------------------------------------------------------------- full spectrum


def test_full_spectrum_real_at_zero_gamma(base_params):
    eig = spectra.full_spectrum(base_params.replace(g=0.1))
    assert np.max(np.abs(eig.values.imag)) < 1e-12
    assert eig.residual_norm < 1e-10
    assert eig.dim == base_params.dim


def test_group_resonant_levels_sizes(base_params):
    p = base_params.replace(g=0.1)
    eig = spectra.full_spectrum(p)
    groups = spectra.group_resonant_levels(eig, p)
    # bottom of the ladder: isolated ground state, the resonant triple, then
    # generic four-level clusters; the last sector fragments because the
    # truncated ladder has no |--; n_max + 1> partner above it
    assert [len(g) for g in groups] == [1, 3, 4, 4, 4, 4, 4, 3, 1, 3, 1]
    assert sorted(i for g in groups for i in g) == list(range(eig.dim))


def test_parity_expectations_triple_pattern(base_params):
    p = base_params.replace(g=0.1)
    eig = spectra.full_spectrum(p)
    pv = spectra.parity_expectations(eig, model.parity_operator(p.n_max))
    triple = spectra.group_resonant_levels(eig, p)[1]
    signs = np.sign(pv[triple].real)
    npt.assert_array_equal(signs, [1.0, -1.0, 1.0])


def test_assign_parity_indices(base_params):
    idx = spectra.assign_parity_indices(base_params.replace(g=0.1))
    assert idx.shape == (base_params.dim,)
    assert set(idx.tolist()) == {1, -1}
    with pytest.raises(InvalidParams):
        spectra.assign_parity_indices(base_params.replace(g=0.1, gamma=0.005))
    with pytest.raises(ParityAmbiguous):
        spectra.assign_parity_indices(base_params)


def test_conjugation_defect():
    assert spectra.conjugation_defect(np.array([1.0 + 1.0j, 1.0 - 1.0j])) < 1e-15
    assert spectra.conjugation_defect(np.array([0.0, 2.5])) < 1e-15
    assert spectra.conjugation_defect(np.array([1.0j])) == pytest.approx(2.0)


def test_conjugation_defect_model_spectrum(base_params):
    eig = spectra.full_spectrum(base_params.replace(g=0.1, gamma=0.008))
    assert spectra.conjugation_defect(eig.values) < 1e-10


# ------------------------------------------------------------ level tracking


def test_track_levels_structure(base_params):
    p = base_params.replace(n_max=3, gamma=0.004)
    values = np.linspace(0.0, 0.1, 6)
    branches = spectra.track_levels(p, "g", values)
    assert len(branches) == p.dim
    start = spectra.full_spectrum(p.replace(g=0.0))
    for k, branch in enumerate(branches):
        assert branch.level == k
        assert branch.sweep_param == "g"
        assert branch.n_steps == 6
        npt.assert_allclose(branch.sweep_values, values)
        assert abs(branch.energies[0] - start.values[k]) < 1e-10
        assert branch.rights.shape == (6, p.dim)
        assert branch.parity_indices.shape == (6,)
    no_vec = spectra.track_levels(p, "g", values, store_vectors=False)
    assert no_vec[0].rights is None


def test_track_levels_gamma_sweep(base_params):
    p = base_params.replace(n_max=3, g=0.1)
    branches = spectra.track_levels(p, "gamma", np.linspace(0.0, 0.01, 5))
    assert len(branches) == p.dim
    assert branches[0].sweep_param == "gamma"


def test_track_levels_validation(base_params):
    with pytest.raises(ValueError):
        spectra.track_levels(base_params, "delta", np.linspace(0.0, 0.1, 5))
    with pytest.raises(ValueError):
        spectra.track_levels(base_params, "g", np.array([0.1]))
    with pytest.raises(ValueError):
        spectra.track_levels(base_params, "g", np.array([0.1, 0.05, 0.2]))


def test_track_levels_ambiguous_when_step_too_coarse(base_params):
    # at gamma = 0.012 a 400-node grid straddles an EP2 pair badly enough
    # that the best vector overlap drops below the 0.5 floor
    p = base_params.replace(gamma=0.012)
    with pytest.raises(TrackingAmbiguous, match="overlap"):
        spectra.track_levels(p, "g", np.linspace(0.0, 0.4, 400), store_vectors=False)


# ------------------------------------------------------------- EP2 detection


def test_detect_ep2_census_at_gamma_004(branches_g004):
    params, branches = branches_g004
    crossings = spectra.detect_ep2_all(branches, params)
    assert len(crossings) == 13
    mids = sorted(c.midpoint for c in crossings)
    npt.assert_allclose(mids, EP2_MIDPOINTS_G004, atol=1e-4)
    for c in crossings:
        assert c.parity_a * c.parity_b == -1
        assert c.hi - c.lo <= 1e-8 * 0.4 * 1.01
        assert c.hi > c.lo
        assert c.midpoint == pytest.approx(0.5 * (c.lo + c.hi))


def test_detect_ep2_single_pair(branches_g004):
    params, branches = branches_g004
    crossings = spectra.detect_ep2(branches[1], branches[2], params)
    assert len(crossings) == 1
    assert crossings[0].midpoint == pytest.approx(0.132140, abs=1e-4)
    assert {crossings[0].level_a, crossings[0].level_b} == {1, 2}


def test_detect_ep2_matches_discriminant_contour(branches_g004):
    # the triple's own EP2 pair must sit on the cubic's discriminant contour
    params, branches = branches_g004
    crossings = spectra.detect_ep2_all(branches, params)
    triple_mids = sorted(
        c.midpoint for c in crossings if {c.level_a, c.level_b} <= {1, 2, 3}
    )
    assert len(triple_mids) == 2

    def disc(g):
        dc = cubic.depressed_from_params(params.replace(g=g))
        return dc.discriminant()

    for mid in triple_mids:
        lo, hi = mid - 5e-3, mid + 5e-3
        flo = disc(lo)
        for _ in range(80):
            m = 0.5 * (lo + hi)
            fm = disc(m)
            if flo * fm <= 0:
                hi = m
            else:
                lo, flo = m, fm
        assert abs(mid - 0.5 * (lo + hi)) < 5e-3


def test_no_ep2_at_zero_gamma(base_params):
    branches = spectra.track_levels(base_params, "g", np.linspace(0.0, 0.2, 101))
    assert spectra.detect_ep2_all(branches, base_params) == []


# ------------------------------------------------- effective-vs-ED comparison


def test_compare_effective_vs_ed_pinned_point(base_params):
    table = spectra.compare_effective_vs_ed(
        base_params.replace(gamma=0.005), np.array([0.05]), 0.005
    )
    npt.assert_allclose(table.max_re_deviation("full")[0], 1.3204278976941541e-05,
                        rtol=1e-6)
    npt.assert_allclose(table.max_re_deviation("approx")[0], 1.1467936283052205e-05,
                        rtol=1e-6)
    assert table.max_re_deviation("full")[0] < 1e-3


def test_compare_effective_vs_ed_shapes(base_params):
    gvals = np.linspace(0.0, 0.1, 4)
    table = spectra.compare_effective_vs_ed(base_params, gvals, 0.0)
    assert table.e_ed.shape == (4, 3)
    assert table.e_full.shape == (4, 3)
    assert table.e_approx.shape == (4, 3)
    assert np.all(table.max_abs_deviation("full") >= table.max_re_deviation("full") - 1e-15)
    # at g = 0 every route reproduces the unperturbed triple
    assert table.max_abs_deviation("full")[0] < 1e-10
    assert table.max_abs_deviation("approx")[0] < 1e-10


def test_truncation_convergence_of_the_triple(base_params):
    def triple(n_max, gamma):
        p = base_params.replace(n_max=n_max, g=0.2, gamma=gamma)
        eig = spectra.full_spectrum(p)
        return eig.values[spectra.group_resonant_levels(eig, p)[1]]

    for gamma in (0.0, 0.008):
        t7, t9, t10 = (triple(n, gamma) for n in (7, 9, 10))
        assert greedy_match_dev(t7, t9) < 5e-8
        assert greedy_match_dev(t9, t10) < 5e-11
