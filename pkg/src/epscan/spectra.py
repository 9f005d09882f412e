"""Exact diagonalization of the full model: sweeps, parities, EP2 detection.

The full Hamiltonian is pseudo-Hermitian under qubit exchange, so every
eigenvalue is either real or a member of a conjugate pair.  Along a parameter
sweep, levels are followed by greedy maximal |<L(prev)|R(next)>| overlap
matching (biorthogonal, not Hermitian, overlaps), which keeps branch
identities through avoided crossings.  Where a branch's energy is real its
parity index is the sign of the exchange-parity expectation <R|P|R>/<R|R>,
a quantity that is constant on each real segment and matches the gamma = 0
parity quantum number by continuity; complex segments carry index 0
(undefined).  Second-order exceptional points show up as real <-> complex
transitions of a conjugate pair and are localized by bisection on the sweep
parameter; the two merging branches always carry opposite parity indices on
the real side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .biortho import BiorthogonalEigensystem, cluster_quasi_degenerate, eigendecompose
from .errors import (
    DimensionMismatch,
    InvalidParams,
    ParityAmbiguous,
    TrackingAmbiguous,
)
from .model import (
    SystemParams,
    build_full_hamiltonian,
    effective_matrix_approx,
    effective_matrix_full,
    parity_operator,
    resonant_group_basis,
    PARITY_BASIS_CHANGE,
)

__all__ = [
    "LevelBranch",
    "EP2Crossing",
    "ComparisonTable",
    "full_spectrum",
    "parity_expectations",
    "assign_parity_indices",
    "group_resonant_levels",
    "track_levels",
    "detect_ep2",
    "detect_ep2_all",
    "compare_effective_vs_ed",
]

#: |Im E| below this multiple of Omega counts as a real level.
REALNESS_RTOL = 1e-9

#: Parity expectations closer to 0 than this cannot be assigned an index.
PARITY_TOL = 1e-8

#: Minimum acceptable |<L|R>| overlap when matching levels across sweep steps.
OVERLAP_FLOOR = 0.5

_SWEEPABLE = ("g", "gamma")


@dataclass(frozen=True)
class LevelBranch:
    """One level followed through a sweep.

    ``energies[k]`` belongs to ``sweep_values[k]``; ``parity_indices[k]`` is
    +1/-1 on real segments and 0 where the energy is complex or the parity
    expectation is ambiguous.  ``rights[k]`` (rows, optional) stores the unit
    right eigenvector for overlap work.
    """

    level: int
    sweep_param: str
    sweep_values: np.ndarray
    energies: np.ndarray
    parity_indices: np.ndarray
    rights: np.ndarray | None = None

    @property
    def n_steps(self) -> int:
        return self.sweep_values.size


@dataclass(frozen=True)
class EP2Crossing:
    """A bracketed real <-> complex transition of a branch pair.

    The bracket is honest about the non-analytic square-root merge: the EP
    lies in [lo, hi]; ``midpoint`` is the point estimate.
    """

    sweep_param: str
    lo: float
    hi: float
    parity_a: int
    parity_b: int
    level_a: int
    level_b: int

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class ComparisonTable:
    """Triple energies per coupling from ED and both effective routes.

    Columns of the (n_g, 3) arrays are level slots aligned across the three
    routes by eigenvector overlap against the embedded triple basis.
    """

    g_values: np.ndarray
    e_ed: np.ndarray
    e_full: np.ndarray
    e_approx: np.ndarray
    gamma: float
    params_base: SystemParams

    def max_re_deviation(self, which: str = "full") -> np.ndarray:
        """Per-g max over levels of |Re E_ed - Re E_effective|."""
        other = self.e_full if which == "full" else self.e_approx
        return np.max(np.abs(self.e_ed.real - other.real), axis=1)

    def max_abs_deviation(self, which: str = "full") -> np.ndarray:
        other = self.e_full if which == "full" else self.e_approx
        return np.max(np.abs(self.e_ed - other), axis=1)


def full_spectrum(params: SystemParams, tol: float = 1e-10) -> BiorthogonalEigensystem:
    """Biorthogonal eigensystem of the full Hamiltonian at ``params``."""
    return eigendecompose(build_full_hamiltonian(params), tol=tol)


def conjugation_defect(values) -> float:
    """Distance of a spectrum from closure under complex conjugation.

    Greedy nearest matching of each value to a conjugate partner; sorting by
    components is not reliable here because conjugate pairs with nearly equal
    real parts interleave differently in the two sorted lists.
    """
    vals = list(np.asarray(values, dtype=complex))
    remaining = vals.copy()
    worst = 0.0
    for v in vals:
        dists = np.abs(np.conjugate(v) - np.asarray(remaining))
        k = int(np.argmin(dists))
        worst = max(worst, float(dists[k]))
        remaining.pop(k)
    return worst


def parity_expectations(
    eig: BiorthogonalEigensystem, parity: np.ndarray
) -> np.ndarray:
    """Real parts of <R_i|P|R_i>/<R_i|R_i> for every level.

    P is Hermitian, so the quadratic form is real up to rounding; for an
    eigenvector with real energy it equals +-1 exactly in the unbroken phase.
    """
    if parity.shape != (eig.dim, eig.dim):
        raise DimensionMismatch(
            f"parity operator {parity.shape} does not match dimension {eig.dim}"
        )
    r = eig.rights
    num = np.einsum("ij,jk,ki->i", r.conj().T, parity, r)
    den = np.einsum("ij,ji->i", r.conj().T, r)
    return (num / den).real


def assign_parity_indices(
    params: SystemParams, tol: float = PARITY_TOL
) -> np.ndarray:
    """Exchange-parity quantum numbers (+1/-1) of the real spectrum at gamma=0.

    Requires gamma = 0 (Hermitian case, all levels real).  Degenerate levels
    whose computed eigenvectors mix the parity sectors raise ParityAmbiguous;
    perturb g infinitesimally to lift accidental degeneracies first.
    """
    if params.gamma != 0.0:
        raise InvalidParams(
            "parity assignment is defined on the Hermitian spectrum; "
            f"got gamma = {params.gamma}"
        )
    eig = full_spectrum(params)
    pv = parity_expectations(eig, parity_operator(params.n_max))
    out = np.where(pv >= 0.0, 1, -1).astype(int)
    defect = np.abs(np.abs(pv) - 1.0)
    if np.max(defect) > tol:
        bad = int(np.argmax(defect))
        raise ParityAmbiguous(
            f"level {bad} has parity expectation {pv[bad]:.6f}, not within "
            f"{tol:.1e} of +-1 (likely a parity-mixing degeneracy)"
        )
    return out


def group_resonant_levels(
    eig: BiorthogonalEigensystem, params: SystemParams, gap: float | None = None
) -> list[list[int]]:
    """Cluster the spectrum into resonant groups; default gap omega_r/4."""
    if gap is None:
        gap = params.omega_r / 4.0
    return cluster_quasi_degenerate(eig.values, gap)


def _sweep_params(params_base: SystemParams, sweep_param: str, value: float):
    if sweep_param not in _SWEEPABLE:
        raise ValueError(f"sweep_param must be one of {_SWEEPABLE}, got {sweep_param!r}")
    return params_base.replace(**{sweep_param: float(value)})


def _greedy_assign(score: np.ndarray) -> np.ndarray:
    """perm[prev_row] = new_col by descending score, each used once."""
    n = score.shape[0]
    perm = np.full(n, -1)
    col_used = np.zeros(n, dtype=bool)
    for flat in np.argsort(score, axis=None)[::-1]:
        i, j = divmod(int(flat), n)
        if perm[i] >= 0 or col_used[j]:
            continue
        perm[i] = j
        col_used[j] = True
        if np.all(perm >= 0):
            break
    return perm


def _parity_column(
    eig: BiorthogonalEigensystem,
    parity: np.ndarray,
    omega: float,
    order: np.ndarray,
) -> np.ndarray:
    """Parity indices for the levels in branch order; 0 where complex/ambiguous."""
    pv = parity_expectations(eig, parity)
    out = np.zeros(order.size, dtype=int)
    real_mask = np.abs(eig.values.imag[order]) < REALNESS_RTOL * omega
    signed = np.where(pv[order] >= 0.0, 1, -1)
    definite = np.abs(pv[order]) > PARITY_TOL
    out[real_mask & definite] = signed[real_mask & definite]
    return out


def track_levels(
    params_base: SystemParams,
    sweep_param: str,
    values,
    store_vectors: bool = True,
    overlap_floor: float = OVERLAP_FLOOR,
) -> list[LevelBranch]:
    """Follow every level of the full spectrum through a 1D sweep.

    ``values`` must be strictly increasing.  Branches start in the (Re, Im)
    eigenvalue order of the first sweep point and are continued by greedy
    maximal biorthogonal overlap |<L_k|R_{k+1}>|; a best overlap below
    ``overlap_floor`` raises TrackingAmbiguous (refine the sweep grid).
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size < 2:
        raise ValueError("sweep needs at least two values")
    if not np.all(np.diff(vals) > 0):
        raise ValueError("sweep values must be strictly increasing")
    omega = params_base.omega
    parity = parity_operator(params_base.n_max)
    dim = params_base.dim

    energies = np.empty((vals.size, dim), dtype=complex)
    parities = np.empty((vals.size, dim), dtype=int)
    rights_store = (
        np.empty((vals.size, dim, dim), dtype=complex) if store_vectors else None
    )

    order = np.arange(dim)
    prev_lefts = None
    for k, v in enumerate(vals):
        eig = full_spectrum(_sweep_params(params_base, sweep_param, v))
        if prev_lefts is not None:
            score = np.abs(prev_lefts @ eig.rights)
            perm = _greedy_assign(score)
            best = score[np.arange(dim), perm]
            if float(np.min(best)) < overlap_floor:
                worst = int(np.argmin(best))
                raise TrackingAmbiguous(
                    f"overlap {best[worst]:.3f} below floor {overlap_floor} for "
                    f"branch {worst} at {sweep_param} = {v:.6g}"
                )
            order = perm
        else:
            order = np.arange(dim)
        energies[k] = eig.values[order]
        parities[k] = _parity_column(eig, parity, omega, order)
        if store_vectors:
            rights_store[k] = eig.rights[:, order].T
        prev_lefts = eig.lefts[order]

    branches = []
    for lev in range(dim):
        branches.append(
            LevelBranch(
                level=lev,
                sweep_param=sweep_param,
                sweep_values=vals,
                energies=energies[:, lev].copy(),
                parity_indices=parities[:, lev].copy(),
                rights=rights_store[:, lev, :].copy() if store_vectors else None,
            )
        )
    return branches


def _probe_energy(
    params: SystemParams, anchor_left: np.ndarray
) -> complex:
    """Energy of the level best matching an anchor left row, unvalidated.

    Bisection probes land exponentially close to the EP where the validated
    decomposition rightly refuses to binormalize; here only the eigenvalue of
    the matched level is needed, so plain right eigenvectors suffice.
    """
    w, vr = scipy.linalg.eig(build_full_hamiltonian(params), right=True)
    j = int(np.argmax(np.abs(anchor_left @ vr)))
    return complex(w[j])


def _segment_parity(branch: LevelBranch, start: int, direction: int) -> int:
    """Branch parity on the real segment starting at ``start``.

    The index is constant along a real segment; walk away from the transition
    until a definite value appears (grid points adjacent to an EP can sit in
    the ambiguous zone where the two Krein signatures neutralize).
    """
    k = start
    while 0 <= k < branch.n_steps:
        if branch.parity_indices[k] != 0:
            return int(branch.parity_indices[k])
        k += direction
    return 0


def detect_ep2(
    branch_a: LevelBranch,
    branch_b: LevelBranch,
    params_base: SystemParams,
    rel_width: float = 1e-8,
    realness_rtol: float = REALNESS_RTOL,
) -> list[EP2Crossing]:
    """Bisect every real <-> complex transition of a conjugate branch pair.

    Both branches must come from the same sweep.  A transition interval
    qualifies when the two branches are mutual complex conjugates on its
    complex side.  Each crossing is narrowed to relative width ``rel_width``
    and reported together with the parity indices the two branches carry on
    the adjacent real segment (they come out opposite: merging levels always
    belong to different parity sectors).
    """
    if branch_a.sweep_param != branch_b.sweep_param or not np.array_equal(
        branch_a.sweep_values, branch_b.sweep_values
    ):
        raise DimensionMismatch("branches do not come from the same sweep")
    sweep_param = branch_a.sweep_param
    vals = branch_a.sweep_values
    omega = params_base.omega
    tol_im = realness_rtol * omega

    def is_complex(k: int) -> bool:
        return (
            abs(branch_a.energies[k].imag) > tol_im
            and abs(branch_b.energies[k].imag) > tol_im
        )

    def is_pair(k: int) -> bool:
        return (
            abs(branch_a.energies[k] - branch_b.energies[k].conjugate())
            < 1e-6 * omega
        )

    crossings = []
    for k in range(vals.size - 1):
        ca, cb = is_complex(k), is_complex(k + 1)
        if ca == cb:
            continue
        complex_side = k if ca else k + 1
        if not is_pair(complex_side):
            continue            # the transition belongs to another partner
        real_side = k + 1 if ca else k
        anchor = full_spectrum(
            _sweep_params(params_base, sweep_param, vals[real_side])
        )
        # anchor row: branch a's level at the real-side grid point
        if branch_a.rights is not None:
            row_a = int(np.argmax(np.abs(anchor.rights.conj().T @ branch_a.rights[real_side])))
        else:
            row_a = int(np.argmin(np.abs(anchor.values - branch_a.energies[real_side])))
        left_a = anchor.lefts[row_a]

        lo, hi = float(vals[k]), float(vals[k + 1])
        lo_complex = ca
        span = max(abs(lo), abs(hi), 1e-12)
        for _ in range(200):
            if (hi - lo) <= rel_width * span:
                break
            mid = 0.5 * (lo + hi)
            e_mid = _probe_energy(
                _sweep_params(params_base, sweep_param, mid), left_a
            )
            mid_complex = abs(e_mid.imag) > tol_im
            if mid_complex == lo_complex:
                lo = mid
            else:
                hi = mid
        direction = 1 if real_side > complex_side else -1
        parity_a = _segment_parity(branch_a, real_side, direction)
        parity_b = _segment_parity(branch_b, real_side, direction)
        crossings.append(
            EP2Crossing(
                sweep_param=sweep_param,
                lo=lo,
                hi=hi,
                parity_a=parity_a,
                parity_b=parity_b,
                level_a=branch_a.level,
                level_b=branch_b.level,
            )
        )
    return crossings


def detect_ep2_all(
    branches: list[LevelBranch],
    params_base: SystemParams,
    rel_width: float = 1e-8,
) -> list[EP2Crossing]:
    """EP2 crossings over all branch pairs, ordered by bracket position."""
    found = []
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            found.extend(
                detect_ep2(branches[i], branches[j], params_base, rel_width)
            )
    found.sort(key=lambda c: (c.lo, c.level_a, c.level_b))
    return found


def _match_triple(
    eig: BiorthogonalEigensystem,
    embedded: np.ndarray,
    eff_values: np.ndarray,
    eff_vectors: np.ndarray,
    restrict: list[int] | None = None,
) -> tuple[list[int], np.ndarray]:
    """Pair effective eigenpairs with ED levels via embedded eigenvectors.

    ``embedded`` has the full-space triple basis as columns; effective
    eigenvector j embeds as embedded @ eff_vectors[:, j] and is matched to
    the ED level with maximal |<L_ed|v>| (greedy, optionally restricted to
    a candidate index set).
    """
    cand = list(range(eig.dim)) if restrict is None else list(restrict)
    score = np.abs(eig.lefts[cand] @ (embedded @ eff_vectors))
    pairs = []
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    for flat in np.argsort(score, axis=None)[::-1]:
        i, j = divmod(int(flat), score.shape[1])
        if i in used_rows or j in used_cols:
            continue
        used_rows.add(i)
        used_cols.add(j)
        pairs.append((cand[i], j))
        if len(pairs) == score.shape[1]:
            break
    pairs.sort(key=lambda t: t[1])
    ed_idx = [p[0] for p in pairs]
    return ed_idx, eff_values


def compare_effective_vs_ed(
    params_base: SystemParams,
    g_values,
    gamma: float,
) -> ComparisonTable:
    """Triple energies from ED and both effective routes over a g scan.

    For each g the two 3x3 effective matrices (exact (s, t) form and
    parity-adapted approximation) are diagonalized, their eigenvectors are
    embedded through the analytic triple basis, and each is paired to an ED
    level by maximal biorthogonal overlap.  Level slots are aligned to the
    exact-route matching so the three columns are comparable per level.
    """
    gvals = np.asarray(g_values, dtype=float)
    base = params_base.replace(gamma=float(gamma), g=0.0)
    group = resonant_group_basis(base, 0)
    f = PARITY_BASIS_CHANGE
    e_ed = np.empty((gvals.size, 3), dtype=complex)
    e_full = np.empty((gvals.size, 3), dtype=complex)
    e_approx = np.empty((gvals.size, 3), dtype=complex)
    for k, g in enumerate(gvals):
        pg = base.replace(g=float(g))
        eig = full_spectrum(pg)
        h_full = effective_matrix_full(pg).matrix
        h_appr = effective_matrix_approx(pg).matrix
        wf, vf = scipy.linalg.eig(h_full)
        of = np.lexsort((wf.imag, wf.real))
        wf, vf = wf[of], vf[:, of]
        wa, va = scipy.linalg.eig(h_appr)
        oa = np.lexsort((wa.imag, wa.real))
        wa, va = wa[oa], va[:, oa]
        ed_idx, _ = _match_triple(eig, group.rights, wf, vf)
        # the approximate matrix lives in the parity-adapted basis: rotate
        # its eigenvectors back through F before embedding
        ed_idx_a, _ = _match_triple(eig, group.rights, wa, f @ va, restrict=ed_idx)
        e_ed[k] = eig.values[ed_idx]
        e_full[k] = wf
        # align approximate eigenvalues to the slots of the exact matching
        slot_of_ed = {ed: slot for slot, ed in enumerate(ed_idx)}
        for col, ed in enumerate(ed_idx_a):
            e_approx[k, slot_of_ed[ed]] = wa[col]
    return ComparisonTable(
        g_values=gvals,
        e_ed=e_ed,
        e_full=e_full,
        e_approx=e_approx,
        gamma=float(gamma),
        params_base=params_base,
    )
