"""Cubic spectral analysis of the effective 3x3 triple matrix.

The characteristic polynomial of the pseudo-Hermitian effective matrix has
real coefficients, E^3 + b E^2 + c E + d = 0, so the whole phase structure is
encoded in a real depressed cubic.  Shifting E by the root mean (-b/3) and
rescaling by the qubit splitting gives

    Et^3 + 3 p Et + 2 q = 0,
    p = (c - b^2/3) / (3 Omega^2),    q = (2 b^3 - 9 b c + 27 d) / (54 Omega^3),

whose discriminant p^3 + q^2 classifies the spectrum: negative means three
distinct real levels (PT-symmetric phase), positive one real level plus a
conjugate pair (broken phase), zero a second-order exceptional point, and
p = q = 0 the third-order exceptional point where all three levels and their
eigenvectors coalesce.

Cardano's solution with fixed branch conventions pins the root order:

    alpha = cbrt(-q + sqrt(p^3 + q^2)),   beta = -p/alpha,
    Et1 = alpha + beta,   Et2 = w alpha + wb beta,   Et3 = wb alpha + w beta,

with w = exp(2i pi/3) and the real cube root taken for a real radicand.  The
implementation evaluates the better-conditioned of the two radicands
-q +- sqrt(...) and recovers the partner through alpha*beta = -p exactly.

Near the triple point the closed-form perturbative regimes are:
along the discriminant line (case 1) a persistent double root; along q = 0
with p < 0 (case 2) three real roots ~ sqrt(|p|); along q = 0 with p > 0
(case 3) a real root and a pure-imaginary pair ~ sqrt(p); and at fixed q with
|p|^3 << q^2 (case 4) the three cube roots of -2q.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np
from skimage import measure

from .errors import (
    AmbiguousCase,
    DimensionMismatch,
    EmptyContour,
    NonConvergence,
    NotPTSymmetric,
    RankDeficient,
)
from .model import SystemParams, effective_matrix_approx, effective_matrix_full
from .swt import EffectiveHamiltonian

__all__ = [
    "CubicCoeffs",
    "DepressedCubic",
    "EP3Report",
    "CriticalEstimate",
    "PhaseDiagram",
    "CLASS_THREE_REAL",
    "CLASS_ONE_REAL_PAIR",
    "CLASS_EP2",
    "CLASS_EP3",
    "char_poly_coeffs",
    "depress",
    "depressed_from_params",
    "cardano_roots",
    "classify",
    "trace_ep2_line",
    "find_ep3",
    "critical_scaling",
    "perturbation_case",
    "phase_diagram",
]

CLASS_THREE_REAL = "three-real"
CLASS_ONE_REAL_PAIR = "one-real-pair"
CLASS_EP2 = "ep2"
CLASS_EP3 = "ep3"

_W = np.exp(2j * np.pi / 3.0)

#: Imaginary leakage allowed in the characteristic coefficients of a
#: pseudo-Hermitian matrix before we refuse to treat them as real.
_REALNESS_RTOL = 1e-9


@dataclass(frozen=True)
class CubicCoeffs:
    """Real coefficients of E^3 + b E^2 + c E + d."""

    b: float
    c: float
    d: float


@dataclass(frozen=True)
class DepressedCubic:
    """Dimensionless depressed form Et^3 + 3 p Et + 2 q = 0.

    ``scale`` is the energy unit (Omega) and ``shift`` the real offset (-b/3),
    so physical roots are E = scale * Et + shift.
    """

    p: float
    q: float
    scale: float
    shift: float

    def discriminant(self) -> float:
        return self.p**3 + self.q**2

    def to_energy(self, roots: np.ndarray) -> np.ndarray:
        """Map dimensionless roots back to energies."""
        return self.scale * np.asarray(roots) + self.shift


@dataclass(frozen=True)
class EP3Report:
    """Converged third-order exceptional point in the (g, gamma) plane."""

    g_cr: float
    gamma_cr: float
    triple_energy: complex
    rank_ok: bool
    residual: float
    iterations: int

    def as_dict(self) -> dict:
        return {
            "g_cr": self.g_cr,
            "gamma_cr": self.gamma_cr,
            "triple_energy_re": float(np.real(self.triple_energy)),
            "triple_energy_im": float(np.imag(self.triple_energy)),
            "rank_ok": bool(self.rank_ok),
            "residual": self.residual,
            "iterations": int(self.iterations),
        }


@dataclass(frozen=True)
class CriticalEstimate:
    """Closed-form estimates of the triple-point location.

    ``g_cr``/``gamma_cr`` are the asymptotic small-detuning laws
    g_cr = sqrt(dw * Omega)/2 and gamma_cr = g_cr * theta / sqrt(2);
    ``g_sq_pre``/``gamma_sq_pre`` are the pre-asymptotic dimensionless squares
    (g/Omega)^2 and (gamma/Omega)^2 that keep the O(dw) corrections, used to
    seed the exact search.
    """

    g_cr: float
    gamma_cr: float
    g_sq_pre: float
    gamma_sq_pre: float


@dataclass(frozen=True)
class PhaseDiagram:
    """Spectral classification over a (g, gamma) grid.

    ``max_im[i, j]`` is the largest imaginary part among the three levels at
    (g_values[i], gamma_values[j]); ``min_dist`` the smallest pairwise level
    distance; ``tags`` the class label per node.
    """

    g_values: np.ndarray
    gamma_values: np.ndarray
    max_im: np.ndarray
    min_dist: np.ndarray
    tags: np.ndarray
    params_base: SystemParams

    def broken_fraction(self, tol: float = 0.0) -> float:
        """Fraction of grid nodes with max Im E above tol."""
        return float(np.mean(self.max_im > tol))


def char_poly_coeffs(matrix, rtol: float = _REALNESS_RTOL) -> CubicCoeffs:
    """Real characteristic coefficients of a pseudo-Hermitian 3x3 matrix.

    b = -tr H, c = ((tr H)^2 - tr H^2)/2, d = -det H.  The imaginary parts
    must vanish to ``rtol`` relative to the coefficient scale; a violation
    means the input lost its pseudo-Hermitian structure.
    """
    if isinstance(matrix, EffectiveHamiltonian):
        matrix = matrix.matrix
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (3, 3):
        raise DimensionMismatch(f"expected a 3x3 matrix, got {m.shape}")
    tr = np.trace(m)
    tr2 = np.trace(m @ m)
    b = -tr
    c = 0.5 * (tr**2 - tr2)
    d = -np.linalg.det(m)
    coeffs = np.array([b, c, d])
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    if float(np.max(np.abs(coeffs.imag))) > rtol * scale:
        raise NotPTSymmetric(
            "characteristic coefficients have imaginary parts "
            f"{np.abs(coeffs.imag).max():.3e}; matrix is not pseudo-Hermitian"
        )
    return CubicCoeffs(float(b.real), float(c.real), float(d.real))


def depress(coeffs: CubicCoeffs, scale: float) -> DepressedCubic:
    """Shift out the quadratic term and rescale energies by ``scale``.

    The substitution E = scale*Et - b/3 centers the roots on their mean, so
    ``shift = -b/3`` and the depressed invariants are

        p = (c - b^2/3)/(3 scale^2),  q = (2 b^3 - 9 b c + 27 d)/(54 scale^3).
    """
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    b, c, d = coeffs.b, coeffs.c, coeffs.d
    p = (c - b**2 / 3.0) / (3.0 * scale**2)
    q = (2.0 * b**3 - 9.0 * b * c + 27.0 * d) / (54.0 * scale**3)
    return DepressedCubic(p=p, q=q, scale=scale, shift=-b / 3.0)


def depressed_from_params(
    params: SystemParams, use_full: bool = False
) -> DepressedCubic:
    """Depressed cubic of the triple matrix at these parameters.

    ``use_full`` switches from the parity-adapted approximation (the default
    carrier of the phase-diagram analysis) to the exact (s, t) matrix.
    """
    eff = effective_matrix_full(params) if use_full else effective_matrix_approx(params)
    return depress(char_poly_coeffs(eff.matrix), params.omega)


def _real_cbrt(x: float) -> complex:
    return complex(np.cbrt(x))


def cardano_roots(dc: DepressedCubic) -> np.ndarray:
    """Dimensionless roots in the fixed Cardano order (Et1, Et2, Et3).

    Branches: real cube root for a real radicand, principal complex cube root
    and principal sqrt otherwise.  The larger of the radicands -q +- sqrt(D)
    is evaluated directly and its partner recovered from alpha*beta = -p,
    which avoids the cancellation at |p|^3 << q^2 while preserving the branch
    conventions exactly.
    """
    p, q = dc.p, dc.q
    disc = p**3 + q * q
    if disc >= 0.0:
        sq = float(np.sqrt(disc))
        c1 = -q + sq
        c2 = -q - sq
        if abs(c1) >= abs(c2):
            alpha = _real_cbrt(c1)
            if alpha == 0:                      # p = q = 0: triple root
                return np.zeros(3, dtype=complex)
            beta = -p / alpha
        else:
            beta = _real_cbrt(c2)
            alpha = -p / beta
    else:
        sq = 1j * float(np.sqrt(-disc))
        alpha = (-q + sq) ** (1.0 / 3.0)        # principal branch
        beta = -p / alpha
    wb = _W.conjugate()
    return np.array(
        [alpha + beta, _W * alpha + wb * beta, wb * alpha + _W * beta],
        dtype=complex,
    )


def classify(dc: DepressedCubic, tol: float = 1e-8) -> str:
    """Spectral class of the depressed cubic at tolerance ``tol``.

    EP3 when both invariants vanish (max(|p|^{3/2}, |q|) < tol); EP2 when the
    discriminant vanishes (|p^3 + q^2| < tol^2); otherwise the discriminant
    sign separates three real roots from one real plus a conjugate pair.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    p, q = dc.p, dc.q
    disc = p**3 + q * q
    if max(abs(p) ** 1.5, abs(q)) < tol:
        return CLASS_EP3
    if abs(disc) < tol * tol:
        return CLASS_EP2
    return CLASS_THREE_REAL if disc < 0 else CLASS_ONE_REAL_PAIR


def critical_scaling(params: SystemParams) -> CriticalEstimate:
    """Closed-form triple-point estimates from the detuning expansion.

    Asymptotically (dw/Omega -> 0): g_cr = sqrt(dw*Omega)/2, gamma_cr =
    g_cr*theta/sqrt(2).  The pre-asymptotic squares keep the finite-detuning
    denominators: with dwt = dw/Omega,

        u2 = 4 [cos^2(th)/(1 + dwt) + sin^2(th)/(2 + dwt)],
        u1 = 2 sin^2(th)/(2 + dwt),
        gt^2 = dwt/u2,
        8 gmt^2 cos^2(th) = 4 dwt sin^2(th)/u2 + (2 dwt^2/3)(u1/u2)^2.
    """
    w = params.omega
    dwt = params.detuning / w
    if dwt <= 0:
        raise ValueError(
            f"critical scaling needs positive detuning, got dw/Omega = {dwt}"
        )
    th = params.theta
    u2 = 4.0 * (np.cos(th) ** 2 / (1.0 + dwt) + np.sin(th) ** 2 / (2.0 + dwt))
    u1 = 2.0 * np.sin(th) ** 2 / (2.0 + dwt)
    g_sq = dwt / u2
    gamma_sq = (
        4.0 * dwt * np.sin(th) ** 2 / u2 + (2.0 * dwt**2 / 3.0) * (u1 / u2) ** 2
    ) / (8.0 * np.cos(th) ** 2)
    g_cr = 0.5 * np.sqrt(params.detuning * w)
    gamma_cr = g_cr * th / np.sqrt(2.0)
    return CriticalEstimate(
        g_cr=float(g_cr),
        gamma_cr=float(gamma_cr),
        g_sq_pre=float(g_sq),
        gamma_sq_pre=float(gamma_sq),
    )


def _pq_at(params_base: SystemParams, g: float, gamma: float, use_full: bool):
    dc = depressed_from_params(
        params_base.replace(g=float(g), gamma=float(gamma)), use_full=use_full
    )
    return dc


def find_ep3(
    params_base: SystemParams,
    initial_guess: tuple[float, float] | None = None,
    use_full: bool = False,
    tol: float = 1e-12,
    max_iter: int = 50,
) -> EP3Report:
    """Solve p(g, gamma) = q(g, gamma) = 0 by a damped-free 2D Newton search.

    Dimensionless iterates (g/Omega, gamma/Omega) start from ``initial_guess``
    or the pre-asymptotic closed form; the Jacobian uses central differences
    with relative step 1e-7.  Converges when |p| + |q| < tol.  The report
    carries the triple energy E' = shift and a rank-1 check on the second-order
    minor of H - E' (its modulus equals sqrt(2) g gamma |sin 2 theta| in the
    parity-adapted matrix, far above the numerical floor at a genuine EP3).
    """
    w = params_base.omega
    if initial_guess is None:
        est = critical_scaling(params_base)
        if est.g_sq_pre <= 0 or est.gamma_sq_pre <= 0:
            raise ValueError("pre-asymptotic estimate invalid; pass initial_guess")
        x = np.array([np.sqrt(est.g_sq_pre), np.sqrt(est.gamma_sq_pre)])
    else:
        x = np.array([initial_guess[0] / w, initial_guess[1] / w], dtype=float)

    def fval(xx) -> np.ndarray:
        dc = _pq_at(params_base, xx[0] * w, xx[1] * w, use_full)
        return np.array([dc.p, dc.q])

    f = fval(x)
    iterations = 0
    while abs(f[0]) + abs(f[1]) >= tol:
        if iterations >= max_iter:
            raise NonConvergence(
                f"|p| + |q| = {abs(f[0]) + abs(f[1]):.3e} after {max_iter} steps"
            )
        jac = np.empty((2, 2))
        for j in range(2):
            h = 1e-7 * max(abs(x[j]), 1.0)
            xp = x.copy()
            xm = x.copy()
            xp[j] += h
            xm[j] -= h
            jac[:, j] = (fval(xp) - fval(xm)) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError as exc:
            raise NonConvergence("singular Jacobian in the triple-point search") from exc
        x = x - step
        f = fval(x)
        iterations += 1
    residual = float(abs(f[0]) + abs(f[1]))
    params_cr = params_base.replace(g=float(x[0] * w), gamma=float(x[1] * w))
    eff = (
        effective_matrix_full(params_cr)
        if use_full
        else effective_matrix_approx(params_cr)
    )
    dc = depress(char_poly_coeffs(eff.matrix), w)
    triple_energy = complex(dc.shift)
    shifted = eff.matrix - triple_energy * np.eye(3)
    minor = shifted[0, 0] * shifted[2, 1] - shifted[0, 1] * shifted[2, 0]
    # rank 1 would kill every 2x2 minor; at an EP3 this one stays finite
    floor = 1e-12
    rank_ok = bool(abs(minor) > floor)
    if not rank_ok:
        raise RankDeficient(
            f"second-order minor {abs(minor):.3e} below {floor:.1e}: matrix is "
            "diagonalizable at the candidate point, not a third-order EP"
        )
    return EP3Report(
        g_cr=float(x[0] * w),
        gamma_cr=float(x[1] * w),
        triple_energy=triple_energy,
        rank_ok=rank_ok,
        residual=residual,
        iterations=int(iterations),
    )


def _boundary_diff(ffun, x: float, h: float) -> float:
    """Derivative of a 1-argument callable, one-sided at the x = 0 boundary."""
    if x - h < 0.0:
        return (ffun(x + h) - ffun(x)) / h
    return (ffun(x + h) - ffun(x - h)) / (2.0 * h)


def _newton_polish_point(
    gval: float,
    gamval: float,
    ffun,
    steps: tuple[float, float],
    cap: float,
):
    """One guarded Newton step toward f = 0; skipped on vanishing gradient.

    The coupling and gain/loss are physical magnitudes, so both the
    finite-difference stencil and the polished point are kept in the
    closed quadrant g >= 0, gamma >= 0.
    """
    f0 = ffun(gval, gamval)
    hg, hm = steps
    dfg = _boundary_diff(lambda x: ffun(x, gamval), gval, hg)
    dfm = _boundary_diff(lambda x: ffun(gval, x), gamval, hm)
    grad_sq = dfg**2 + dfm**2
    if grad_sq < 1e-300:
        return gval, gamval
    step_g = f0 * dfg / grad_sq
    step_m = f0 * dfm / grad_sq
    norm = float(np.hypot(step_g, step_m))
    if norm > cap:
        step_g *= cap / norm
        step_m *= cap / norm
    return max(gval - step_g, 0.0), max(gamval - step_m, 0.0)


def trace_ep2_line(
    params_base: SystemParams,
    g_range: tuple[float, float],
    gamma_range: tuple[float, float],
    grid: tuple[int, int] = (64, 64),
    use_full: bool = False,
    polish: bool = True,
) -> list[np.ndarray]:
    """Zero contours of the discriminant p^3 + q^2 over a (g, gamma) window.

    Marching squares on a uniform grid (>= 16 nodes per axis), followed by one
    guarded Newton step per vertex perpendicular to the contour.  Returns
    polylines as (k, 2) arrays of (g/Omega, gamma/Omega), in the library's
    deterministic traversal order.  Raises EmptyContour when no zero crossing
    intersects the window.

    The contour of p^3 + q^2 = 0 has a cusp at p = q = 0 where linear
    interpolation inside a cell clips the tip, so when polishing is on the
    highest-gamma vertex is supplemented by the exact fold point: the cusp
    solves (p, q) = (0, 0), and a Newton solve seeded at that vertex pins it
    to full precision.  The extra vertex is inserted only when the solve
    converges inside the window.
    """
    ng, nm = int(grid[0]), int(grid[1])
    if ng < 16 or nm < 16:
        raise ValueError(f"grid must be at least 16x16, got {grid}")
    w = params_base.omega
    gs = np.linspace(g_range[0], g_range[1], ng)
    gams = np.linspace(gamma_range[0], gamma_range[1], nm)

    def disc(gval: float, gamval: float) -> float:
        return _pq_at(params_base, gval, gamval, use_full).discriminant()

    field = np.empty((ng, nm))
    for i, gval in enumerate(gs):
        for j, gamval in enumerate(gams):
            field[i, j] = disc(gval, gamval)
    contours = measure.find_contours(field, 0.0)
    if not contours:
        raise EmptyContour(
            f"discriminant has no zero crossing in g = {g_range}, "
            f"gamma = {gamma_range}"
        )
    dg = gs[1] - gs[0]
    dm = gams[1] - gams[0]
    cell = float(np.hypot(dg, dm))
    out = []
    for contour in contours:
        pts = np.empty_like(contour)
        pts[:, 0] = gs[0] + contour[:, 0] * dg
        pts[:, 1] = gams[0] + contour[:, 1] * dm
        if polish:
            for k in range(pts.shape[0]):
                pts[k] = _newton_polish_point(
                    pts[k, 0], pts[k, 1], disc, (dg / 8.0, dm / 8.0), cell
                )
        out.append(pts)
    if polish:
        _insert_fold_vertex(out, params_base, g_range, gamma_range, use_full)
    return [pts / w for pts in out]


def _insert_fold_vertex(
    polylines: list,
    params_base: SystemParams,
    g_range: tuple[float, float],
    gamma_range: tuple[float, float],
    use_full: bool,
) -> None:
    """Pin the cusp of the discriminant contour onto its polyline, in place."""
    best = (-np.inf, 0, 0)
    for idx, pts in enumerate(polylines):
        k = int(np.argmax(pts[:, 1]))
        if pts[k, 1] > best[0]:
            best = (pts[k, 1], idx, k)
    _, idx, k = best
    tip = polylines[idx][k]
    try:
        report = find_ep3(
            params_base,
            initial_guess=(float(tip[0]), float(tip[1])),
            use_full=use_full,
        )
    except (NonConvergence, RankDeficient):
        return
    fold = np.array([report.g_cr, report.gamma_cr])
    inside = (
        g_range[0] <= fold[0] <= g_range[1]
        and gamma_range[0] <= fold[1] <= gamma_range[1]
    )
    if inside:
        polylines[idx] = np.insert(polylines[idx], k + 1, fold, axis=0)


_CASE_EP2_LINE = "ep2-line"
_CASE_REAL_TRIPLET = "q0-neg-p"
_CASE_IMAG_PAIR = "q0-pos-p"
_CASE_FIXED_RATIO = "fixed-ratio"
_P3_DOMINANCE = 1e-2


def perturbation_case(dc: DepressedCubic, tol: float = 1e-8):
    """Closed-form roots for the four perturbative regimes near the EP3.

    Exactly one regime must match within ``tol`` (the caller positions (p, q)
    deliberately); otherwise AmbiguousCase is raised.  Returns ``(tag,
    roots)`` with roots ordered as :func:`cardano_roots` produces them:

    - 'ep2-line'    (p^3 + q^2 = 0):  (-2 cbrt(q), cbrt(q), cbrt(q)), the
      double root leading for q > 0 with strictly negative residual
      discriminant
    - 'q0-neg-p'    (q = 0, p < 0):   2 cos(pi/6 + 2 pi (k-1)/3) sqrt(|p|)
    - 'q0-pos-p'    (q = 0, p > 0):   (0, i sqrt(3 p), -i sqrt(3 p))
    - 'fixed-ratio' (|p|^3 << q^2):   cube roots of -2q; accurate to
      O(|p| / |2q|^{1/3}) only, the documented bound for this regime.

    ``tol`` bounds how far |q| may sit from zero for the q = 0 cases and
    the relative discriminant residual for the contour case.  Cubic-term
    subdominance for 'fixed-ratio' is a fixed structural threshold
    |p|^3 < 1e-2 q^2 rather than tol-scaled: the regime is an expansion,
    not a locus, and its accuracy is reported through the O(p) bound.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    p, q = dc.p, dc.q
    matches = []
    if abs(q) < tol and p < -tol:
        matches.append(_CASE_REAL_TRIPLET)
    if abs(q) < tol and p > tol:
        matches.append(_CASE_IMAG_PAIR)
    if abs(q) >= tol and abs(p**3 + q * q) < tol * max(abs(p) ** 3, q * q):
        matches.append(_CASE_EP2_LINE)
    if abs(q) >= tol and abs(p) ** 3 < _P3_DOMINANCE * q * q:
        matches.append(_CASE_FIXED_RATIO)
    if len(matches) != 1:
        raise AmbiguousCase(
            f"(p, q) = ({p:.3e}, {q:.3e}) matches {matches or 'no case'} at "
            f"tol = {tol:.1e}"
        )
    tag = matches[0]
    if tag == _CASE_REAL_TRIPLET:
        root_p = np.sqrt(abs(p))
        ks = np.arange(3)
        roots = 2.0 * np.cos(np.pi / 6.0 + 2.0 * np.pi * ks / 3.0) * root_p
        roots = roots.astype(complex)
    elif tag == _CASE_IMAG_PAIR:
        val = 1j * np.sqrt(3.0 * p)
        roots = np.array([0.0, val, -val], dtype=complex)
    elif tag == _CASE_EP2_LINE:
        cr = np.cbrt(q)
        roots = np.array([-2.0 * cr, cr, cr], dtype=complex)
        if q > 0 and dc.discriminant() < 0:
            # the Cardano branch for q > 0 leads with the double root when the
            # residual discriminant is strictly negative (three-real side);
            # at zero or positive residual the single root leads
            roots = roots[[1, 0, 2]]
    else:
        cr = np.cbrt(2.0 * q)
        # the conjugate assignment follows the Cardano branch actually taken,
        # which flips with the sign of q
        rot = np.exp(-2j * np.pi * np.sign(q) / 3.0)
        roots = np.array([-cr, -rot * cr, -rot.conjugate() * cr], dtype=complex)
    return tag, roots


def _phase_row(args):
    params_base, gval, gam_list, use_full, class_tol = args
    row_im = np.empty(len(gam_list))
    row_dist = np.empty(len(gam_list))
    row_tag = np.empty(len(gam_list), dtype="<U16")
    for j, gamval in enumerate(gam_list):
        dc = _pq_at(params_base, gval, gamval, use_full)
        roots = dc.to_energy(cardano_roots(dc))
        row_im[j] = float(np.max(roots.imag))
        dists = [
            abs(roots[0] - roots[1]),
            abs(roots[0] - roots[2]),
            abs(roots[1] - roots[2]),
        ]
        row_dist[j] = float(min(dists))
        row_tag[j] = classify(dc, tol=class_tol)
    return row_im, row_dist, row_tag


def phase_diagram(
    params_base: SystemParams,
    g_range: tuple[float, float],
    gamma_range: tuple[float, float],
    grid: tuple[int, int] = (121, 81),
    use_full: bool = False,
    class_tol: float = 1e-8,
    jobs: int = 1,
) -> PhaseDiagram:
    """Classify the triple spectrum on a uniform (g, gamma) grid.

    Each node stores the maximal imaginary part, the minimal pairwise level
    distance, and the class tag.  Nodes are independent; ``jobs > 1``
    partitions the g rows over processes with identical results.
    """
    ng, nm = int(grid[0]), int(grid[1])
    if ng < 2 or nm < 2:
        raise ValueError(f"grid must be at least 2x2, got {grid}")
    gs = np.linspace(g_range[0], g_range[1], ng)
    gams = np.linspace(gamma_range[0], gamma_range[1], nm)
    tasks = [(params_base, float(gval), list(gams), use_full, class_tol) for gval in gs]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=int(jobs)) as pool:
            rows = list(pool.map(_phase_row, tasks, chunksize=8))
    else:
        rows = [_phase_row(t) for t in tasks]
    max_im = np.vstack([r[0] for r in rows])
    min_dist = np.vstack([r[1] for r in rows])
    tags = np.vstack([r[2] for r in rows])
    return PhaseDiagram(
        g_values=gs,
        gamma_values=gams,
        max_im=max_im,
        min_dist=min_dist,
        tags=tags,
        params_base=params_base,
    )
