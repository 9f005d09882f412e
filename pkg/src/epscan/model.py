"""Two-qubit circuit-QED model with balanced gain and loss.

Two flux qubits couple longitudinally to one resonator mode:

    H = H_qb + H_res + H_int,
    H_qb  = sum_n [ (Delta/2) sx_n + (eps/2) sz_n ] + i gamma (sz_1 - sz_2),
    H_res = omega_r adag a,
    H_int = g (adag + a) (sz_1 + sz_2),

with qubit 1 carrying gain (+i gamma) and qubit 2 loss (-i gamma).  The model
is symmetric under qubit exchange combined with complex conjugation, which
makes H pseudo-Hermitian with respect to the exchange parity operator:
P H P^{-1} = H^dagger.  All characteristic polynomials are therefore real and
the spectrum is closed under complex conjugation.

Scales: Omega = sqrt(Delta^2 + eps^2) is the bare qubit splitting,
theta = arccos(eps/Omega) the mixing angle, dw = omega_r - Omega the detuning.

The single-qubit problem diagonalizes in closed form with complex eigenvalue
pair +-lambda, lambda = sqrt((Delta/2)^2 + (eps/2 + i gamma)^2); the
quantities s = (eps/2 + i gamma)/lambda and t = Delta/(2 lambda) are the
longitudinal-operator matrix elements in that eigenbasis.  Tensor products of
the two single-qubit eigenbases with Fock states give the exact unperturbed
(g = 0) eigensystem, including the near-resonant triple at Fock number n:

    |+ -bar; n>,  |- +bar; n>,  |- -bar; n+1>

whose second-order effective 3x3 matrix this module evaluates both in the
exact (s, t) form and in the small-gamma parity-adapted approximation.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import swt
from .biortho import BiorthogonalEigensystem
from .errors import DimensionMismatch, InvalidLabel, InvalidParams, SingleQubitEP
from .swt import EffectiveHamiltonian, QuasiDegenerateGroup

__all__ = [
    "SystemParams",
    "SingleQubitData",
    "ResonantGroup",
    "build_full_hamiltonian",
    "hamiltonian_parts",
    "coupling_operator",
    "parity_operator",
    "single_qubit_data",
    "two_spin_sigma_action",
    "resonant_group_basis",
    "unperturbed_eigensystem",
    "effective_matrix_full",
    "effective_matrix_approx",
    "effective_matrix_numeric",
    "parity_transform",
    "PARITY_BASIS_CHANGE",
    "params_from_mapping",
    "load_params",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: Self-inverse basis change to the parity-adapted (bright/dark) triple basis.
PARITY_BASIS_CHANGE = np.array(
    [
        [1.0, 1.0, 0.0],
        [1.0, -1.0, 0.0],
        [0.0, 0.0, np.sqrt(2.0)],
    ]
) / np.sqrt(2.0)

#: Qubit-exchange parity on the triple in the bare basis and after the
#: parity-adapted basis change.
PARITY_TRIPLE = np.array(
    [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]], dtype=complex
)
PARITY_TRIPLE_ADAPTED = np.diag([1.0, -1.0, 1.0]).astype(complex)

_TWO_SPIN_LABELS = ("++", "+-", "-+", "--")


@dataclass(frozen=True)
class SystemParams:
    """Model parameters in one energy unit (hbar = 1).

    delta >= 0 and epsilon are the qubit tunneling and bias, gamma >= 0 the
    gain/loss rate, omega_r > 0 the resonator frequency, g >= 0 the coupling,
    n_max >= 1 the Fock-space cutoff (dimension 4 (n_max + 1)).
    """

    delta: float
    epsilon: float
    gamma: float = 0.0
    omega_r: float = 1.07
    g: float = 0.0
    n_max: int = 7

    def __post_init__(self):
        if not np.isfinite([self.delta, self.epsilon, self.gamma,
                            self.omega_r, self.g]).all():
            raise InvalidParams("parameters must be finite")
        if self.delta < 0:
            raise InvalidParams(f"delta must be >= 0, got {self.delta}")
        if self.gamma < 0:
            raise InvalidParams(f"gamma must be >= 0, got {self.gamma}")
        if self.omega_r <= 0:
            raise InvalidParams(f"omega_r must be > 0, got {self.omega_r}")
        if self.g < 0:
            raise InvalidParams(f"g must be >= 0, got {self.g}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise InvalidParams(f"n_max must be an integer >= 1, got {self.n_max}")
        if self.delta == 0 and self.epsilon == 0:
            raise InvalidParams("delta and epsilon cannot both vanish")

    @classmethod
    def from_angle(
        cls,
        omega: float,
        theta: float,
        gamma: float = 0.0,
        omega_r: float = 1.07,
        g: float = 0.0,
        n_max: int = 7,
    ) -> "SystemParams":
        """Build from the qubit splitting Omega and mixing angle theta.

        delta = Omega sin(theta), epsilon = Omega cos(theta); the (Omega,
        theta) <-> (delta, epsilon) round trip is exact to rounding.
        """
        if omega <= 0:
            raise InvalidParams(f"omega must be > 0, got {omega}")
        if not 0 <= theta <= np.pi / 2:
            raise InvalidParams(f"theta must lie in [0, pi/2], got {theta}")
        return cls(
            delta=float(omega * np.sin(theta)),
            epsilon=float(omega * np.cos(theta)),
            gamma=gamma,
            omega_r=omega_r,
            g=g,
            n_max=int(n_max),
        )

    @property
    def omega(self) -> float:
        """Bare qubit splitting Omega = sqrt(delta^2 + epsilon^2)."""
        return float(np.hypot(self.delta, self.epsilon))

    @property
    def theta(self) -> float:
        """Mixing angle arccos(epsilon/Omega) in [0, pi]."""
        return float(np.arctan2(self.delta, self.epsilon))

    @property
    def detuning(self) -> float:
        """Resonator detuning omega_r - Omega."""
        return self.omega_r - self.omega

    @property
    def dim(self) -> int:
        """Hilbert-space dimension 4 (n_max + 1)."""
        return 4 * (int(self.n_max) + 1)

    def replace(self, **kwargs) -> "SystemParams":
        return dataclasses.replace(self, **kwargs)

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "epsilon": self.epsilon,
            "gamma": self.gamma,
            "omega_r": self.omega_r,
            "g": self.g,
            "n_max": int(self.n_max),
        }


@dataclass(frozen=True)
class SingleQubitData:
    """Closed-form eigendata of one gain qubit (qubit 1).

    lam is the principal-branch eigenvalue sqrt((delta/2)^2 + (eps/2 +
    i gamma)^2) (Re lam >= 0); rights/lefts are binormalized; s and t are the
    diagonal and off-diagonal matrix elements of sigma_z in this eigenbasis.
    The loss qubit's data is the entrywise complex conjugate.
    """

    lam: complex
    right_plus: np.ndarray
    right_minus: np.ndarray
    left_plus: np.ndarray
    left_minus: np.ndarray
    s: complex
    t: complex


def _destroy(n_levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), 1).astype(complex)


def _kron3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.kron(np.kron(a, b), c)


def _qubit_hamiltonians(params: SystemParams):
    """(gain, loss) single-qubit 2x2 blocks; loss = conj(gain)."""
    gain = 0.5 * params.delta * SIGMA_X + (0.5 * params.epsilon + 1j * params.gamma) * SIGMA_Z
    return gain, gain.conj()


def build_full_hamiltonian(params: SystemParams) -> np.ndarray:
    """Dense H on the ordered product basis |q1> (x) |q2> (x) |n>.

    Qubit basis states are the sigma_z eigenstates (up = index 0); the boson
    index runs fastest.  The result is complex symmetric (H = H^T) because
    every term is real symmetric except the diagonal gain/loss part.
    """
    nb = int(params.n_max) + 1
    id2 = np.eye(2, dtype=complex)
    idb = np.eye(nb, dtype=complex)
    a = _destroy(nb)
    number = a.conj().T @ a
    h_gain, h_loss = _qubit_hamiltonians(params)
    h = (
        _kron3(h_gain, id2, idb)
        + _kron3(id2, h_loss, idb)
        + params.omega_r * _kron3(id2, id2, number)
    )
    h += params.g * coupling_operator(params.n_max)
    return h


def coupling_operator(n_max: int) -> np.ndarray:
    """Dimensionless longitudinal coupling (sz_1 + sz_2)(adag + a)."""
    nb = int(n_max) + 1
    id2 = np.eye(2, dtype=complex)
    a = _destroy(nb)
    x = a + a.conj().T
    return _kron3(SIGMA_Z, id2, x) + _kron3(id2, SIGMA_Z, x)


def hamiltonian_parts(params: SystemParams):
    """(H0, V) with H = H0 + g V; H0 is the g = 0 Hamiltonian."""
    h0 = build_full_hamiltonian(params.replace(g=0.0))
    return h0, coupling_operator(params.n_max)


def parity_operator(n_max: int) -> np.ndarray:
    """Qubit-exchange operator |q1 q2 n> -> |q2 q1 n>; Hermitian involution."""
    swap = np.zeros((4, 4), dtype=complex)
    swap[0, 0] = swap[3, 3] = 1.0
    swap[1, 2] = swap[2, 1] = 1.0
    return np.kron(swap, np.eye(int(n_max) + 1, dtype=complex))


def single_qubit_data(params: SystemParams) -> SingleQubitData:
    """Closed-form biorthogonal eigendata of the gain qubit.

    Right vectors are the unnormalized closed forms
        |+> = (eps/2 + i gamma + lam, delta/2),
        |-> = (-delta/2, eps/2 + i gamma + lam);
    the lefts are their transposes divided by the common factor
    N = (delta/2)^2 + (eps/2 + i gamma + lam)^2 = 2 lam (eps/2 + i gamma + lam).

    Raises SingleQubitEP where lam or N vanish (the single-qubit exceptional
    point gamma -> Omega/2 at eps = 0, where the eigenbasis degenerates).
    """
    z = 0.5 * params.epsilon + 1j * params.gamma
    lam = complex(np.sqrt(complex((0.5 * params.delta) ** 2 + z**2)))
    scale = max(params.omega, 1e-300)
    if abs(lam) < 1e-12 * scale:
        raise SingleQubitEP(
            f"single-qubit eigenvalue lambda = {lam:.3e} vanishes; "
            "the qubit eigenbasis is defective here"
        )
    r_plus = np.array([z + lam, 0.5 * params.delta], dtype=complex)
    r_minus = np.array([-0.5 * params.delta, z + lam], dtype=complex)
    norm = (0.5 * params.delta) ** 2 + (z + lam) ** 2
    if abs(norm) < 1e-24 * scale**2:
        raise SingleQubitEP("left/right normalization factor vanishes (qubit EP)")
    return SingleQubitData(
        lam=lam,
        right_plus=r_plus,
        right_minus=r_minus,
        left_plus=r_plus / norm,
        left_minus=r_minus / norm,
        s=z / lam,
        t=0.5 * params.delta / lam,
    )


def two_spin_sigma_action(data: SingleQubitData, label: str):
    """Action of sz_1 + sz_2 on a two-spin eigenbasis state.

    ``label`` picks the state |s1 s2bar> out of '++', '+-', '-+', '--' (the
    second spin lives in the conjugated eigenbasis).  Returns the expansion
    coefficients as ``[(label, coeff), ...]`` with the diagonal term first:

        (sz_1 + sz_2)|+ -bar> = (s - s*)|+ -bar> - t|- -bar> - t*|+ +bar>

    and analogously for the other three states (flip of spin 1 carries -t,
    flip of spin 2 carries -t*).
    """
    if label not in _TWO_SPIN_LABELS:
        raise InvalidLabel(f"label must be one of {_TWO_SPIN_LABELS}, got {label!r}")
    s, t = data.s, data.t
    sign1 = 1.0 if label[0] == "+" else -1.0
    sign2 = 1.0 if label[1] == "+" else -1.0
    diag = sign1 * s + sign2 * s.conjugate()
    flip1 = ("-" if label[0] == "+" else "+") + label[1]
    flip2 = label[0] + ("-" if label[1] == "+" else "+")
    return [(label, diag), (flip1, -t), (flip2, -t.conjugate())]


@dataclass(frozen=True)
class ResonantGroup:
    """Embedded near-resonant triple basis at Fock number n.

    rights columns / lefts rows are full-space vectors for
    (|+ -bar; n>, |- +bar; n>, |- -bar; n+1>) in that fixed order, with the
    g = 0 energies.
    """

    labels: tuple[str, ...]
    energies: np.ndarray
    rights: np.ndarray
    lefts: np.ndarray


def _fock(nb: int, n: int) -> np.ndarray:
    v = np.zeros(nb, dtype=complex)
    v[n] = 1.0
    return v


def _product_state(q1_r, q2_r, fock_vec):
    return np.kron(np.kron(q1_r, q2_r), fock_vec)


def resonant_group_basis(params: SystemParams, n: int = 0) -> ResonantGroup:
    """The analytic triple (|+ -bar; n>, |- +bar; n>, |- -bar; n+1>).

    These three product states are near-degenerate when omega_r is close to
    Omega: their g = 0 energies are (lam - lam*, lam* - lam, omega_r - lam -
    lam*) + n omega_r.  Requires n + 1 <= n_max.
    """
    n = int(n)
    if n < 0 or n + 1 > params.n_max:
        raise InvalidParams(
            f"resonant group at n = {n} needs n + 1 <= n_max = {params.n_max}"
        )
    d = single_qubit_data(params)
    nb = params.n_max + 1
    lam = d.lam
    members = (
        (f"+-:{n}", d.right_plus, d.right_minus.conj(), d.left_plus,
         d.left_minus.conj(), n, lam - lam.conjugate()),
        (f"-+:{n}", d.right_minus, d.right_plus.conj(), d.left_minus,
         d.left_plus.conj(), n, lam.conjugate() - lam),
        (f"--:{n + 1}", d.right_minus, d.right_minus.conj(), d.left_minus,
         d.left_minus.conj(), n + 1, -(lam + lam.conjugate())),
    )
    labels, energies, rights, lefts = [], [], [], []
    for label, q1r, q2r, q1l, q2l, nn, e_qubit in members:
        labels.append(label)
        energies.append(e_qubit + nn * params.omega_r)
        rights.append(_product_state(q1r, q2r, _fock(nb, nn)))
        lefts.append(_product_state(q1l, q2l, _fock(nb, nn)))
    return ResonantGroup(
        labels=tuple(labels),
        energies=np.asarray(energies, dtype=complex),
        rights=np.column_stack(rights),
        lefts=np.vstack(lefts),
    )


def unperturbed_eigensystem(params: SystemParams):
    """Exact analytic eigensystem of H0 = H(g = 0) on the full product basis.

    Returns ``(eig, labels)`` with labels like '+-:3' aligned to the (Re, Im)
    sorted order of ``eig.values``.  Rights are normalized to unit norm and
    the lefts absorb the binormalization, matching the numeric convention.
    """
    d = single_qubit_data(params)
    nb = params.n_max + 1
    lam = d.lam
    q_r = {"+": d.right_plus, "-": d.right_minus}
    q_l = {"+": d.left_plus, "-": d.left_minus}
    q_e = {"+": lam, "-": -lam}
    labels, values, rights, lefts = [], [], [], []
    for s1 in "+-":
        for s2 in "+-":
            for n in range(nb):
                labels.append(f"{s1}{s2}:{n}")
                values.append(q_e[s1] + q_e[s2].conjugate() + n * params.omega_r)
                rights.append(
                    _product_state(q_r[s1], q_r[s2].conj(), _fock(nb, n))
                )
                lefts.append(
                    _product_state(q_l[s1], q_l[s2].conj(), _fock(nb, n))
                )
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    labels = tuple(labels[int(i)] for i in order)
    right_mat = np.column_stack([rights[int(i)] for i in order])
    left_mat = np.vstack([lefts[int(i)] for i in order])
    # unit-norm rights, lefts absorb the factor (same convention as the solver)
    norms = np.linalg.norm(right_mat, axis=0)
    right_mat = right_mat / norms
    left_mat = left_mat * norms[:, None]
    h0 = build_full_hamiltonian(params.replace(g=0.0))
    residual = float(np.max(np.linalg.norm(h0 @ right_mat - right_mat * values, axis=0)))
    eig = BiorthogonalEigensystem(values, right_mat, left_mat, residual)
    return eig, labels


def effective_matrix_full(params: SystemParams, n: int = 0) -> EffectiveHamiltonian:
    """Exact second-order effective 3x3 matrix on the resonant triple.

    Valid at any gamma below the single-qubit EP.  With w0 = omega_r and the
    single-qubit quantities (lam, s, t), at Fock sector n (n = 0 shown;
    higher sectors pick up the bosonic enhancement factors sqrt(n + 1) on the
    photon-exchange couplings and extra virtual paths through sector n - 1):

        H11 =  2i Im lam - g^2 [ t*^2/(w0 + 2 lam*) - 4 (Im s)^2/w0 ]
        H22 = -2i Im lam - g^2 [ t^2 /(w0 + 2 lam ) - 4 (Im s)^2/w0 ]
        H33 = w0 - 2 Re lam - 4 g^2 [ (Re s)^2/w0 + Re(t^2/(w0 + 2 lam)) ]
        H12 = H21 = -g^2 |t|^2 Re(1/(w0 + 2 lam))
        H13 = H31 = -g t,    H23 = H32 = -g t*.

    The matrix is pseudo-Hermitian under the (1 <-> 2) exchange parity, so its
    characteristic polynomial is real.
    """
    d = single_qubit_data(params)
    w0 = params.omega_r
    g = params.g
    nn = int(n)
    lam, s, t = d.lam, d.s, d.t
    den = w0 + 2.0 * lam
    den_dn = w0 - 2.0 * lam
    if min(abs(den), abs(den_dn)) < 1e-12 * max(params.omega, w0):
        raise InvalidParams("resonator denominator w0 +- 2 lam vanishes")
    im_s_sq = s.imag**2
    t2_up = t**2 / den
    tc2_up = t.conjugate() ** 2 / den.conjugate()
    h11 = 2j * lam.imag + g**2 * (
        4.0 * im_s_sq / w0
        - (nn + 1) * tc2_up
        + nn * (t2_up + t.conjugate() ** 2 / den_dn.conjugate())
    )
    h22 = -2j * lam.imag + g**2 * (
        4.0 * im_s_sq / w0
        - (nn + 1) * t2_up
        + nn * (tc2_up + t**2 / den_dn)
    )
    h33 = w0 - 2.0 * lam.real - g**2 * (
        4.0 * s.real**2 / w0 + 2.0 * (nn + 2) * t2_up.real
    )
    h12 = -(g**2) * abs(t) ** 2 * (
        (1.0 / den).real - nn * (1.0 / den_dn).real
    )
    h13 = -g * np.sqrt(nn + 1.0) * t
    h23 = -g * np.sqrt(nn + 1.0) * t.conjugate()
    matrix = np.array(
        [[h11, h12, h13], [h12, h22, h23], [h13, h23, h33]], dtype=complex
    )
    if nn:
        matrix = matrix + nn * params.omega_r * np.eye(3)
    return EffectiveHamiltonian(
        matrix, (f"+-:{nn}", f"-+:{nn}", f"--:{nn + 1}"), params.g
    )


def effective_matrix_approx(params: SystemParams, n: int = 0) -> EffectiveHamiltonian:
    """Leading-order effective 3x3 matrix in the parity-adapted basis.

    Valid for gamma << Omega.  Basis: bright and dark combinations
    (|+ -bar> +- |- +bar>)/sqrt(2) at Fock n, then |- -bar; n+1>.  With
    dw = omega_r - Omega:

        [ -2 g^2 sin^2(th)/(w_r + Omega)   2i gamma cos(th)    -sqrt2 g sin(th) ]
        [  2i gamma cos(th)                0                    0               ]
        [ -sqrt2 g sin(th)                 0                    H33             ]

        H33 = dw - 4 g^2 [ cos^2(th)/w_r + sin^2(th)/(w_r + Omega) ].

    Gain/loss enters only through the bright/dark coupling 2i gamma cos(th);
    the dark state decouples from the photon exchange entirely.
    """
    th = params.theta
    w = params.omega
    wr = params.omega_r
    g = params.g
    gam = params.gamma
    h11 = -2.0 * g**2 * np.sin(th) ** 2 / (wr + w)
    h12 = 2j * gam * np.cos(th)
    h13 = -np.sqrt(2.0) * g * np.sin(th)
    h33 = (wr - w) - 4.0 * g**2 * (
        np.cos(th) ** 2 / wr + np.sin(th) ** 2 / (wr + w)
    )
    matrix = np.array(
        [[h11, h12, h13], [h12, 0.0, 0.0], [h13, 0.0, h33]], dtype=complex
    )
    nn = int(n)
    if nn:
        matrix = matrix + nn * params.omega_r * np.eye(3)
    return EffectiveHamiltonian(
        matrix, (f"sym:{nn}", f"asym:{nn}", f"--:{nn + 1}"), params.g
    )


def parity_transform(matrix) -> np.ndarray:
    """Conjugate a 3x3 triple matrix into the parity-adapted basis.

    Applies the self-inverse F (equal-weight mixing of the first two states)
    on both sides: F M F.  Under F the exchange parity [[0,1,0],[1,0,0],
    [0,0,1]] becomes diag(1, -1, 1).
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (3, 3):
        raise DimensionMismatch(f"expected a 3x3 matrix, got {m.shape}")
    f = PARITY_BASIS_CHANGE
    return f @ m @ f


def effective_matrix_numeric(params: SystemParams, n: int = 0) -> EffectiveHamiltonian:
    """Second-order effective matrix from the generic machinery.

    Feeds the exact analytic unperturbed eigensystem and the longitudinal
    coupling into the generic second-order reduction, retaining the resonant
    triple at Fock number n in its fixed order.  Agrees entrywise with
    :func:`effective_matrix_full` (up to the n*omega_r offset convention,
    which is included here).
    """
    nn = int(n)
    if nn < 0 or nn + 1 > params.n_max:
        raise InvalidParams(
            f"resonant group at n = {nn} needs n + 1 <= n_max = {params.n_max}"
        )
    eig, labels = unperturbed_eigensystem(params)
    v = coupling_operator(params.n_max)
    wanted = (f"+-:{nn}", f"-+:{nn}", f"--:{nn + 1}")
    p_indices = tuple(labels.index(w) for w in wanted)
    group = QuasiDegenerateGroup(p_indices, eig.dim)
    return swt.effective_hamiltonian(eig, v, params.g, group, labels=wanted)


def params_from_mapping(mapping: Mapping) -> SystemParams:
    """Build parameters from a flat mapping (e.g. a parsed JSON config).

    Accepts either (delta, epsilon) or (omega, theta) but not both; remaining
    keys are gamma, omega_r, g, n_max with their defaults.
    """
    known = {"delta", "epsilon", "omega", "theta", "gamma", "omega_r", "g", "n_max"}
    unknown = set(mapping) - known
    if unknown:
        raise InvalidParams(f"unknown parameter keys: {sorted(unknown)}")
    cartesian = {"delta", "epsilon"} & set(mapping)
    angular = {"omega", "theta"} & set(mapping)
    if cartesian and angular:
        raise InvalidParams(
            "give either (delta, epsilon) or (omega, theta), not a mixture"
        )
    rest = {
        k: (int(mapping[k]) if k == "n_max" else float(mapping[k]))
        for k in ("gamma", "omega_r", "g", "n_max")
        if k in mapping
    }
    if angular:
        if angular != {"omega", "theta"}:
            raise InvalidParams("omega and theta must be given together")
        return SystemParams.from_angle(
            float(mapping["omega"]), float(mapping["theta"]), **rest
        )
    if cartesian != {"delta", "epsilon"}:
        raise InvalidParams("delta and epsilon must be given together")
    return SystemParams(
        delta=float(mapping["delta"]), epsilon=float(mapping["epsilon"]), **rest
    )


def load_params(path) -> SystemParams:
    """Read a JSON parameter file; see :func:`params_from_mapping`."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidParams("parameter file must contain a JSON object")
    return params_from_mapping(data)
