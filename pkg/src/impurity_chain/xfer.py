"""Transfer matrices, partition functions and the defect dimer's reduced state.

The classical trace over nodal spins is a product of 2x2 transfer matrices,
one per cell, with entries given by the sector Boltzmann factors.  The chain
carries one defect cell; its reduced density matrix follows from sandwiching
the defect's unnormalized thermal cell matrices between powers of the host
transfer matrix.

Everything that can underflow or overflow at T = 0.01 is kept in
(mantissa, log-scale) or per-sector log-offset form.  Ratios of thermal
weights are always formed from quantities sharing one scale, so results are
exact in the energy-shift choices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    ModelParams,
    OverflowRisk,
    SECTOR_VALUES,
    boltzmann_weights,
    dimer_block,
    dimer_spectrum,
    family_energy_minimum,
)

__all__ = [
    "InvalidN",
    "DegenerateGap",
    "NotAState",
    "ScaledTransferMatrix",
    "TmEigen",
    "XState",
    "transfer_matrices",
    "tm_eigen",
    "partition_function",
    "cell_density_elements",
    "assemble_limit_state",
    "impurity_density_matrix",
    "finite_n_density_matrix",
]


class InvalidN(ValueError):
    """Chain length must be an integer >= 2."""


class DegenerateGap(ArithmeticError):
    """Transfer-matrix spectrum collapsed; cannot happen for positive weights."""


class NotAState(ValueError):
    """Matrix fails Hermiticity, trace or positivity checks beyond tolerance."""


@dataclass(frozen=True)
class ScaledTransferMatrix:
    """2x2 nonnegative symmetric matrix stored as mantissa * exp(log_scale).

    The mantissa is normalized so its largest entry is 1; log_scale restores
    the absolute magnitude (including the energy-shift factor), so products
    and eigenvalues can be taken without ever exponentiating the scale.
    """

    m: np.ndarray
    log_scale: float


@dataclass(frozen=True)
class TmEigen:
    """Transfer-matrix eigenvalues (mantissa form, shared log_scale) and gap Q."""

    lambda_plus: float
    lambda_minus: float
    q: float
    log_scale: float


@dataclass(frozen=True)
class XState:
    """Two-qubit X-form density matrix: four populations + one real coherence.

    Basis {|00>, |01>, |10>, |11>}; r23 is the (|01>, |10>) matrix element.
    The anti-diagonal corners vanish identically for this model.
    """

    r11: float
    r22: float
    r33: float
    r44: float
    r23: float

    @property
    def trace(self) -> float:
        return self.r11 + self.r22 + self.r33 + self.r44

    def to_matrix(self) -> np.ndarray:
        return np.array([
            [self.r11, 0.0, 0.0, 0.0],
            [0.0, self.r22, self.r23, 0.0],
            [0.0, self.r23, self.r33, 0.0],
            [0.0, 0.0, 0.0, self.r44],
        ])

    def eigenvalues(self) -> np.ndarray:
        """Closed-form eigenvalues, ascending: r11, r44 and the central pair."""
        mean = 0.5 * (self.r22 + self.r33)
        half_gap = 0.5 * math.hypot(self.r22 - self.r33, 2.0 * self.r23)
        return np.sort([self.r11, self.r44, mean + half_gap, mean - half_gap])

    def validate(self, trace_tol: float = 1e-12, psd_tol: float = 1e-12) -> "XState":
        if abs(self.trace - 1.0) > trace_tol:
            raise NotAState(f"trace {self.trace!r} deviates from 1 beyond {trace_tol:g}")
        if float(self.eigenvalues()[0]) < -psd_tol:
            raise NotAState(f"negative eigenvalue {self.eigenvalues()[0]:.3e}")
        return self


def _weights_matrix(w: dict[int, float]) -> np.ndarray:
    # sector map: (++) -> +1, (+-) = (-+) -> 0, (--) -> -1
    return np.array([[w[1], w[0]], [w[0], w[-1]]])


def transfer_matrices(p: ModelParams) -> tuple[ScaledTransferMatrix, ScaledTransferMatrix]:
    """Host and defect transfer matrices in normalized (mantissa, log-scale) form.

    Each family is referenced to its own sector minimum before normalization;
    the log scales carry the exact relative magnitude of the two matrices, so
    no ratio between them is ever lost to underflow.
    """
    beta = p.beta
    shifts = (family_energy_minimum(p, False), family_energy_minimum(p, True))
    host = boltzmann_weights(p, shifts[0])[0]
    defect = boltzmann_weights(p, shifts[1])[1]
    out = []
    for w, shift in ((host, shifts[0]), (defect, shifts[1])):
        m = _weights_matrix(w)
        top = float(m.max())
        out.append(ScaledTransferMatrix(m / top, math.log(top) - beta * shift))
    return out[0], out[1]


def tm_eigen(W: ScaledTransferMatrix) -> TmEigen:
    """Eigenvalues (w11 + w22 +- Q)/2 with Q = hypot(w11 - w22, 2*w12)."""
    w11, w22, w12 = W.m[0, 0], W.m[1, 1], W.m[0, 1]
    q = math.hypot(w11 - w22, 2.0 * w12)
    trace = w11 + w22
    return TmEigen(0.5 * (trace + q), 0.5 * (trace - q), q, W.log_scale)


def _sector_coefficients(w: dict[int, float]) -> dict[int, float]:
    """Infinite-chain weight of each nodal sector around one cell.

    Equal to (Q + D, 4*w0, Q - D) for s = (+1, 0, -1) with D = w(+1) - w(-1);
    this is the dominant-eigenvector projection of the host transfer matrix,
    written so that no term is a difference of close numbers: the smaller of
    Q -+ D is evaluated as 4*w0^2 / (Q +- D).
    """
    d = w[1] - w[-1]
    q = math.hypot(d, 2.0 * w[0])
    if q == 0.0:
        raise DegenerateGap("all host sector weights vanished")
    if d >= 0.0:
        qpd = q + d
        qmd = 4.0 * w[0] * w[0] / qpd
    else:
        qmd = q - d
        qpd = 4.0 * w[0] * w[0] / qmd
    return {1: qpd, 0: 4.0 * w[0], -1: qmd}


def _xstate_from_parts(num: np.ndarray, den: float) -> XState:
    return XState(
        r11=float(num[0, 0] / den),
        r22=float(num[1, 1] / den),
        r33=float(num[2, 2] / den),
        r44=float(num[3, 3] / den),
        r23=float(num[1, 2] / den),
    )


def cell_density_elements(p: ModelParams, sector, impurity: bool = True,
                          shift: float | None = None) -> np.ndarray:
    """Unnormalized thermal cell matrix sum_j e^{-beta(e_j - shift)} |phi_j><phi_j|.

    Its trace equals the sector Boltzmann factor at the same shift, and only
    X-pattern entries are nonzero (the eigenvectors never mix the outer and
    central subspaces).  Default shift: the family's sector minimum.
    """
    if shift is None:
        shift = family_energy_minimum(p, impurity)
    eig = dimer_spectrum(dimer_block(p, sector, impurity=impurity))
    exponents = -p.beta * (eig.energies - shift)
    if np.any(exponents > 700.0):
        raise OverflowRisk(f"cell exponent {exponents.max():.3g} too large; bad shift")
    bw = np.exp(exponents)
    return (eig.vectors * bw) @ eig.vectors.T


def assemble_limit_state(w: dict[int, float], cells: dict[int, np.ndarray]) -> XState:
    """Thermodynamic-limit dimer state from host weights and one cell's matrices.

    Any common rescaling of the host weights, and any common rescaling of the
    cell matrices, cancels between numerator and denominator.  The denominator
    is the trace of the numerator, so the result has unit trace by
    construction.
    """
    coef = _sector_coefficients(w)
    num = sum(coef[s] * cells[s] for s in SECTOR_VALUES)
    den = float(np.trace(num))
    if den <= 0.0 or not math.isfinite(den):
        raise DegenerateGap(f"degenerate sector mixture, normalization {den!r}")
    return _xstate_from_parts(num, den)


def impurity_density_matrix(p: ModelParams, impurity: bool = True) -> XState:
    """Exact thermodynamic-limit reduced density matrix of the defect dimer.

    With impurity=False the defect cell is replaced by a host cell, which
    gives the homogeneous chain's dimer state (identical to gamma = 0).

    Sector contributions are combined in log domain: each cell matrix is
    referenced to its own sector minimum and re-weighted by
    exp(log(coefficient) - beta * sector offset), so points deep in the
    low-temperature regime neither overflow nor collapse to 0/0 even when
    host chain and defect prefer different nodal alignments.
    """
    beta = p.beta
    w = boltzmann_weights(p, family_energy_minimum(p, False))[0]
    coef = _sector_coefficients(w)

    mins, cells, traces = {}, {}, {}
    for s in SECTOR_VALUES:
        eig = dimer_spectrum(dimer_block(p, s, impurity=impurity))
        m = float(eig.energies[0])
        bw = np.exp(-beta * (eig.energies - m))
        cells[s] = (eig.vectors * bw) @ eig.vectors.T
        traces[s] = float(bw.sum())
        mins[s] = m
    mref = min(mins.values())

    logs = {
        s: (math.log(coef[s]) if coef[s] > 0.0 else -math.inf) - beta * (mins[s] - mref)
        for s in SECTOR_VALUES
    }
    lmax = max(logs.values())
    if lmax == -math.inf:
        raise DegenerateGap("every sector weight vanished in log domain")
    gains = {s: math.exp(logs[s] - lmax) for s in SECTOR_VALUES}

    num = sum(gains[s] * cells[s] for s in SECTOR_VALUES)
    den = sum(gains[s] * traces[s] for s in SECTOR_VALUES)
    # the dominant sector contributes gain 1 and trace >= 1
    tr_num = float(np.trace(num))
    if not math.isfinite(tr_num) or tr_num <= 0.0:
        raise DegenerateGap(f"non-finite sector mixture at {p!r}")
    if abs(tr_num - den) > 1e-12 * den:
        raise DegenerateGap(
            f"normalization mismatch: trace {tr_num!r} vs weight sum {den!r}"
        )
    return _xstate_from_parts(num, tr_num)


def partition_function(p: ModelParams, N: int) -> float:
    """log Z_N of the N-cell periodic chain containing the defect cell.

    Z_N = a * L+^{N-1} + d * L-^{N-1} where L+- are the host transfer-matrix
    eigenvalues and (a, d) project the defect matrix on the host eigenbasis.
    Evaluated in log domain; the energy-shift factors are restored exactly.
    """
    _check_length(N)
    beta = p.beta
    shift_h = family_energy_minimum(p, False)
    shift_i = family_energy_minimum(p, True)
    w = boltzmann_weights(p, shift_h)[0]
    wt = boltzmann_weights(p, shift_i)[1]

    coef = _sector_coefficients(w)
    d_ = w[1] - w[-1]
    q = math.hypot(d_, 2.0 * w[0])
    if q == 0.0:
        raise DegenerateGap("host transfer matrix vanished")
    lam_p = 0.5 * (w[1] + w[-1] + q)
    lam_m = 0.5 * (w[1] + w[-1] - q)
    # a = u+ . Wt u+ and d = u- . Wt u- with orthonormal host eigenvectors
    a = (coef[1] * wt[1] + coef[-1] * wt[-1] + 4.0 * w[0] * wt[0]) / (2.0 * q)
    dd = (coef[-1] * wt[1] + coef[1] * wt[-1] - 4.0 * w[0] * wt[0]) / (2.0 * q)
    ratio = lam_m / lam_p
    tail = a + dd * ratio ** (N - 1)
    if tail <= 0.0:
        raise DegenerateGap(f"nonpositive partition sum {tail!r}")
    return (
        math.log(tail)
        + (N - 1) * (math.log(lam_p) - beta * shift_h)
        - beta * shift_i
    )


def finite_n_density_matrix(p: ModelParams, N: int, impurity: bool = True) -> XState:
    """Exact N-cell periodic-chain reduced density matrix of the defect dimer.

    Implements the similarity-transform route: the host transfer matrix is
    diagonalized by U, and every element is tr(U^-1 P U diag(L+, L-)^{N-1})
    normalized by the same expression with the defect transfer matrix.  The
    defect's position in the ring drops out by cyclic invariance of the trace.

    This is the validation path (exact for any N >= 2 at moderate
    temperatures); the thermodynamic limit has its own hardened routine.
    """
    _check_length(N)
    shift_h = family_energy_minimum(p, False)
    shift_c = family_energy_minimum(p, impurity)
    w = boltzmann_weights(p, shift_h)[0]
    wt = boltzmann_weights(p, shift_c)[1 if impurity else 0]
    cells = {s: cell_density_elements(p, s, impurity=impurity, shift=shift_c)
             for s in SECTOR_VALUES}

    d_ = w[1] - w[-1]
    q = math.hypot(d_, 2.0 * w[0])
    if q == 0.0 or w[0] == 0.0:
        raise DegenerateGap("host transfer matrix not diagonalizable by U")
    lam_p = 0.5 * (w[1] + w[-1] + q)
    lam_m = 0.5 * (w[1] + w[-1] - q)
    u = np.array([[lam_p - w[-1], lam_m - w[-1]], [w[0], w[0]]])
    u_inv = np.array([
        [1.0 / q, -(lam_m - w[-1]) / (q * w[0])],
        [-1.0 / q, (lam_p - w[-1]) / (q * w[0])],
    ])
    ratio_pow = (lam_m / lam_p) ** (N - 1)

    def traced(block: np.ndarray) -> float:
        sandwich = u_inv @ block @ u
        return float(sandwich[0, 0] + sandwich[1, 1] * ratio_pow)

    den = traced(_weights_matrix(wt))
    if den <= 0.0 or not math.isfinite(den):
        raise DegenerateGap(f"partition sum degenerate for N={N}")

    num = np.zeros((4, 4))
    for k, l in ((0, 0), (1, 1), (2, 2), (3, 3), (1, 2)):
        block = np.array([
            [cells[1][k, l], cells[0][k, l]],
            [cells[0][k, l], cells[-1][k, l]],
        ])
        num[k, l] = traced(block)
    return _xstate_from_parts(num, den)


def _check_length(N) -> None:
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 2:
        raise InvalidN(f"chain length must be an integer >= 2, got {N!r}")
