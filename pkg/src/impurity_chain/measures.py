"""Quantum-information measures of a two-qubit X state.

Concurrence and l1 coherence use the X-state closed forms; the spin-spin
correlators are explicit traces against S^a x S^a; the quantum Fisher
information is the bipartite sum over the local orthonormal observable set
sqrt(2) * {I, S^x, S^y, S^z} acting on both qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import ModelParams
from .xfer import XState, impurity_density_matrix

__all__ = [
    "MeasureBundle",
    "measure_bundle",
    "concurrence_x",
    "l1_coherence",
    "spin_correlators",
    "spin_correlators_shortcut",
    "qfi",
    "qfi_field_derivative",
    "central_difference",
]

_I2 = np.eye(2, dtype=complex)
_SX = np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex)
_SY = np.array([[0.0, -0.5j], [0.5j, 0.0]], dtype=complex)
_SZ = np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex)

_SXSX = np.kron(_SX, _SX).real
_SZSZ = np.kron(_SZ, _SZ).real

# sqrt(2) * (a x I + I x a) for a in {I, Sx, Sy, Sz}; the identity term
# provably contributes nothing but is kept so the observable set is complete
_QFI_OBSERVABLES = tuple(
    math.sqrt(2.0) * (np.kron(a, _I2) + np.kron(_I2, a))
    for a in (_I2, _SX, _SY, _SZ)
)

# eigenvalue pairs with tau_i + tau_j below this fraction of the largest
# eigenvalue lie outside the state's support and are skipped
_SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class MeasureBundle:
    """All measures of one thermal state; qfi_dB only when a derivative was requested."""

    concurrence: float
    coherence_l1: float
    sxsx: float
    szsz: float
    qfi: float
    qfi_dB: float | None = None


def concurrence_x(st: XState) -> float:
    """Wootters concurrence of an X state: 2*max(|r23| - sqrt(r11*r44), 0)."""
    value = 2.0 * (abs(st.r23) - math.sqrt(max(st.r11 * st.r44, 0.0)))
    return min(max(value, 0.0), 1.0)


def l1_coherence(st: XState) -> float:
    """Sum of absolute off-diagonal elements; for an X state just 2*|r23|."""
    return 2.0 * abs(st.r23)


def spin_correlators(st: XState) -> tuple[float, float]:
    """(<Sx Sx>, <Sz Sz>) by explicit trace against the product operators."""
    rho = st.to_matrix()
    return float(np.trace(rho @ _SXSX)), float(np.trace(rho @ _SZSZ))


def spin_correlators_shortcut(st: XState) -> tuple[float, float]:
    """Alternate shortcut convention (r22/2, 1/4 - r23), kept for comparison.

    Disagrees with the explicit traces except on special states; emitted only
    under the CLI debug flag so the two conventions can be compared.
    """
    return st.r22 / 2.0, 0.25 - st.r23


def qfi(st: XState) -> float:
    """Bipartite quantum Fisher information of an X state.

    F = sum_eta F(rho, A_eta x I + I x A_eta) over the local observable set
    sqrt(2)*{I, Sx, Sy, Sz}, each term being
    2 * sum_{ij} (tau_i - tau_j)^2 / (tau_i + tau_j) |<chi_i|G|chi_j>|^2
    in the state's eigenbasis.  Pairs outside the support (tau_i + tau_j
    below 1e-12 of the largest eigenvalue) are skipped, which keeps the
    value continuous through eigenvalue crossings.
    """
    tau, vecs = np.linalg.eigh(st.to_matrix())
    tau = np.clip(tau, 0.0, None)
    cutoff = _SUPPORT_TOL * float(tau.max()) if tau.max() > 0.0 else math.inf
    total = 0.0
    for g in _QFI_OBSERVABLES:
        mat = vecs.conj().T @ g @ vecs
        for i in range(4):
            for j in range(4):
                pair = tau[i] + tau[j]
                if pair <= cutoff:
                    continue
                diff = tau[i] - tau[j]
                if diff == 0.0:
                    continue
                total += 2.0 * diff * diff / pair * abs(mat[i, j]) ** 2
    return float(total)


def central_difference(f, x: float, step: float) -> float:
    """Symmetric difference quotient (f(x+h) - f(x-h)) / 2h, O(h^2) accurate."""
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    return (f(x + step) - f(x - step)) / (2.0 * step)


def qfi_field_derivative(p: ModelParams, delta_b: float = 1e-3,
                         impurity: bool = True) -> float:
    """dF/dB by central difference over the full pipeline.

    The thermal state is rebuilt from scratch at B +- delta_b.  The default
    step resolves the field scales on which F varies in this model (~0.05).
    """
    def f_of_b(b: float) -> float:
        return qfi(impurity_density_matrix(replace(p, B=b), impurity=impurity))

    return central_difference(f_of_b, p.B, delta_b)


def measure_bundle(p: ModelParams, impurity: bool = True,
                   with_derivative: bool = False,
                   delta_b: float = 1e-3) -> MeasureBundle:
    """Every measure of the thermal dimer state at one parameter point."""
    st = impurity_density_matrix(p, impurity=impurity)
    xx, zz = spin_correlators(st)
    return MeasureBundle(
        concurrence=concurrence_x(st),
        coherence_l1=l1_coherence(st),
        sxsx=xx,
        szsz=zz,
        qfi=qfi(st),
        qfi_dB=(qfi_field_derivative(p, delta_b, impurity) if with_derivative else None),
    )
