"""Standard teleportation through two independent copies of a thermal channel.

The joint Bell measurement turns the channel pair into a depolarizing map:
rho_out = sum_{ij} p_i p_j (sigma_i x sigma_j) rho_in (sigma_i x sigma_j)
with p_i the Bell-basis populations of the channel state.  For an X-state
channel and the one-parameter input family
|psi_in> = cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>
everything collapses to closed forms, which are cross-checked against the
explicit Kraus composition on every call.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .xfer import XState

__all__ = [
    "FormulaMismatch",
    "InputState",
    "TeleportOutput",
    "bell_probabilities",
    "teleport_output",
    "output_concurrence",
    "fidelity",
    "average_fidelity",
    "beats_classical_bound",
]

_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)
_KRAUS = tuple(np.kron(a, b) for a in _PAULI for b in _PAULI)

# closed form and Kraus composition must agree to roundoff; anything past
# this is an implementation bug, not physics
_ROUTE_TOL = 1e-10

CLASSICAL_FIDELITY_BOUND = 2.0 / 3.0


class FormulaMismatch(AssertionError):
    """Closed-form output state disagrees with the Kraus composition."""


@dataclass(frozen=True)
class InputState:
    """Pure input |psi> = cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")

    @property
    def input_concurrence(self) -> float:
        return abs(math.sin(self.theta))

    def ket(self) -> np.ndarray:
        amp = cmath.exp(1j * self.phi) * math.sin(0.5 * self.theta)
        return np.array([0.0, amp, math.cos(0.5 * self.theta), 0.0], dtype=complex)

    def density_matrix(self) -> np.ndarray:
        k = self.ket()
        return np.outer(k, k.conj())


@dataclass(frozen=True)
class TeleportOutput:
    """Output state coefficients and the assembled 4x4 Hermitian matrix.

    c sits at |00><00| and |11><11|, f at |01><01|, g at |10><10|; kappa is
    the (|01>, |10>) coherence, stored together with its conjugate so the
    matrix is Hermitian.
    """

    c: float
    f: float
    g: float
    kappa: complex
    matrix: np.ndarray = field(repr=False)


def bell_probabilities(ch: XState) -> tuple[float, float, float, float]:
    """Bell-basis populations of the channel, ordered (Psi-, Phi-, Phi+, Psi+).

    With |Psi+-> = (|01> +- |10>)/sqrt(2) and |Phi+-> = (|00> +- |11>)/sqrt(2):
    p0 = (r22+r33)/2 - r23, p3 = (r22+r33)/2 + r23, p1 = p2 = (r11+r44)/2
    (the X channel has no |00><11| coherence).  Raises NotAState for an
    invalid channel.
    """
    ch.validate()
    central = 0.5 * (ch.r22 + ch.r33)
    outer = 0.5 * (ch.r11 + ch.r44)
    return (central - ch.r23, outer, outer, central + ch.r23)


def teleport_output(ch: XState, inp: InputState) -> TeleportOutput:
    """Output of teleporting `inp` through two independent copies of `ch`.

    Computes the closed form
    c = (r22+r33)(r11+r44),
    f = (r11+r44)^2 cos^2(theta/2) + (r22+r33)^2 sin^2(theta/2),
    g = same with the roles swapped,
    kappa = 2 e^{i phi} r23^2 sin(theta)
    and verifies it against the full 16-term Kraus composition; a mismatch
    beyond 1e-10 raises FormulaMismatch.
    """
    q_central = ch.r22 + ch.r33
    q_outer = ch.r11 + ch.r44
    cos2 = math.cos(0.5 * inp.theta) ** 2
    sin2 = math.sin(0.5 * inp.theta) ** 2
    c = q_central * q_outer
    f = q_outer ** 2 * cos2 + q_central ** 2 * sin2
    g = q_central ** 2 * cos2 + q_outer ** 2 * sin2
    kappa = 2.0 * cmath.exp(1j * inp.phi) * ch.r23 ** 2 * math.sin(inp.theta)
    matrix = np.array([
        [c, 0.0, 0.0, 0.0],
        [0.0, f, kappa, 0.0],
        [0.0, kappa.conjugate(), g, 0.0],
        [0.0, 0.0, 0.0, c],
    ], dtype=complex)

    kraus = _kraus_output(ch, inp)
    deviation = float(np.abs(matrix - kraus).max())
    if deviation > _ROUTE_TOL:
        raise FormulaMismatch(
            f"closed form deviates from Kraus composition by {deviation:.3e}"
        )
    return TeleportOutput(c=c, f=f, g=g, kappa=kappa, matrix=matrix)


def _kraus_output(ch: XState, inp: InputState) -> np.ndarray:
    probs = bell_probabilities(ch)
    rho_in = inp.density_matrix()
    weights = [pi * pj for pi in probs for pj in probs]
    out = np.zeros((4, 4), dtype=complex)
    for wgt, k in zip(weights, _KRAUS):
        out += wgt * (k @ rho_in @ k)
    return out


def output_concurrence(ch: XState, inp: InputState) -> float:
    """Concurrence of the output state: 2*max(2 r23^2 C_in - |q1 q2|, 0)."""
    q_central = ch.r22 + ch.r33
    q_outer = ch.r11 + ch.r44
    value = 2.0 * ch.r23 ** 2 * inp.input_concurrence - abs(q_central) * abs(q_outer)
    return 2.0 * max(value, 0.0)


def fidelity(ch: XState, inp: InputState) -> float:
    """Teleportation fidelity <psi_in| rho_out |psi_in> in closed form.

    F = sin^2(theta)/2 * [(r11+r44)^2 + 4 r23^2 - (r22+r33)^2] + (r22+r33)^2.
    """
    q_central = ch.r22 + ch.r33
    q_outer = ch.r11 + ch.r44
    bracket = q_outer ** 2 + 4.0 * ch.r23 ** 2 - q_central ** 2
    return 0.5 * math.sin(inp.theta) ** 2 * bracket + q_central ** 2


def average_fidelity(ch: XState) -> float:
    """Fidelity averaged over the input family with the sphere measure.

    F_A = [(r11+r44)^2 + 4 r23^2 - (r22+r33)^2]/3 + (r22+r33)^2; beating the
    classical bound requires F_A > 2/3.
    """
    q_central = ch.r22 + ch.r33
    q_outer = ch.r11 + ch.r44
    bracket = q_outer ** 2 + 4.0 * ch.r23 ** 2 - q_central ** 2
    return bracket / 3.0 + q_central ** 2


def beats_classical_bound(ch: XState) -> bool:
    """True when the channel teleports better than any classical protocol."""
    return average_fidelity(ch) > CLASSICAL_FIDELITY_BOUND
