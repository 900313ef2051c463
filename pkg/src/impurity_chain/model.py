"""Dimer Hamiltonian blocks, spectra and Boltzmann weights.

The chain alternates classical Ising "nodal" spins with quantum spin-1/2
XXZ dimers.  Conditioned on the two nodal spins flanking a dimer, the cell
Hamiltonian is a 4x4 block that depends on them only through their sum
s = mu_i + mu_{i+1}, so every thermal quantity reduces to the three nodal
sectors s in {+1, 0, -1}.

One designated dimer carries a field distortion: its two Zeeman fields are
rescaled by (1 + gamma), which models a local magnetic defect.  Host and
defect cells share the same exchange structure and differ only in fields.

Units: |J| sets the energy scale, k_B = 1 and mu_0 = 1, so B and T are
energies as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OverflowRisk",
    "ModelParams",
    "NodalSector",
    "SECTORS",
    "SECTOR_VALUES",
    "DimerEigensystem",
    "zeeman_fields",
    "dimer_block",
    "dimer_spectrum",
    "sector_eigensystems",
    "family_energy_minimum",
    "global_energy_minimum",
    "boltzmann_weights",
]

SECTOR_VALUES = (1, 0, -1)

# exp() overflows just above exp(709); stay clear of it
_MAX_EXPONENT = 700.0


class OverflowRisk(ValueError):
    """A Boltzmann exponent -beta*(energy - shift) would overflow exp()."""


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the chain; the single source of truth.

    J      : XX exchange inside a dimer (energy unit, must be nonzero)
    Delta  : exchange anisotropy of the z-z term relative to J
    J0     : Ising coupling between a dimer's first spin and its nodal spins
    g1..g3 : gyromagnetic factors of the nodal spin and the two dimer spins
    gamma  : impurity strength; the defect dimer feels fields g_k*B*(1+gamma)
    B      : external field magnitude
    T      : absolute temperature (> 0)
    """

    J: float = 1.0
    Delta: float = 1.0
    J0: float = 1.0
    g1: float = 1.2
    g2: float = 5.0
    g3: float = 1.1
    gamma: float = 0.0
    B: float = 0.0
    T: float = 1.0

    def __post_init__(self):
        if self.J == 0.0:
            raise ValueError("J = 0 degenerates the dimer eigenbasis; unsupported")
        if not self.T > 0.0:
            raise ValueError(f"temperature must be positive, got {self.T}")

    @property
    def beta(self) -> float:
        return 1.0 / self.T


@dataclass(frozen=True)
class NodalSector:
    """Joint state of the two nodal spins around one dimer, reduced to their sum.

    s = +1 and -1 are realized by one (mu_i, mu_{i+1}) pair each, s = 0 by two;
    cell energies cannot tell (+1/2, -1/2) from (-1/2, +1/2).
    """

    s: int
    multiplicity: int


SECTORS = (NodalSector(1, 1), NodalSector(0, 2), NodalSector(-1, 1))


def _sector_value(sector) -> int:
    s = sector.s if isinstance(sector, NodalSector) else int(sector)
    if s not in SECTOR_VALUES:
        raise ValueError(f"nodal sector sum must be -1, 0 or +1, got {s}")
    return s


def zeeman_fields(p: ModelParams) -> tuple[float, float, float, float, float]:
    """Zeeman energies (B1, B2, B3, h2, h3).

    B_k = g_k * B for the nodal spin (k=1) and the two dimer spins (k=2,3);
    h_k = g_k * B * (1 + gamma) are the distorted dimer fields of the defect
    cell.  The nodal field is never distorted.
    """
    b1 = p.g1 * p.B
    b2 = p.g2 * p.B
    b3 = p.g3 * p.B
    scale = 1.0 + p.gamma
    return b1, b2, b3, b2 * scale, b3 * scale


def dimer_block(p: ModelParams, sector, impurity: bool = False) -> np.ndarray:
    """4x4 cell Hamiltonian in the basis {|00>, |01>, |10>, |11>}, |0> = S^z +1/2.

    Diagonal: z-z exchange J*Delta/4 signs, the nodal coupling J0*s/2 acting on
    the first dimer spin, the dimer Zeeman terms and the shared nodal Zeeman
    -B1*s/2.  The only off-diagonal element is the J/2 flip-flop between |01>
    and |10>.  Exactly symmetric by construction.
    """
    s = _sector_value(sector)
    b1, b2h, b3h, h2, h3 = zeeman_fields(p)
    b2, b3 = (h2, h3) if impurity else (b2h, b3h)
    zz = p.J * p.Delta / 4.0
    nodal = p.J0 * s / 2.0
    f1 = b1 * s / 2.0
    h = np.zeros((4, 4))
    h[0, 0] = zz + nodal - f1 - (b2 + b3) / 2.0
    h[1, 1] = -zz + nodal - f1 - (b2 - b3) / 2.0
    h[2, 2] = -zz - nodal - f1 + (b2 - b3) / 2.0
    h[3, 3] = zz - nodal - f1 + (b2 + b3) / 2.0
    h[1, 2] = h[2, 1] = p.J / 2.0
    return h


@dataclass(frozen=True)
class DimerEigensystem:
    """Eigenvalues in ascending order with matching orthonormal eigenvector columns.

    The outer basis states |00> and |11> are exact eigenstates and appear as
    exact unit columns; the two remaining columns live in the {|01>, |10>}
    plane.  Which column sits where follows the energy ordering.
    """

    energies: np.ndarray
    vectors: np.ndarray


def dimer_spectrum(H: np.ndarray) -> DimerEigensystem:
    """Diagonalize a dimer block in closed form.

    The central 2x2 block is solved through its mixing angle
    theta = atan2(2*H12, H11 - H22), which stays well-conditioned for any
    field or anisotropy: eigenvalues mean +- hypot(H11-H22, 2*H12)/2 and
    eigenvectors (cos(theta/2), sin(theta/2)) / (-sin(theta/2), cos(theta/2)).
    At a degenerate central block the ground vector is (|01> - |10>)/sqrt(2)
    up to sign, i.e. equal magnitudes 1/sqrt(2).
    """
    a, b, c = H[1, 1], H[2, 2], H[1, 2]
    mean = 0.5 * (a + b)
    half_gap = 0.5 * math.hypot(a - b, 2.0 * c)
    theta = math.atan2(2.0 * c, a - b)
    co = math.cos(0.5 * theta)
    si = math.sin(0.5 * theta)
    energies = np.array([H[0, 0], mean + half_gap, mean - half_gap, H[3, 3]])
    vectors = np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, co, -si, 0.0],
        [0.0, si, co, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    order = np.argsort(energies, kind="stable")
    return DimerEigensystem(energies[order], vectors[:, order])


def sector_eigensystems(p: ModelParams, impurity: bool = False) -> dict[int, DimerEigensystem]:
    """Eigensystems of all three nodal sectors for one cell family."""
    return {s: dimer_spectrum(dimer_block(p, s, impurity=impurity)) for s in SECTOR_VALUES}


def family_energy_minimum(p: ModelParams, impurity: bool = False) -> float:
    """Lowest cell energy over the three sectors of one family (host or defect)."""
    return min(float(eig.energies[0]) for eig in sector_eigensystems(p, impurity).values())


def global_energy_minimum(p: ModelParams) -> float:
    """Lowest cell energy over all six sector spectra (both families)."""
    return min(family_energy_minimum(p, False), family_energy_minimum(p, True))


def boltzmann_weights(p: ModelParams, shift: float) -> tuple[dict[int, float], dict[int, float]]:
    """Sector Boltzmann factors w(s) = sum_j exp(-beta*(e_j(s) - shift)).

    Returns (host, defect) dicts keyed by the sector sum s.  The shift is a
    caller-chosen energy reference; choosing the relevant family minimum makes
    every exponent <= 0.  Raises OverflowRisk if any exponent would exceed
    700, which signals a badly chosen shift rather than bad physics.
    """
    beta = p.beta
    out = []
    for impurity in (False, True):
        weights = {}
        for s, eig in sector_eigensystems(p, impurity).items():
            exponents = -beta * (eig.energies - shift)
            if np.any(exponents > _MAX_EXPONENT):
                raise OverflowRisk(
                    f"exponent {exponents.max():.3g} > {_MAX_EXPONENT:g} for sector "
                    f"s={s} (impurity={impurity}); lower the energy shift"
                )
            weights[s] = float(np.exp(exponents).sum())
        out.append(weights)
    return out[0], out[1]
