import numpy as np
import pytest

from impurity_chain import ModelParams, XState


def draw_params(rng, **fixed) -> ModelParams:
    """Random valid parameter set; moderate T so enumeration stays exact."""
    draw = dict(
        J=float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)),
        Delta=float(rng.uniform(0.0, 2.5)),
        J0=float(rng.uniform(-2.0, 2.0)),
        g1=float(rng.uniform(0.5, 2.0)),
        g2=float(rng.uniform(0.5, 6.0)),
        g3=float(rng.uniform(0.5, 6.0)),
        gamma=float(rng.uniform(-0.9, 0.5)),
        B=float(rng.uniform(0.0, 3.0)),
        T=float(rng.uniform(0.2, 3.0)),
    )
    draw.update(fixed)
    return ModelParams(**draw)


def draw_xstate(rng) -> XState:
    """Random valid X state: positive diagonal, coherence inside the PSD disc."""
    diag = rng.uniform(0.05, 1.0, size=4)
    diag /= diag.sum()
    r23 = float(rng.uniform(-1.0, 1.0) * np.sqrt(diag[1] * diag[2]))
    return XState(r11=float(diag[0]), r22=float(diag[1]),
                  r33=float(diag[2]), r44=float(diag[3]), r23=r23)


@pytest.fixture
def rng():
    return np.random.default_rng(20250808)
