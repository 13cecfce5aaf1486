import numpy as np
import pytest

from machzero.eos import GammaLaw
from machzero.fronttracker import Scenario, run
from machzero.laxwaves import State


def make_scenario(**kw):
    base = dict(
        gas=GammaLaw(1.0, 1.0),
        liquid_base=GammaLaw(1.0, 1.0),
        p_bar=1.0,
        kappa=0.2,
        m=1.0,
        eps=1e-3,
        t_end=1.0,
        seed=0,
    )
    base.update(kw)
    return Scenario(**base)


def standard_scenario(**kw):
    """Compression pulse in the left gas running into the slab."""
    return make_scenario(
        initial_left=State(1.0, 0.0),
        jumps=((-1.2, State(1.04, 0.0)), (-0.4, State(1.0, 0.0))),
        **kw,
    )


def small_scenario(rng, kappa, amp=1e-3):
    """Randomized small-amplitude datum, within the functional's
    small-data regime."""
    n = int(rng.integers(1, 4))
    zs = np.sort(rng.uniform(-1.5, -0.2, n))
    jumps = []
    for z in zs:
        jumps.append((float(z),
                      State(1.0 + float(rng.uniform(-amp, amp)),
                            float(rng.uniform(-amp, amp)))))
    return make_scenario(kappa=kappa, jumps=tuple(jumps), t_end=1.0,
                         eps=2e-3, seed=int(rng.integers(0, 2 ** 31)))


@pytest.fixture(scope="session")
def standard_run():
    return run(standard_scenario())
