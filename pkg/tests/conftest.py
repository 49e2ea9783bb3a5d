"""Shared fixtures: built-in models and the 8-panel run matrix.

The panel sweep (both built-in models, all 8 form/secular/variant
combinations) is expensive enough to share session-wide; several
acceptance criteria consume the same runs.
"""

import numpy as np
import pytest

from oqsim.config import config_from_dict
from oqsim.propagator import relaxation_timescale
from oqsim.runs import PANELS, build_generator, run_trajectory


@pytest.fixture(scope="session")
def three_level_config():
    return config_from_dict({"model": "three_level"})


@pytest.fixture(scope="session")
def pe545_config():
    return config_from_dict({"model": "pe545"})


@pytest.fixture(scope="session")
def panel_runs(three_level_config, pe545_config):
    """{model: {label: (trajectory, relaxation timescale)}} for all panels."""
    from dataclasses import replace

    out = {}
    for cfg in (three_level_config, pe545_config):
        panels = {}
        for label, (form, secular, variant) in PANELS.items():
            pcfg = replace(cfg, form=form, secular=secular,
                           bath=replace(cfg.bath, variant=variant))
            traj = run_trajectory(pcfg)
            ts = relaxation_timescale(build_generator(pcfg))
            panels[label] = (traj, ts)
        out[cfg.model] = panels
    return out


def random_hermitian(rng, dim, scale_cm1=100.0):
    """Random dense Hermitian matrix in cm^-1 (for property tests)."""
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale_cm1 * (m + m.conj().T) / 2.0
