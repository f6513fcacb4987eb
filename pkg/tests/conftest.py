import math

import pytest

from kinvlasov.config import Config, InitConfig, SpeciesConfig

PAIR_CHARGE = 1.0 / math.sqrt(8.0 * math.pi)


def pair_species(q=PAIR_CHARGE, m=1.0):
    return (SpeciesConfig("plus", +q, m), SpeciesConfig("minus", -q, m))


def landau_config(nx=64, n_p=128, amplitude=1e-3, c=4.0, relativistic=True,
                  force_mode="modified", cfl_fraction=0.9, t_end=1.0,
                  output_every=10**9, temperature=1.0, drift=0.0, k_mode=1):
    """Pair plasma with total plasma frequency 1 and k lambda_D = 0.3."""
    return Config(
        nx=nx, x_max=2.0 * math.pi / 0.3, np=n_p, p_max=8.0,
        c=c, relativistic=relativistic, force_mode=force_mode,
        cfl_fraction=cfl_fraction, t_end=t_end, output_every=output_every,
        species=pair_species(),
        init=InitConfig(preset="landau", n0=1.0, amplitude=amplitude,
                        k_mode=k_mode, temperature=temperature, drift=drift),
    )


@pytest.fixture
def small_landau():
    return landau_config(nx=32, n_p=32, t_end=0.5, output_every=4)
