import math

import numpy as np
import pytest

import kssim


def test_profile_origin_and_residual():
    prof = kssim.profile(mu=1.0, eps=0.02, n=2000)
    assert prof["Q"][0] == 8.0
    assert prof["residual"] <= 1e-11
    assert 0.0 < prof["mass"] < 8.0 * math.pi
    assert np.all(np.diff(prof["r"]) > 0)


def test_lattice_zeta_matches_frozen_value():
    assert kssim.square_lattice_zeta(-1.0) == pytest.approx(-0.22882431037721898, rel=1e-12)
    assert kssim.dirichlet_beta(2.0) == pytest.approx(0.91596559417721901, rel=1e-14)


def test_mode_spectrum_has_mass_mode():
    rep = kssim.mode_spectrum(0, cells=300)
    assert min(abs(z) for z in rep["eigenvalues"]) < 1e-6


def test_criterion_table():
    assert kssim.criterion_count() == 10
    assert kssim.criterion_title(1)
    res = kssim.run_criterion(10)
    assert res["pass"], res["measurements"]


def test_bad_parameters_raise():
    with pytest.raises(Exception):
        kssim.profile(mu=-1.0)
