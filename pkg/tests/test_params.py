import math
from dataclasses import FrozenInstanceError

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from photofpt import (
    DEFAULT_SEED,
    AtomModel,
    DetectorParams,
    QuantumDetectorParams,
    SeriesControl,
    SurvivalFactors,
    dimensionless_intensity,
    params_for_intensity,
)


def test_defaults_are_dark_unit_detector():
    p = DetectorParams(e_m=1.0, sigma=1.0)
    assert p.i_s == 0.0
    assert p.cross_section == 1.0
    assert p.time_scale == 1.0


def test_time_scale_units():
    p = DetectorParams(e_m=2.0, sigma=0.5)
    assert p.time_scale == pytest.approx(16.0, rel=1e-15)


@pytest.mark.parametrize("kwargs", [
    dict(e_m=0.0, sigma=1.0),
    dict(e_m=-1.0, sigma=1.0),
    dict(e_m=1.0, sigma=0.0),
    dict(e_m=1.0, sigma=-2.0),
    dict(e_m=1.0, sigma=1.0, i_s=-0.5),
    dict(e_m=1.0, sigma=1.0, cross_section=0.0),
    dict(e_m=math.nan, sigma=1.0),
])
def test_rejects_bad_detector_values(kwargs):
    with pytest.raises(ValueError):
        DetectorParams(**kwargs)


def test_detector_params_frozen():
    p = DetectorParams(e_m=1.0, sigma=1.0)
    with pytest.raises(FrozenInstanceError):
        p.e_m = 2.0


def test_dimensionless_group():
    p = DetectorParams(e_m=2.0, sigma=0.5, i_s=3.0)
    assert dimensionless_intensity(p) == pytest.approx(24.0, rel=1e-15)


@given(x=st.floats(0.0, 50.0), e_m=st.floats(1e-3, 1e3), sigma=st.floats(1e-3, 1e3))
def test_intensity_round_trip(x, e_m, sigma):
    p = params_for_intensity(x, e_m=e_m, sigma=sigma)
    assert dimensionless_intensity(p) == pytest.approx(x, rel=1e-12, abs=0.0)


def test_intensity_rejects_negative():
    with pytest.raises(ValueError):
        params_for_intensity(-0.1)


def test_tolerance_floor():
    ctrl = SeriesControl()
    # abs floor wins for small values, rel for large ones
    assert ctrl.tolerance_for(1e-6) == 1e-12
    assert ctrl.tolerance_for(10.0) == pytest.approx(1e-8, rel=1e-15)


@pytest.mark.parametrize("kwargs", [
    dict(n_images=0),
    dict(kl_max=0),
    dict(abs_tol=0.0),
    dict(rel_tol=-1e-9),
])
def test_series_control_validation(kwargs):
    with pytest.raises(ValueError):
        SeriesControl(**kwargs)


def test_survival_factor_product():
    f = SurvivalFactors(l_axis=0.5, k_axis=0.3, t=1.0)
    assert f.survival == pytest.approx(0.3 ** 2 * 0.5, rel=1e-15)
    assert f.t == 1.0


def test_quantum_threshold_equivalent():
    q = QuantumDetectorParams(eta=0.5, k_const=2.0)
    assert q.threshold_equivalent == 1.0
    assert QuantumDetectorParams(eta=1.0, k_const=4.0).threshold_equivalent == 0.25


@pytest.mark.parametrize("eta,k", [(0.0, 1.0), (1.5, 1.0), (-0.1, 1.0), (0.5, 0.0)])
def test_quantum_params_validation(eta, k):
    with pytest.raises(ValueError):
        QuantumDetectorParams(eta=eta, k_const=k)


@pytest.mark.parametrize("a", [1.0, 2.5])
def test_atom_density_normalized(a):
    """exp(-r/a)/(8 pi a^3) integrates to 1 against 4 pi r^2 dr."""
    atom = AtomModel(a=a)
    total, _ = quad(lambda r: atom.density(r) * 4.0 * math.pi * r * r, 0.0, np.inf)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_sigma_unit_scaling():
    assert AtomModel().sigma_unit == 1.0
    assert AtomModel(a=2.0).sigma_unit == pytest.approx(2.0 ** -3.5, rel=1e-15)
    assert AtomModel(hbar=3.0, c=2.0).sigma_unit == pytest.approx(3.0 * 2.0 ** 1.5, rel=1e-15)


def test_atom_model_validation():
    with pytest.raises(ValueError):
        AtomModel(a=0.0)
    with pytest.raises(ValueError):
        AtomModel(hbar=-1.0)


def test_default_seed_fits_rng_key():
    assert isinstance(DEFAULT_SEED, int)
    assert 0 <= DEFAULT_SEED < 2 ** 64
