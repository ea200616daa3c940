import math

import numpy as np
import pytest

from macrosize import fisher, oscillator, quantum
from macrosize.errors import DomainError
from macrosize.measures import constants
from macrosize.oscillator import (
    DELTA_U_PRESETS,
    HarmonicChain,
    OscillatorMode,
    chain_oracle,
    circular_drum,
    mode_volume,
    square_drum,
    uniform_body,
)

C = constants()

TEUFEL = dict(density=2.71e3, mean_atomic_mass=27.0 * C.m_u)


def test_drum_fundamental_fraction_closed_form():
    geom = circular_drum(7.5e-6, 100e-9, **TEUFEL)
    mode = mode_volume(geom, "fundamental")
    assert mode.mode_volume / geom.volume == pytest.approx(0.2695, abs=1e-4)


def test_drum_fraction_quadrature_agrees():
    geom = circular_drum(7.5e-6, 100e-9, **TEUFEL)
    closed = mode_volume(geom, "fundamental")
    numerical = mode_volume(geom, "fundamental", numerical=True)
    assert numerical.mode_volume == pytest.approx(closed.mode_volume, rel=1e-6)


def test_square_drum_quarter():
    geom = square_drum(1.7e-3, 50e-9, density=3.17e3, mean_atomic_mass=20.0 * C.m_u)
    mode = mode_volume(geom, "fundamental")
    assert mode.mode_volume / geom.volume == pytest.approx(0.25, abs=1e-12)
    numerical = mode_volume(geom, "fundamental", numerical=True)
    assert numerical.mode_volume == pytest.approx(mode.mode_volume, rel=1e-6)


def test_uniform_mode_full_volume():
    geom = uniform_body(1e-15, density=2.65e3, mean_atomic_mass=20.0 * C.m_u)
    mode = mode_volume(geom, "uniform")
    assert mode.mode_volume == geom.volume
    assert mode.mode_mass == pytest.approx(geom.total_mass, rel=1e-12)


def test_custom_grid_mode_matches_square_closed_form():
    side, thickness = 1.0e-3, 50e-9
    geom = square_drum(side, thickness, density=3.17e3, mean_atomic_mass=20.0 * C.m_u)
    n = 201
    xs = np.linspace(0, side, n)
    w = np.outer(np.sin(np.pi * xs / side), np.sin(np.pi * xs / side))
    mode = mode_volume(geom, w, grid_spacing=(xs[1] - xs[0], xs[1] - xs[0]))
    assert mode.mode_volume == pytest.approx(0.25 * geom.volume, rel=1e-5)


def test_custom_grid_requires_unit_peak():
    geom = square_drum(1e-3, 50e-9, density=3.17e3, mean_atomic_mass=20.0 * C.m_u)
    w = 0.5 * np.ones((11, 11))
    with pytest.raises(DomainError, match="unit peak"):
        mode_volume(geom, w, grid_spacing=(1e-4, 1e-4))


def test_mode_mass_never_exceeds_total():
    for geom in (
        circular_drum(7.5e-6, 100e-9, **TEUFEL),
        square_drum(1.7e-3, 50e-9, density=3.17e3, mean_atomic_mass=20.0 * C.m_u),
        uniform_body(1e-15, density=2.65e3, mean_atomic_mass=20.0 * C.m_u),
    ):
        for kind in ("fundamental", "uniform"):
            mode = mode_volume(geom, kind)
            assert mode.mode_volume <= geom.volume * (1 + 1e-12)
            assert mode.mode_mass <= geom.total_mass * (1 + 1e-12)


def test_teufel_geometry_reproduces_mode_parameters():
    geom = circular_drum(7.5e-6, 100e-9, **TEUFEL)
    mode = mode_volume(geom, "fundamental", omega=2 * math.pi * 1.1e7)
    assert mode.mode_mass == pytest.approx(1.3e-14, rel=0.01)
    assert mode.mode_particle_number == pytest.approx(2.9e11, rel=0.01)
    assert mode.zero_point == pytest.approx(7.8e-15, rel=0.02)


def test_thermal_qfi_ground_state():
    mode = OscillatorMode(mode_mass=1e-14, zero_point=1e-14)
    f_q, f_p = oscillator.thermal_mode_qfi(mode, 0.0)
    assert f_q == pytest.approx(4.0 * (1e-14 * 1e-14) ** 2, rel=1e-12)
    assert f_p == pytest.approx(4.0 * (C.hbar / 2e-14) ** 2, rel=1e-12)


@pytest.mark.parametrize("nbar,dim", [(0.0, 60), (0.5, 60), (1.0, 60), (5.0, 102)])
def test_thermal_qfi_matches_spectral_oracle(nbar, dim):
    # Spectral check in oscillator units: Q = M x with Var(x)_vac = dX_zp^2.
    mode = OscillatorMode(mode_mass=1.0, zero_point=1.0, omega=C.hbar / 2.0)
    f_q, _f_p = oscillator.thermal_mode_qfi(mode, nbar)
    rho = quantum.thermal_state(nbar, dim) if nbar > 0 else quantum.vacuum_state(dim)
    _a, x, _p = quantum.fock_operators(dim, nu=1.0)  # nu = dX_zp^2 = 1
    spectral = fisher.qfi(rho, x).value  # Q = M x with M = 1
    assert f_q == pytest.approx(spectral, rel=1e-6)


def test_thermal_qfi_momentum_matches_spectral_oracle():
    nbar, dim = 1.0, 60
    hbar = 1.0
    mode = OscillatorMode(mode_mass=1.0, zero_point=1.0, omega=hbar / 2.0)
    consts_like = constants()
    rho = quantum.thermal_state(nbar, dim)
    _a, _x, p = quantum.fock_operators(dim, nu=1.0, hbar=hbar)
    spectral = fisher.qfi(rho, p).value
    expected = 4.0 * (hbar / 2.0) ** 2 / (2 * nbar + 1)
    assert spectral == pytest.approx(expected, rel=1e-6)
    del consts_like


def test_thermal_sizes_teufel_row():
    mode = OscillatorMode(
        mode_mass=1.3e-14, zero_point=7.8e-15, mode_particle_number=2.9e11
    )
    report = oscillator.thermal_sizes(mode, 0.34, DELTA_U_PRESETS["Al"])
    assert report.n_ext == pytest.approx(7.9e17, rel=0.10)
    assert report.n_ent == pytest.approx(3.7e4, rel=0.10)


def test_thermal_sizes_verhagen_row():
    mode = OscillatorMode(
        mode_mass=3.2e-12, zero_point=1.8e-16, mode_particle_number=9.8e13
    )
    report = oscillator.thermal_sizes(mode, 1.7, DELTA_U_PRESETS["SiO2"])
    assert report.n_ext == pytest.approx(1.0e19, rel=0.10)
    assert report.n_ent == pytest.approx(1.2e3, rel=0.10)


def test_sizes_scale_inverse_occupation():
    mode = OscillatorMode(mode_mass=1e-12, zero_point=1e-15, mode_particle_number=1e10)
    base = oscillator.thermal_sizes(mode, 0.0, 1e-11)
    for nbar in (0.5, 3.0, 40.0):
        report = oscillator.thermal_sizes(mode, nbar, 1e-11)
        factor = 2 * nbar + 1
        assert report.n_ext * factor == pytest.approx(base.n_ext, rel=1e-12)
        assert report.n_ent * factor == pytest.approx(base.n_ent, rel=1e-12)
        assert report.n_ext_momentum * factor == pytest.approx(
            base.n_ext_momentum, rel=1e-12
        )
    big = oscillator.thermal_sizes(mode, 1e9, 1e-11)
    assert big.n_ext < 1e-9 * base.n_ext


def test_measured_vacuum_consistent_with_thermal_ground():
    mode = OscillatorMode(
        mode_mass=1.3e-14, zero_point=7.8e-15, mode_particle_number=2.9e11
    )
    thermal = oscillator.thermal_sizes(mode, 0.0, 1.7e-11)
    measured = oscillator.measured_qfi_sizes(mode, 2.0, 1.7e-11)
    assert measured.n_ext == pytest.approx(thermal.n_ext, rel=1e-12)
    assert measured.n_ent == pytest.approx(thermal.n_ent, rel=1e-12)


def test_measured_squeezed_ratio():
    mode = OscillatorMode(mode_mass=1e-12, zero_point=1e-16, mode_particle_number=1e12)
    ground = oscillator.measured_qfi_sizes(mode, 2.0, 1e-11)
    squeezed = oscillator.measured_qfi_sizes(mode, 4.2, 1e-11)
    assert squeezed.n_ext / ground.n_ext == pytest.approx(2.1, rel=1e-12)


def test_measured_bild_row():
    mode = OscillatorMode(
        mode_mass=4.0e-9, zero_point=6.5e-19, mode_particle_number=1.2e17
    )
    report = oscillator.measured_qfi_sizes(
        mode, 7.0, DELTA_U_PRESETS["sapphire"], vacuum_reference=4.0
    )
    assert report.n_ext == pytest.approx(1.5e21, rel=0.10)
    assert report.n_ent == pytest.approx(2.0e3, rel=0.10)


def test_collective_scaling():
    mode = OscillatorMode(mode_mass=1e-12, zero_point=1e-15, mode_particle_number=1e10)
    base = oscillator.thermal_sizes(mode, 0.4, 1.7e-11)
    scaled = oscillator.collective_scaling(base, 6)
    assert scaled.n_ext == pytest.approx(36 * base.n_ext, rel=1e-12)
    assert scaled.n_ent == pytest.approx(6 * base.n_ent, rel=1e-12)
    assert scaled.inputs["independent_n_ext"] == pytest.approx(6 * base.n_ext)
    assert scaled.inputs["independent_n_ent"] == pytest.approx(base.n_ent)
    identity = oscillator.collective_scaling(base, 1)
    assert identity.n_ext == base.n_ext and identity.n_ent == base.n_ent


def test_levitated_rossi_row():
    report = oscillator.levitated_sizes(
        mass=1.2e-18,
        coherence_length=7.3e-11,
        delta_x_cm=1.2e-10,
        atom_count=3.6e7,
        delta_u=DELTA_U_PRESETS["SiO2"],
    )
    assert report.n_ext == pytest.approx(9.9e17, rel=0.10)
    assert report.n_ent == pytest.approx(1.3e7, rel=0.10)


def test_levitated_limits():
    tiny = oscillator.levitated_sizes(1e-18, 0.0, 1e-10, 1e7)
    assert tiny.n_ext == 0.0 and tiny.n_ent == 0.0
    # dX_cm >> du: N_ent ~ N (chi / dX_cm)^2
    rep = oscillator.levitated_sizes(1e-18, 5e-11, 1e-9, 1e7, delta_u=1e-12)
    assert rep.n_ent == pytest.approx(1e7 * (5e-11 / 1e-9) ** 2, rel=1e-3)


# ---------------------------------------------------------------------------
# chain oracle
# ---------------------------------------------------------------------------

def _omega(l):
    return 0.1 * np.asarray(l, dtype=float)


def test_chain_zeta_orthogonality():
    chain = HarmonicChain(32, _omega, 0.0)
    # Full-length "region" recovers the orthogonality integral.
    zeta = chain.zeta(3, 1)
    expected = np.zeros(32)
    expected[2] = chain.mode_volume_1d
    assert np.allclose(zeta[0], expected, atol=1e-10)


def test_chain_zero_temperature_denominator_is_zero_point_sum():
    chain = HarmonicChain(64, _omega, 0.0)
    vs = chain.variance_sum(2, 64, addressed_variance=float(chain.nu[1]))
    zeta = chain.zeta(2, 64)
    weights = (chain.mode_mass / chain.mode_volume_1d) ** 2 * chain.nu
    manual = float(np.sum(zeta**2 @ weights))
    assert vs == pytest.approx(manual, rel=1e-12)


def test_chain_exact_vs_continuum_single_excitation():
    # One quantum in mode 2, warm environment: regions (atoms) are far
    # smaller than every thermally excited wavelength.
    chain = HarmonicChain(64, _omega, 0.8)
    nu2 = float(chain.nu[1])
    exact, continuum = chain_oracle(
        64, _omega, 0.8, n_regions=64, addressed=2,
        addressed_variance=3 * nu2, addressed_qfi=12 * nu2,
    )
    assert exact == pytest.approx(continuum, rel=0.05)


def test_chain_exact_never_exceeds_region_count():
    for n_regions in (4, 8, 16, 64):
        exact, _ = chain_oracle(64, _omega, 0.8, n_regions=n_regions, addressed=2)
        assert exact <= n_regions + 1e-9


def test_chain_fine_graining_monotone_when_covariances_positive():
    chain = HarmonicChain(64, _omega, 0.8)
    sums = []
    for n_regions in (8, 16, 32, 64):
        cov = chain.region_covariance(2, n_regions)
        sums.append(chain.variance_sum(2, n_regions))
        if n_regions > 8:
            # children of one parent are adjacent pairs in the refinement
            parents = n_regions // 2
            pair_cov = [cov[2 * j, 2 * j + 1] for j in range(parents)]
            assert min(pair_cov) >= 0.0
    assert all(a >= b - 1e-12 for a, b in zip(sums, sums[1:]))


def test_chain_rejects_bad_inputs():
    with pytest.raises(DomainError):
        HarmonicChain(64, _omega, -1.0)
    with pytest.raises(DomainError):
        HarmonicChain(4096, _omega, 0.0)
    with pytest.raises(DomainError):
        chain_oracle(64, _omega, 0.0, n_regions=7)  # does not divide 64
    with pytest.raises(DomainError):
        HarmonicChain(16, lambda l: 0.0 * np.asarray(l), 0.0)
