"""Reflection coefficients, the per-frequency phi integrals, and the
Matsubara-summed free energy against brute-force quadrature oracles."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from filmcasimir import (
    C,
    HBAR,
    KB,
    ConvergenceError,
    DielectricModel,
    FilmState,
    Kind,
    Material,
    QuadratureConfig,
    dimensionless_params,
    free_energy,
    phi_alpha,
    reflection,
    zero_T_energy,
)
from filmcasimir.lifshitz_core import DEFAULT_QUAD

A100 = FilmState(a=100e-9, T=300.0)


def models(mat):
    return DielectricModel(Kind.PLASMA, mat), DielectricModel(Kind.DRUDE, mat)


class TestQuadratureConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            QuadratureConfig(rel_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureConfig(abs_tol=-1.0)
        with pytest.raises(ValueError):
            QuadratureConfig(max_l=0)


class TestReflection:
    def test_domain(self, gold):
        plasma, _ = models(gold)
        p = dimensionless_params(gold, A100)
        with pytest.raises(ValueError):
            reflection(plasma, 1.0, 0.5, p)  # y < zeta
        with pytest.raises(ValueError):
            reflection(plasma, -0.1, 1.0, p)

    def test_plasma_zero_frequency_limits(self, gold):
        plasma, _ = models(gold)
        p = dimensionless_params(gold, A100)
        w = p.omega_p_tilde
        for y in (0.3, 1.0, 7.0):
            r = reflection(plasma, 0.0, y, p)
            assert r.r_tm == pytest.approx(1.0, rel=1e-14, abs=0.0)
            s = math.sqrt(y * y + w * w)
            assert r.r_te == pytest.approx(w * w / (s + y) ** 2, rel=1e-13, abs=0.0)

    def test_drude_zero_frequency_limits(self, gold):
        _, drude = models(gold)
        p = dimensionless_params(gold, A100)
        for y in (0.3, 1.0, 7.0):
            r = reflection(drude, 0.0, y, p)
            assert r.r_tm == 1.0
            assert r.r_te == 0.0

    def test_drude_approaches_plasma_as_gamma_vanishes(self, gold, lossless):
        pg = dimensionless_params(gold, A100)
        pl = dimensionless_params(lossless, A100)
        zeta, y = 0.8, 1.7
        r_plasma = reflection(DielectricModel(Kind.PLASMA, gold), zeta, y, pg)
        r_drude0 = reflection(DielectricModel(Kind.DRUDE, lossless), zeta, y, pl)
        assert r_drude0.r_tm == pytest.approx(r_plasma.r_tm, rel=1e-12, abs=0.0)
        assert r_drude0.r_te == pytest.approx(r_plasma.r_te, rel=1e-12, abs=0.0)

    def test_textbook_forms_at_generic_point(self, gold):
        # unsimplified Fresnel forms, epsilon written out directly
        p = dimensionless_params(gold, A100)
        w = p.omega_p_tilde
        zeta, y = 0.5, 1.2
        eps = 1.0 + (w / zeta) ** 2
        s = math.sqrt(y * y + (eps - 1.0) * zeta * zeta)
        r_tm = (eps * y - s) / (eps * y + s)
        r_te = (y - s) / (y + s)
        got = reflection(DielectricModel(Kind.PLASMA, gold), zeta, y, p)
        assert got.r_tm == pytest.approx(r_tm, rel=1e-13, abs=0.0)
        assert got.r_te == pytest.approx(-r_te, abs=1e-13) or got.r_te == pytest.approx(
            abs(r_te), rel=1e-13
        )

    @given(
        zeta=st.floats(min_value=0.0, max_value=20.0),
        dy=st.floats(min_value=0.0, max_value=30.0),
        w=st.floats(min_value=0.05, max_value=40.0),
    )
    @settings(max_examples=120, deadline=None)
    def test_bounded_by_one(self, zeta, dy, w):
        mat = Material(name="m", omega_p=1e16, gamma_ref=5e13)
        a = w * C / (2.0 * mat.omega_p)
        s = FilmState(a=a, T=300.0)
        p = dimensionless_params(mat, s)
        for model in models(mat):
            r = reflection(model, zeta, zeta + dy, p)
            assert -1e-12 <= r.r_tm <= 1.0 + 1e-12
            assert -1e-12 <= r.r_te <= 1.0 + 1e-12


class TestPhiAlpha:
    @pytest.mark.parametrize(
        "w,x",
        [(1.0, 0.0), (1.0, 0.7), (5.0, 0.0), (5.0, 2.0), (9.139656208429367, 0.0), (15.0, 4.0)],
    )
    @pytest.mark.parametrize("pol", ["TM", "TE"])
    def test_plasma_matches_mpmath_oracle(self, pol, w, x):
        mat = Material(name="m", omega_p=1.37e16, gamma_ref=0.0)
        a = w * C / (2.0 * mat.omega_p)
        p = dimensionless_params(mat, FilmState(a=a, T=300.0))
        got = phi_alpha(DielectricModel(Kind.PLASMA, mat), pol, x, p)
        ref = oracles.mp_phi(w, x, pol)
        assert got == pytest.approx(ref, rel=1e-10, abs=1e-16)

    def test_frozen_values_at_gold_100nm(self, gold):
        p = dimensionless_params(gold, A100)
        plasma = DielectricModel(Kind.PLASMA, gold)
        assert phi_alpha(plasma, "TM", 0.0, p) == pytest.approx(
            -0.0010882584568746698, rel=1e-11
        )
        assert phi_alpha(plasma, "TE", 0.0, p) == pytest.approx(
            -0.0002706780178557719, rel=1e-11
        )

    @pytest.mark.parametrize("pol", ["TM", "TE"])
    @pytest.mark.parametrize("x", [0.05, 0.8, 3.0])
    def test_drude_matches_scipy_oracle(self, gold, pol, x):
        p = dimensionless_params(gold, A100)
        got = phi_alpha(DielectricModel(Kind.DRUDE, gold), pol, x, p)
        ref = oracles.scipy_phi(p.omega_p_tilde, x, kind="drude", gamma_tilde=p.gamma_tilde, pol=pol)
        assert got == pytest.approx(ref, rel=1e-9, abs=1e-16)

    def test_drude_zero_frequency_split(self, gold):
        # TM carries the ideal-metal integral, TE vanishes
        from filmcasimir.specialfn import ZETA3

        p = dimensionless_params(gold, A100)
        drude = DielectricModel(Kind.DRUDE, gold)
        assert phi_alpha(drude, "TM", 0.0, p) == pytest.approx(-ZETA3, rel=1e-10, abs=0.0)
        assert phi_alpha(drude, "TE", 0.0, p) == 0.0

    def test_nonpositive_and_decaying(self, gold):
        p = dimensionless_params(gold, A100)
        plasma = DielectricModel(Kind.PLASMA, gold)
        vals = [phi_alpha(plasma, "TM", x, p) for x in (0.0, 1.0, 4.0, 12.0)]
        assert all(v <= 0.0 for v in vals)
        assert abs(vals[-1]) < abs(vals[0])

    def test_domain(self, gold):
        p = dimensionless_params(gold, A100)
        plasma = DielectricModel(Kind.PLASMA, gold)
        with pytest.raises(ValueError):
            phi_alpha(plasma, "TM", -0.1, p)
        with pytest.raises(ValueError):
            phi_alpha(plasma, "XX", 0.1, p)


class TestFreeEnergy:
    def test_frozen_gold_100nm_300k(self, gold):
        plasma, drude = models(gold)
        fp = free_energy(plasma, A100)
        fd = free_energy(drude, A100)
        assert fp.value == pytest.approx(-3.294982459641842e-10, rel=1e-11, abs=0.0)
        assert fd.value == pytest.approx(-1.028920790569752e-08, rel=1e-11, abs=0.0)
        assert fp.model is Kind.PLASMA and fd.model is Kind.DRUDE
        assert fp.n_matsubara > 100
        assert fp.err_estimate >= 0.0
        assert abs(fd.value) > abs(fp.value)  # relaxation deepens the well

    @pytest.mark.parametrize("T", [300.0, 50.0])
    @pytest.mark.parametrize("kind", [Kind.PLASMA, Kind.DRUDE])
    def test_matches_brute_oracle(self, gold, T, kind):
        s = FilmState(a=100e-9, T=T)
        p = dimensionless_params(gold, s)
        gt = 0.0 if kind is Kind.PLASMA else p.gamma_tilde
        pref = KB * T / (8.0 * math.pi * s.a**2)
        brute = pref * oracles.brute_free_energy(p.omega_p_tilde, p.tau, gt)
        got = free_energy(DielectricModel(kind, gold), s)
        assert got.value == pytest.approx(brute, rel=1e-10, abs=0.0)
        assert abs(got.value - brute) <= max(10.0 * got.err_estimate, 1e-12 * abs(brute))

    def test_zero_temperature_rejected(self, gold):
        plasma, _ = models(gold)
        with pytest.raises(ValueError):
            free_energy(plasma, FilmState(a=100e-9, T=0.0))

    def test_convergence_error_on_small_max_l(self, gold):
        plasma, _ = models(gold)
        with pytest.raises(ConvergenceError):
            free_energy(plasma, A100, QuadratureConfig(max_l=50))

    def test_tolerance_insensitive(self, gold):
        plasma, _ = models(gold)
        loose = free_energy(plasma, A100, QuadratureConfig(rel_tol=1e-8, matsubara_tail_tol=1e-9))
        tight = free_energy(plasma, A100)
        assert loose.value == pytest.approx(tight.value, rel=1e-8, abs=0.0)


class TestZeroTEnergy:
    def test_frozen_gold_100nm(self, gold):
        plasma, drude = models(gold)
        e0 = zero_T_energy(plasma, FilmState(a=100e-9, T=0.0))
        assert e0 == pytest.approx(-3.294982065603918e-10, rel=1e-11, abs=0.0)
        # relaxation vanishes at T = 0: model choice is irrelevant
        assert zero_T_energy(drude, FilmState(a=100e-9, T=0.0)) == e0

    def test_matches_brute_oracle(self, gold):
        s = FilmState(a=100e-9, T=0.0)
        p = dimensionless_params(gold, s)
        pref = HBAR * C / (32.0 * math.pi**2 * s.a**3)
        brute = pref * oracles.brute_zero_t_energy(p.omega_p_tilde)
        got = zero_T_energy(DielectricModel(Kind.PLASMA, gold), s)
        assert got == pytest.approx(brute, rel=1e-10, abs=0.0)

    def test_temperature_on_state_ignored(self, gold):
        plasma, _ = models(gold)
        assert zero_T_energy(plasma, FilmState(a=100e-9, T=300.0)) == zero_T_energy(
            plasma, FilmState(a=100e-9, T=0.0)
        )

    def test_free_energy_approaches_zero_t_limit(self, gold):
        # thermal correction is a tiny negative shift at low T
        plasma, _ = models(gold)
        e0 = zero_T_energy(plasma, FilmState(a=100e-9, T=0.0))
        f2 = free_energy(plasma, FilmState(a=100e-9, T=2.0)).value
        assert f2 == pytest.approx(e0, rel=1e-9, abs=0.0)
        assert f2 < e0
