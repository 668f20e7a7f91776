import cmath
import math

import numpy as np
import pytest

from opaherald.fidelity import (
    fidelity,
    fidelity_closed_form,
    fit_named_targets,
    golden_section_max,
    optimize_cat_fit,
)
from opaherald.fock import Cutoff, DimensionMismatch, StateVector
from opaherald.herald import GainParam, critical_gain, herald_single_photon, sv_output_closed_form
from opaherald.states import (
    CatSpec,
    SqueezeParam,
    cat,
    coherent,
    fock_state,
    squeezed_cat_target,
    squeezed_vacuum,
    vacuum,
)


class TestFidelity:
    def test_self(self, dim64):
        psi = coherent(0.6, dim64)
        assert fidelity(psi, psi) == pytest.approx(1.0)

    def test_orthogonal(self, dim64):
        assert fidelity(fock_state(0, dim64), fock_state(1, dim64)) == 0.0

    def test_coherent_pair(self):
        co = Cutoff(48)
        val = fidelity(coherent(1.0, co), coherent(-1.0, co))
        assert val == pytest.approx(math.exp(-4.0), abs=1e-12)

    def test_symmetric_and_phase_invariant(self, dim64):
        a = coherent(0.8, dim64).normalized()
        b = squeezed_vacuum(SqueezeParam(0.5), dim64).normalized()
        assert fidelity(a, b) == pytest.approx(fidelity(b, a))
        rotated = StateVector(cmath.exp(0.7j) * a.amplitudes, dim64)
        assert fidelity(rotated, b) == pytest.approx(fidelity(a, b))

    def test_dimension_mismatch(self, dim64):
        with pytest.raises(DimensionMismatch):
            fidelity(vacuum(dim64), vacuum(Cutoff(32)))


class TestClosedFormFidelity:
    def test_identical_squeezed_vacua(self, dim64):
        # mu = 0, gamma = r'' collapses the expression to unity
        form, _ = sv_output_closed_form(0.8, 0.0, GainParam(1.0), dim64)
        assert form.c2 == 0.0
        assert fidelity_closed_form(form, form.xi_pp.r, 0.0) == pytest.approx(1.0)

    def test_reference_point(self, dim64):
        form, _ = sv_output_closed_form(1.0, 0.0, GainParam(2.5), dim64)
        assert fidelity_closed_form(form, 0.4470, 1.3796) == pytest.approx(0.998,
                                                                           abs=1e-3)

    def test_matches_numeric_overlap_on_grid(self, dim64):
        form, realized = sv_output_closed_form(1.0, 0.0, GainParam(2.5), dim64)
        worst = 0.0
        for gamma in np.linspace(0.1, 0.9, 10):
            for alpha in np.linspace(0.4, 2.2, 10):
                closed = fidelity_closed_form(form, gamma, alpha)
                numeric = fidelity(realized,
                                   squeezed_cat_target(SqueezeParam(gamma), alpha, dim64))
                worst = max(worst, abs(closed - numeric))
        assert worst <= 5e-4

    def test_rejects_zero_c0(self, dim64):
        from opaherald.herald import SvOutputForm
        form = SvOutputForm(c0=0.0, c2=1.0, xi_pp=SqueezeParam(0.1), theta=0.0)
        with pytest.raises(ValueError):
            fidelity_closed_form(form, 0.5, 1.0)


class TestOptimizeCatFit:
    def test_recovers_exact_target(self, dim64):
        target = squeezed_cat_target(SqueezeParam(0.6), 1.1, dim64)
        fit = optimize_cat_fit(target)
        assert fit.converged
        assert fit.gamma_opt == pytest.approx(0.6, abs=1e-3)
        assert fit.alpha_opt == pytest.approx(1.1, abs=1e-3)
        assert fit.fidelity >= 1.0 - 1e-8

    def test_squeezed_vacuum_degenerate_row(self, dim64):
        # at alpha = 0 the target family degenerates; ties resolve to the
        # smallest alpha
        sv = squeezed_vacuum(SqueezeParam(1.0), dim64).normalized()
        fit = optimize_cat_fit(sv)
        assert fit.fidelity >= 1.0 - 1e-6
        assert fit.gamma_opt == pytest.approx(1.0, abs=1e-2)
        assert fit.alpha_opt <= 0.02

    def test_herald_g15_fit(self, sv_r1_96):
        out = herald_single_photon(sv_r1_96.normalized(), GainParam(1.5))
        fit = optimize_cat_fit(out.state)
        # the true optimum of the validated objective; the printed reference
        # table sits within 0.01 of gamma and 0.01 of alpha of these values
        assert fit.gamma_opt == pytest.approx(0.6094, abs=2e-3)
        assert fit.alpha_opt == pytest.approx(1.2150, abs=2e-3)
        assert fit.fidelity == pytest.approx(0.9993, abs=2e-4)


class TestGoldenSection:
    def test_parabola(self):
        x, val = golden_section_max(lambda t: 1.0 - (t - 0.3) ** 2, -1.0, 1.0)
        assert x == pytest.approx(0.3, abs=1e-5)
        assert val == pytest.approx(1.0, abs=1e-9)


class TestNamedTargets:
    def test_vacuum_row(self, dim64):
        rows = fit_named_targets(vacuum(dim64))
        by_name = {name: f_val for name, f_val, _ in rows}
        assert by_name["vacuum"] == pytest.approx(1.0)

    def test_even_cat_critical_gain_hits_superposition_target(self, dim64):
        out = herald_single_photon(cat(CatSpec(1.01, "even"), dim64).normalized(),
                                   critical_gain(1.01))
        rows = {name: f_val for name, f_val, _ in fit_named_targets(out.state)}
        assert rows["zero_minus_1.416_two"] > 0.999

    def test_odd_cat_critical_gain_hits_squeezed_three(self, dim64):
        out = herald_single_photon(cat(CatSpec(1.5, "odd"), dim64).normalized(),
                                   critical_gain(1.5))
        rows = {name: (f_val, params)
                for name, f_val, params in fit_named_targets(out.state)}
        f_val, params = rows["squeezed_fock_3"]
        assert f_val > 0.99
        assert params["r"] == pytest.approx(-0.23, abs=0.02)
