import math

import pytest

import _braggcascade as bc


def test_mode_solver_guidance():
    g = bc.WaveguideGeometry()
    te0 = bc.effective_index_2d(g, 1550.0, 0)
    te1 = bc.effective_index_2d(g, 1550.0, 1)
    assert te0 is not None and te1 is not None
    assert te0.n_eff > te1.n_eff > g.n_bottom

    narrow = bc.WaveguideGeometry()
    narrow.core_width_nm = 400.0
    assert bc.effective_index_2d(narrow, 1550.0, 1) is None


def test_bragg_wavelength_and_rejection():
    disp = bc.DispersionModel.constant([2.75, 2.55])
    spec = bc.GratingSpec()
    sol = bc.bragg_wavelength(spec, disp)
    assert sol.lambda0_nm == pytest.approx(290.0 * (2.75 + 2.55), abs=1e-6)
    assert bc.peak_rejection_db(2e-5, 100000.0) == pytest.approx(
        20.0 * math.log10(math.cosh(2.0)), rel=1e-12
    )


def test_spectrum_and_csv_roundtrip(tmp_path):
    disp = bc.DispersionModel.constant([2.75, 2.55])
    spec = bc.GratingSpec()
    spec.kappa_per_nm = 7e-5
    spec.length_nm = 60000.0
    cascade = bc.CascadeSpec()
    cascade.sections = [spec]
    grid = bc.default_metric_grid(spec, disp)
    s = bc.cascade_spectrum(cascade, grid.wavelengths_nm, disp)
    rej = bc.extract_rejection_db(s, grid.offband)
    # The default grid samples the notch at a finite step, so the extracted
    # depth sits slightly above the analytic peak.
    assert rej.rejection_db == pytest.approx(
        bc.peak_rejection_db(spec.kappa_per_nm, spec.length_nm), abs=0.05
    )

    path = str(tmp_path / "spectrum.csv")
    bc.write_spectrum_csv(path, s)
    back = bc.read_spectrum_csv(path)
    assert list(back.wavelengths_nm) == pytest.approx(list(s.wavelengths_nm))
    assert list(back.values_db) == pytest.approx(list(s.values_db), abs=1e-6)


def test_monte_carlo_deterministic():
    disp = bc.DispersionModel.constant([2.75, 2.55])
    spec = bc.GratingSpec()
    spec.kappa_per_nm = 7e-5
    spec.length_nm = 50000.0
    cascade = bc.CascadeSpec()
    cascade.sections = [spec]
    grid = bc.default_metric_grid(spec, disp)
    model = bc.NoiseModel()
    model.sigma_width_nm = 1.5
    model.seed = 42
    opt = bc.McOptions()
    opt.dneff_dwidth_per_nm = 4.7e-4
    opt.offband = grid.offband
    a = bc.monte_carlo(cascade, model, 8, grid.wavelengths_nm, disp, opt)
    b = bc.monte_carlo(cascade, model, 8, grid.wavelengths_nm, disp, opt)
    assert [r.rejection_db for r in a.records] == [r.rejection_db for r in b.records]
    assert a.median_rejection_db > 0.0
