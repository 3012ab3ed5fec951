"""Shared fixtures.  The expensive sweeps and Hill runs are computed once
per session and reused by both the targeted tests and the acceptance suite.
"""

import math

import numpy as np
import pytest

from floquetstab import analysis, hill, models


@pytest.fixture(scope="session")
def bundles():
    cache = {}

    def get(model_id, **params):
        key = (model_id, tuple(sorted(params.items())))
        if key not in cache:
            cache[key] = models.build_model(model_id, params)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def mkdv_stable(bundles):
    return bundles("gkdv", k=3, c=1.0, a=0.25, E=0.0)


@pytest.fixture(scope="session")
def mkdv_unstable(bundles):
    return bundles("gkdv", k=3, c=1.0, a=0.2, E=0.4)


@pytest.fixture(scope="session")
def gkdv4(bundles):
    return bundles("gkdv", k=4, c=1.0, a=2.0, E=0.0)


@pytest.fixture(scope="session")
def mbbm_bundle(bundles):
    return bundles("mbbm", m=0.5 + math.sqrt(5.0) / 10.0)


@pytest.fixture(scope="session")
def sweeps(bundles, mkdv_stable, mkdv_unstable, gkdv4, mbbm_bundle):
    """Lazily computed, cached axis sweeps keyed by a short name."""
    cache = {}

    def get(name):
        if name in cache:
            return cache[name]
        if name == "mathieu_kdv_low":
            b = bundles("mathieu-kdv")
            rep = analysis.sweep_axis(b.problem, 0.001, 0.6, n_grid=61)
        elif name == "mathieu_kdv_high":
            b = bundles("mathieu-kdv")
            rep = analysis.sweep_axis(b.problem, 5.95, 6.12, n_grid=120,
                                      suff_check=False)
        elif name == "mkdv_stable":
            rep = analysis.sweep_axis(mkdv_stable.problem, 0.001, 0.6, n_grid=41)
        elif name == "mkdv_unstable":
            rep = analysis.sweep_axis(mkdv_unstable.problem, 0.001, 0.8, n_grid=41)
        elif name == "gkdv4_high":
            rep = analysis.sweep_axis(gkdv4.problem, 6.8, 8.4, n_grid=41,
                                      suff_check=False)
        elif name == "bbm":
            b = bundles("bbm")
            rep = analysis.sweep_axis(b.rescaled, -0.7, 0.7, n_grid=57)
        elif name == "mbbm":
            rep = analysis.sweep_axis(mbbm_bundle.rescaled, 0.005, 0.9, n_grid=50)
        elif name == "mathieu_bbm":
            b = bundles("mathieu-bbm")
            rep = analysis.sweep_axis(b.rescaled, 0.005, 2.6, n_grid=120,
                                      suff_check=False)
        elif name == "nls_trivial":
            b = bundles("nls-trivial")
            rep = analysis.sweep_axis(b.problem, 0.01, 6.2, n_grid=300,
                                      suff_check=False)
        elif name == "nls_quintic":
            b = bundles("nls-quintic-phase")
            rep = analysis.sweep_axis(b.problem, 0.05, 4.6, n_grid=80,
                                      suff_check=False)
        elif name == "bous_cubic":
            b = bundles("boussinesq-cubic")
            rep = analysis.sweep_axis(b.problem, 0.01, 1.6, n_grid=60,
                                      suff_check=False)
        elif name == "kawahara0":
            b = bundles("kawahara")
            rep = analysis.sweep_axis(b.problem, 0.001, 0.03, n_grid=31,
                                      tol=1e-12, suff_check=False)
        elif name == "kawahara2":
            b = bundles("kawahara", alpha=-2.0, sigma=0.25)
            rep = analysis.sweep_axis(b.problem, 0.002, 0.2, n_grid=60,
                                      tol=1e-12, suff_check=False)
        else:
            raise KeyError(name)
        cache[name] = rep
        return rep

    return get


@pytest.fixture(scope="session")
def hill_runs(bundles, mkdv_stable, mkdv_unstable, gkdv4, mbbm_bundle):
    cache = {}
    spec = {
        "mathieu_kdv": (lambda: bundles("mathieu-kdv"), hill.HillConfig(31, 2000)),
        "mkdv_stable": (lambda: mkdv_stable, hill.HillConfig(31, 2000)),
        "mkdv_unstable": (lambda: mkdv_unstable, hill.HillConfig(31, 1200)),
        "gkdv4": (lambda: gkdv4, hill.HillConfig(31, 1500)),
        "bbm": (lambda: bundles("bbm"), hill.HillConfig(31, 2000)),
        "mbbm": (lambda: mbbm_bundle, hill.HillConfig(31, 1200)),
        "mathieu_bbm": (lambda: bundles("mathieu-bbm"), hill.HillConfig(31, 1500)),
        "nls_trivial": (lambda: bundles("nls-trivial"), hill.HillConfig(31, 2000)),
        "nls_quintic": (lambda: bundles("nls-quintic-phase"), hill.HillConfig(31, 1200)),
        "bous_cubic": (lambda: bundles("boussinesq-cubic"), hill.HillConfig(25, 1000)),
        "kawahara0": (lambda: bundles("kawahara"), hill.HillConfig(31, 2000)),
        "kawahara2": (lambda: bundles("kawahara", alpha=-2.0, sigma=0.25),
                      hill.HillConfig(31, 1500)),
    }

    def get(name):
        if name not in cache:
            maker, cfg = spec[name]
            cache[name] = hill.hill_spectrum(maker(), cfg)[0]
        return cache[name]

    return get


def zero_ims(report):
    return np.array([z.im for z in report.phi_zeros])


def interval_edges(report, mult):
    out = []
    for iv in report.intervals:
        if iv.multiplicity == mult:
            out.append((iv.lo_im, iv.hi_im))
    return out
