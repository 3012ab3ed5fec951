"""Multiplicity classification of imaginary-axis spectrum and bifurcation
indices for spectrum leaving the axis.

The classifiers turn Floquet-discriminant data into algebraic
multiplicities of the L^2(R) essential spectrum:

* n = 3: the cubic discriminant Delta_3 (deltoid region),
* n = 4: the quartic triple (Delta_4, P_4, D_4) and its trivial-phase
  specialization,
* n = 5: Cayley transform plus Sturm real-root counting, with the quintic
  seminvariants (Delta_5, P_5, D_5) reported alongside,
* BBM-type: the exponentially weighted discriminant of the full system,
  equivalently Delta_3 of the rescaled trace-free system.

Bifurcation indices Phi_n are resultants of the characteristic polynomial
with its lambda-derivative; closed forms are used where they exist (n = 3,
BBM, trivial-phase n = 4) and the Sylvester resultant covers the rest.
``sweep_axis`` drives the pipeline along a segment of the imaginary axis
and refines interval endpoints and index zeros by bisection.

On the axis the self-inversive symmetry supplies the reflected data:
f(-lambda) = conj(f(lambda)), f'(-lambda) = conj(f'(lambda)), and for the
coefficient arrays e_{n-k} = conj(e_k), e'_{n-k} = -conj(e'_k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import polyalg
from .monodromy import FloquetSample, SpectralProblem, floquet_sample

__all__ = [
    "Classification",
    "PhiZero",
    "MultiplicityInterval",
    "BifurcationReport",
    "classify3",
    "classify4",
    "classify4_trivialphase",
    "classify5",
    "classify_bbm",
    "classify_sample",
    "deltoid_contains",
    "phi3",
    "phi_bbm",
    "phi_bbm_rescaled",
    "phi_n",
    "phi_of_sample",
    "tracker_of_sample",
    "omega_pm",
    "omega_pm_derivative",
    "sweep_axis",
    "wkb_asymptotics",
]


# ---------------------------------------------------------------------------
# classification


@dataclass
class Classification:
    multiplicity: int
    boundary: bool
    quantities: dict = field(default_factory=dict)


def _boundary_tol(scale: float, weight: int, tol: float = 1e-8) -> float:
    return tol * (1.0 + scale) ** weight


def classify3(f: complex, tol: float = 1e-8) -> Classification:
    """Multiplicity from the trace f = tr M(lambda), lambda on the axis.

    Delta_3 = |f|^4 - 8 Re(f^3) + 18 |f|^2 - 27; negative inside the
    deltoid (multiplicity three), positive outside (multiplicity one).
    """
    f1, f2 = f.real, f.imag
    r2 = f1 * f1 + f2 * f2
    d3 = r2 * r2 - 8.0 * (f1**3 - 3.0 * f1 * f2 * f2) + 18.0 * r2 - 27.0
    eps = _boundary_tol(abs(f), 4, tol)
    if d3 < -eps:
        return Classification(3, False, {"Delta3": d3})
    if d3 > eps:
        return Classification(1, False, {"Delta3": d3})
    return Classification(3, True, {"Delta3": d3})


def deltoid_contains(f: complex, ntheta: int = 720) -> bool:
    """Even-odd point-in-region test against the curve 2 e^{it} + e^{-2it}."""
    t = np.linspace(-np.pi, np.pi, ntheta, endpoint=False)
    z = 2.0 * np.exp(1j * t) + np.exp(-2j * t)
    xs, ys = z.real, z.imag
    x0, y0 = f.real, f.imag
    inside = False
    j = ntheta - 1
    for i in range(ntheta):
        if (ys[i] > y0) != (ys[j] > y0):
            xint = xs[j] + (y0 - ys[j]) * (xs[i] - xs[j]) / (ys[i] - ys[j])
            if x0 < xint:
                inside = not inside
        j = i
    return inside


def _quartic_quantities(f1: float, f2: float, f3: float):
    d4 = (-4.0 * (f1**6 + f2**6) - 12.0 * f1**2 * f2**2 * (f1**2 + f2**2)
          + (f1**2 + f2**2) ** 2 * f3**2
          + 36.0 * (f1**4 - f2**4) * f3 - 8.0 * (f1**2 - f2**2) * f3**3
          - 60.0 * (f1**4 + f2**4) + 312.0 * f1**2 * f2**2 + 16.0 * f3**4
          - 80.0 * (f1**2 + f2**2) * f3**2
          + 288.0 * (f1**2 - f2**2) * f3 - 192.0 * (f1**2 + f2**2)
          - 128.0 * f3**2 + 256.0)
    p4 = 8.0 * (2.0 * f1 + f3 + 2.0) * (2.0 * f3 - 12.0) - 48.0 * f2 * f2
    d4b = -256.0 * (4.0 * f1**4 + 3.0 * f2**4 + f1**2 * (4.0 * f2**2 + (f3 - 6.0) ** 2)
                    + f2**2 * (28.0 + 12.0 * f3 - f3**2) + 4.0 * f1**3 * (2.0 + f3)
                    - 4.0 * (f3 - 2.0) * (f3 + 2.0) ** 2
                    + 16.0 * f1 * (4.0 + 2.0 * f2**2 - f3**2))
    return d4, p4, d4b


def _quartic_table(d4, p4, d4b, eps_d, eps_p, eps_db):
    boundary = abs(d4) <= eps_d
    if d4 > 0:
        if p4 < 0 and d4b < 0:
            mult = 4
            boundary = boundary or abs(p4) <= eps_p or abs(d4b) <= eps_db
        else:
            mult = 0
            # only a vanishing quantity that blocks the multiplicity-4 cell
            # leaves the classification ambiguous
            boundary = boundary or (abs(p4) <= eps_p and d4b < 0) \
                or (abs(d4b) <= eps_db and p4 < 0)
    else:
        mult = 2
    return mult, boundary


def classify4(f1: float, f2: float, f3: float, tol: float = 1e-8) -> Classification:
    """Sign table of (Delta_4, P_4, D_4): multiplicity 4 / 2 / 0."""
    d4, p4, d4b = _quartic_quantities(f1, f2, f3)
    s = abs(f1) + abs(f2) + abs(f3)
    mult, boundary = _quartic_table(
        d4, p4, d4b,
        _boundary_tol(s, 6, tol), _boundary_tol(s, 2, tol), _boundary_tol(s, 4, tol))
    return Classification(mult, boundary, {"Delta4": d4, "P4": p4, "D4": d4b})


def classify4_trivialphase(f: float, g: float, tol: float = 1e-8) -> Classification:
    """Trivial-phase quartic table in (f, g); agrees with classify4(f, 0, g)."""
    d4 = -4096.0 * (8.0 + f * f - 4.0 * g) ** 2 * (2.0 + 2.0 * f + g) * (-2.0 + 2.0 * f - g)
    p4 = 16.0 * (g - 6.0) * (2.0 - 2.0 * f + g)
    d4b = -256.0 * (8.0 + f * f - 4.0 * g) * (2.0 - 2.0 * f + g) ** 2
    s = abs(f) + abs(g)
    mult, boundary = _quartic_table(
        d4, p4, d4b,
        _boundary_tol(s, 8, tol), _boundary_tol(s, 2, tol), _boundary_tol(s, 6, tol))
    return Classification(mult, boundary, {"Delta4": d4, "P4": p4, "D4": d4b})


def _quintic_seminvariants(coeffs):
    # binomial-weighted reading a0 x^5 + 5a1 x^4 + 10a2 x^3 + 10a3 x^2 + 5a4 x + a5
    a0 = coeffs[5]
    a1 = coeffs[4] / 5.0
    a2 = coeffs[3] / 10.0
    a3 = coeffs[2] / 10.0
    a4 = coeffs[1] / 5.0
    a5 = coeffs[0]
    A2 = a0 * a2 - a1 * a1
    A3 = a0**2 * a3 - 3.0 * a0 * a1 * a2 + 2.0 * a1**3
    A4 = a0**3 * a4 - 4.0 * a0**2 * a1 * a3 + 6.0 * a0 * a1**2 * a2 - 3.0 * a1**4
    A5 = (a0**4 * a5 - 5.0 * a0**3 * a1 * a4 + 10.0 * a0**2 * a1**2 * a3
          - 10.0 * a0 * a1**3 * a2 + 4.0 * a1**5)
    return A2, A3, A4, A5


def classify5(e, tol: float = 1e-8) -> Classification:
    """On-circle multiplicity of a self-inversive quintic from e_0..e_5.

    The multiplicity {5, 3, 1} is decided by the Cayley transform plus
    Sturm real-root counting (a degree drop at mu = -1 adds to the count).
    The depressed-quintic seminvariants Delta_5, P_5, D_5 are evaluated and
    reported, but the bare sign table "Delta_5 > 0, P_5 < 0, D_5 < 0 ->
    five" misclassifies a set of self-inversive inputs, so it does not
    drive the decision.
    """
    p = polyalg.SelfInversivePoly.from_elementary_symmetric(e)
    ps = polyalg.cayley_transform(p)
    quantities = {}
    boundary = ps.dropped_degree > 0
    if ps.degree == 5:
        c = ps.coeffs / np.max(np.abs(ps.coeffs))
        A2, A3, A4, A5 = _quintic_seminvariants(c)
        depressed = polyalg.Poly(np.array(
            [A5, 5.0 * A4, 10.0 * A3, 10.0 * A2, 0.0, 1.0], dtype=complex))
        d5 = polyalg.discriminant(depressed).real
        p5 = 4.0 * A2**3 + A3**2
        dd5 = (A5**2 + 16.0 * A2 * A4**2 - 76.0 * A2 * A3 * A5
               - (272.0 * A2**3 - 108.0 * A3**2) * A4
               + 24.0 * A2**2 * (40.0 * A2**3 + 27.0 * A3**2))
        quantities.update({"Delta5": d5, "P5": p5, "D5": dd5})
        boundary = boundary or abs(d5) <= tol
    count, degenerate = polyalg.unit_circle_root_count(p, disc_tol=tol)
    boundary = boundary or degenerate
    return Classification(count, boundary, quantities)


def classify_bbm(f_plus: complex, f_minus: complex, lam: complex, T: float, c: float,
                 tol: float = 1e-8) -> Classification:
    """gBBM multiplicity from the full (unrescaled) discriminant data.

    Delta_3 = e^{-2 lam T/c} disc_mu p(mu, lam) of the full characteristic
    polynomial -mu^3 + f mu^2 - f(-lam) e^{lam T/c} mu + e^{lam T/c};
    equivalently Delta_3 of classify3 applied to the rotated trace
    f0 = e^{-lam T/3c} f (the rescaling v0 = e^{-lam x/3c} v multiplies the
    monodromy by e^{-lam T/3c}; only this sign keeps det M0 = 1).  Both
    paths are computed and must agree.
    """
    E = np.exp(lam * T / c)
    d3 = (f_plus**2 * f_minus**2 - 4.0 * f_plus**3 / E - 4.0 * f_minus**3 * E
          + 18.0 * f_plus * f_minus - 27.0)
    f0 = np.exp(-lam * T / (3.0 * c)) * f_plus
    via_rescaled = classify3(complex(f0), tol)
    d3r = via_rescaled.quantities["Delta3"]
    if abs(d3.real - d3r) > 1e-6 * max(1.0, abs(d3r)):
        raise ValueError(f"full/rescaled discriminant mismatch: {d3.real} vs {d3r}")
    return Classification(via_rescaled.multiplicity, via_rescaled.boundary,
                          {"Delta3": d3.real, "Delta3_rescaled": d3r,
                           "imag_residual": abs(d3.imag) / max(1.0, abs(d3))})


def classify_sample(sample: FloquetSample, problem: SpectralProblem,
                    tol: float = 1e-8) -> Classification:
    """Dispatch a FloquetSample to the order-appropriate classifier.

    BBM-type samples must come from the rescaled trace-free system, whose
    trace feeds the plain cubic classifier.
    """
    n = problem.n
    e = sample.e
    if n == 2:
        t = e[1].real
        d = 4.0 * (4.0 - t * t)
        eps = _boundary_tol(abs(t), 2, tol)
        if d > eps:
            cls = Classification(2, False, {"DiscHill": d})
        elif d < -eps:
            cls = Classification(0, False, {"DiscHill": d})
        else:
            cls = Classification(2, True, {"DiscHill": d})
    elif n == 3:
        cls = classify3(complex(e[1]), tol)
    elif n == 4:
        cls = classify4(e[1].real, e[1].imag, e[2].real, tol)
    elif n == 5:
        esym = np.array([1.0, e[1], e[2], np.conj(e[2]), np.conj(e[1]), 1.0])
        cls = classify5(esym, tol)
    else:
        raise ValueError(f"no classifier for order n = {n}")
    sample.multiplicity = cls.multiplicity
    sample.classifiers = cls.quantities
    return cls


# ---------------------------------------------------------------------------
# bifurcation indices


def _require_real(value: complex, scale: float, label: str, tol: float = 1e-7):
    resid = abs(value.imag)
    if resid > tol * (abs(value) + scale) + 1e-10:
        raise ValueError(f"{label} should be real on the axis; Im = {resid:.3e}")
    return value.real, resid


def phi3(f_plus: complex, f_minus: complex, fp_plus: complex, fp_minus: complex) -> float:
    """Phi_3 = f'(l)^3 + f'(-l)^3 + f f'(-l)^2 f'(l) + f(-l) f'(l)^2 f'(-l)."""
    val = (fp_plus**3 + fp_minus**3
           + f_plus * fp_minus**2 * fp_plus + f_minus * fp_plus**2 * fp_minus)
    scale = (abs(fp_plus) + abs(fp_minus) + abs(f_plus)) ** 3 + 1.0
    real, _ = _require_real(val, scale, "Phi3")
    return real


def phi_bbm(f_plus, f_minus, fp_plus, fp_minus, lam, T, c) -> float:
    """Phi_3 of the full gBBM system, e^{-3 lam T/c} res_mu(p, p_lambda).

    Closed form verified symbolically against the Sylvester resultant (the
    printed display misplaces two exponential prefactors and one sign):

    e^{-lT/c} f'(l)(f'(l) - t f(l))^2 + e^{+lT/c} f'(-l)(f'(-l) - t f(-l))^2
    + f f'(-l)^2 f'(l) + f(-l) f'(l)^2 f'(-l)
    + t^2 (f f'(-l) + f'(l) f(-l)) - t (f f'(l) f(-l) f'(-l) + 3 f'(l) f'(-l))
    + t^3 (1 - f f(-l)),  with t = T/c.
    """
    t = T / c
    E = np.exp(lam * T / c)
    val = (fp_plus * (fp_plus - t * f_plus) ** 2 / E
           + fp_minus * (fp_minus - t * f_minus) ** 2 * E
           + f_plus * fp_minus**2 * fp_plus + f_minus * fp_plus**2 * fp_minus
           + t * t * (f_plus * fp_minus + fp_plus * f_minus)
           - t * (f_plus * fp_plus * f_minus * fp_minus + 3.0 * fp_plus * fp_minus)
           + t**3 * (1.0 - f_plus * f_minus))
    scale = (abs(fp_plus) + abs(fp_minus) + abs(f_plus) + t) ** 3 + 1.0
    real, _ = _require_real(val, scale, "Phi3 (BBM)")
    return real


def phi_bbm_rescaled(f_plus, f_minus, fp_plus, fp_minus, lam, T, c) -> float:
    """res_mu(p0, p0_lambda) of the rescaled system: the generic Phi_3
    applied to f0(l) = e^{-l T/3c} f(l).

    Note this is not an equivalent bifurcation index for the full system:
    differentiating p = e^{lam T/c} p0(e^{-lam T/3c} mu, lam) in lambda
    brings in chain-rule terms, so res(p, p_lambda) and res(p0, p0_lambda)
    have different zero sets.  Use ``phi_bbm`` to locate bifurcations.
    """
    w = np.exp(-lam * T / (3.0 * c))
    t3 = T / (3.0 * c)
    return phi3(w * f_plus, f_minus / w,
                w * (fp_plus - t3 * f_plus), (fp_minus - t3 * f_minus) / w)


def phi_n(e, eprime) -> float:
    """Phi_n = res_mu(p, p_lambda) from e_k and their lambda-derivatives.

    p has ascending coefficients (-1)^k e_{n-k}; p_lambda the derivative
    coefficients at nominal degree n-1.  The fixed-shape Sylvester
    determinant keeps Phi_n continuous in lambda even where the leading
    derivative coefficient vanishes.
    """
    e = np.asarray(e, complex)
    ep = np.asarray(eprime, complex)
    n = len(e) - 1
    c = np.array([(-1) ** k * e[n - k] for k in range(n + 1)])
    cp = np.array([(-1) ** k * ep[n - k] for k in range(n)])
    if np.max(np.abs(cp)) == 0.0:
        return 0.0
    m = n - 1
    S = np.zeros((n + m, n + m), dtype=complex)
    pc = c[::-1]
    qc = cp[::-1]
    for i in range(m):
        S[i, i:i + n + 1] = pc
    for i in range(n):
        S[m + i, i:i + m + 1] = qc
    val = complex(np.linalg.det(S))
    scale = float(np.max(np.abs(c)) + np.max(np.abs(cp))) ** (n + m) + 1.0
    real, _ = _require_real(val, scale, "Phi_n")
    return real


def _symmetrized(e, ep, n):
    """Self-inversive completion of (e, e') on the axis for trace-free data."""
    es = np.array(e, complex)
    eps_ = np.array(ep, complex)
    for k in range(n // 2 + 1, n + 1):
        es[k] = np.conj(es[n - k])
        eps_[k] = -np.conj(eps_[n - k])
    es[0] = 1.0
    eps_[0] = 0.0
    if n % 2 == 0:
        es[n // 2] = es[n // 2].real + 0j
        eps_[n // 2] = 1j * eps_[n // 2].imag
    return es, eps_


def phi_of_sample(sample: FloquetSample, problem: SpectralProblem) -> float:
    """Bifurcation index Phi_n at a sampled axis point (derivative data
    required).

    BBM-type samples (taken on the rescaled trace-free system) are mapped
    back to full-system data and get the full resultant
    e^{-3 lam T/c} res(p, p_lambda).  The rescaled resultant is NOT an
    equivalent index: p_lambda = e^{lam T}(T p0 + p0_lambda - (T/3) nu
    p0_nu) picks up chain-rule terms, so the two zero sets differ (only the
    full one marks where the actual spectrum can leave the axis).
    """
    if sample.eprime is None:
        raise ValueError("sample lacks derivative data")
    n = problem.n
    if problem.bbm_weight:
        return phi_bbm(*_bbm_full_data(sample, problem))
    e, ep = _symmetrized(sample.e, sample.eprime, n)
    if n == 3:
        return phi3(complex(e[1]), complex(e[2]), complex(ep[1]), complex(-ep[2]))
    return phi_n(e, ep)


def _bbm_full_data(sample, problem):
    """(f, f(-l), f'(l), f'(-l), lam, T, c) of the full gBBM system from a
    rescaled-system sample, via f = e^{+lam T/3c} f0."""
    T = problem.T
    c = problem.meta["c"]
    lam = sample.lam
    f0 = complex(sample.e[1])
    f0p = complex(sample.eprime[1])
    w = np.exp(lam * T / (3.0 * c))
    t3 = T / (3.0 * c)
    f = w * f0
    fm = np.conj(f0) / w
    fp = w * (f0p + t3 * f0)
    fpm = np.conj(f0p + t3 * f0) / w
    return f, fm, fp, fpm, lam, T, c


def tracker_of_sample(sample: FloquetSample, problem: SpectralProblem) -> float:
    """Sign-tracking quantity for zero detection along the axis.

    Equal to Phi_n except for perfect-square indices, where the inner
    quantity is tracked instead: the trivial-phase quartic inner
    g'^2 + (g-2) f'^2 - f f' g', and Im(tr M_lambda) for n = 2.
    """
    if sample.eprime is None:
        raise ValueError("sample lacks derivative data")
    n = problem.n
    if n == 2:
        return float(sample.eprime[1].imag)
    if n == 4 and problem.meta.get("trivial_phase"):
        e, ep = _symmetrized(sample.e, sample.eprime, n)
        f = e[1].real
        g = e[2].real
        fp = complex(ep[1])
        gp = complex(ep[2])
        inner = gp * gp + (g - 2.0) * fp * fp - f * fp * gp
        real, _ = _require_real(inner, (abs(fp) + abs(gp) + abs(f) + abs(g)) ** 2 + 1.0,
                                "trivial-phase inner index")
        return real
    return phi_of_sample(sample, problem)


def omega_pm(f: float, g: float):
    """Roots of omega^2 - f omega + (g - 2); the unit circle maps to [-2, 2]."""
    s = np.sqrt(complex(f * f - 4.0 * g + 8.0))
    return (f + s) / 2.0, (f - s) / 2.0


def omega_pm_derivative(f, g, fp, gp):
    """d(omega_pm)/dy along lambda = iy, by the chain rule."""
    s = np.sqrt(complex(f * f - 4.0 * g + 8.0))
    if abs(s) < 1e-12:
        return complex("nan"), complex("nan")
    ds = (f * fp - 2.0 * gp) / s
    return (fp + ds) / 2.0, (fp - ds) / 2.0


# ---------------------------------------------------------------------------
# axis sweep


@dataclass
class PhiZero:
    im: float
    kind: str                  # "sign-change" | "even-touch"
    sufficient: object = None  # True | False | None (n = 3 transversality check)
    phi_value: float = 0.0


@dataclass
class MultiplicityInterval:
    lo_im: float
    hi_im: float
    multiplicity: int


@dataclass
class BifurcationReport:
    intervals: list
    phi_zeros: list
    samples: list
    grid: np.ndarray
    phi_values: np.ndarray
    tracker_values: np.ndarray
    label: str = ""

    def to_dict(self):
        return {
            "intervals": [{"lo_im": iv.lo_im, "hi_im": iv.hi_im,
                           "multiplicity": iv.multiplicity} for iv in self.intervals],
            "phi_zeros": [{"im": z.im, "kind": z.kind, "sufficient": z.sufficient}
                          for z in self.phi_zeros],
        }


def _puncture(ys, problem, eps=1e-6):
    bad = set(z.imag for z in problem.excluded if abs(z.real) < 1e-12)
    bad |= set(problem.meta.get("puncture", ()))
    out = np.array(ys, dtype=float)
    for b in bad:
        hit = np.abs(out - b) < eps
        out[hit] = b + np.where(out[hit] >= b, eps, -eps)
    return out


def sweep_axis(problem: SpectralProblem, y_lo: float, y_hi: float, n_grid: int = 200,
               tol: float = 1e-11, class_tol: float = 1e-8, refine_tol: float = 1e-7,
               suff_check: bool = True, progress=None) -> BifurcationReport:
    """Classify and scan the segment i[y_lo, y_hi] of the imaginary axis.

    Produces per-grid Floquet samples, multiplicity intervals with
    endpoints refined by bisection on the classifier, and bifurcation-index
    zeros (sign changes refined by Brent's method; non-sign-changing local
    minima of |tracker| below tolerance labeled even-touch).  For n = 3 the
    transversality condition Delta_3 != 0 and
    2 Re(conj(f') f'') != 0 decorates each zero with a sufficiency verdict.
    """
    ys = _puncture(np.linspace(y_lo, y_hi, n_grid), problem)

    def sample_at(y):
        return floquet_sample(problem, 1j * float(y), tol, with_derivative=True)

    samples = []
    for i, y in enumerate(ys):
        s = sample_at(y)
        classify_sample(s, problem, class_tol)
        s.phi = phi_of_sample(s, problem)
        samples.append(s)
        if progress:
            progress(i + 1, len(ys))
    mults = np.array([s.multiplicity for s in samples])
    trackers = np.array([tracker_of_sample(s, problem) for s in samples])
    phis = np.array([s.phi for s in samples])

    def mult_at(y):
        s = sample_at(y)
        return classify_sample(s, problem, class_tol).multiplicity

    # multiplicity intervals with bisection-refined endpoints
    intervals = []
    start = ys[0]
    for i in range(1, len(ys)):
        if mults[i] != mults[i - 1]:
            a, b = ys[i - 1], ys[i]
            ma = mults[i - 1]
            while b - a > refine_tol:
                mid = 0.5 * (a + b)
                if mult_at(mid) == ma:
                    a = mid
                else:
                    b = mid
            edge = 0.5 * (a + b)
            intervals.append(MultiplicityInterval(start, edge, int(mults[i - 1])))
            start = edge
    intervals.append(MultiplicityInterval(start, ys[-1], int(mults[-1])))

    # bifurcation-index zeros
    def tracker_at(y):
        return tracker_of_sample(sample_at(y), problem)

    zeros = []
    for i in range(1, len(ys)):
        if trackers[i - 1] == 0.0:
            zeros.append(PhiZero(float(ys[i - 1]), "sign-change", phi_value=0.0))
            continue
        if trackers[i - 1] * trackers[i] < 0.0:
            root = brentq(tracker_at, ys[i - 1], ys[i], xtol=max(refine_tol, 1e-10))
            zeros.append(PhiZero(float(root), "sign-change"))
    # even-order touches: interior local minima of |tracker| that do not
    # change sign but dip below tolerance relative to the local scale
    absr = np.abs(trackers)
    for i in range(1, len(ys) - 1):
        if absr[i] <= absr[i - 1] and absr[i] <= absr[i + 1]:
            if trackers[i - 1] * trackers[i + 1] > 0.0 and absr[i] > 0.0:
                local = max(absr[max(0, i - 5):i + 6].max(), 1e-300)
                if absr[i] < 1e-6 * local:
                    res = minimize_scalar(lambda y: abs(tracker_at(y)),
                                          bounds=(ys[i - 1], ys[i + 1]), method="bounded",
                                          options={"xatol": max(refine_tol, 1e-10)})
                    zeros.append(PhiZero(float(res.x), "even-touch",
                                         phi_value=float(res.fun)))
    zeros.sort(key=lambda z: z.im)
    zeros = _dedupe_zeros(zeros, tol=max(10 * refine_tol, 1e-4))

    # the trace-free sufficiency theorem does not cover the weighted
    # BBM-type index, so those zeros keep sufficient = None
    if suff_check and problem.n == 3 and not problem.bbm_weight:
        for z in zeros:
            z.sufficient = _suff3(problem, z.im, tol, class_tol)

    return BifurcationReport(intervals=intervals, phi_zeros=zeros, samples=samples,
                             grid=ys, phi_values=phis, tracker_values=trackers,
                             label=problem.label)


def _dedupe_zeros(zeros, tol):
    out = []
    for z in zeros:
        if out and abs(z.im - out[-1].im) < tol:
            if out[-1].kind == "even-touch" and z.kind == "sign-change":
                out[-1] = z
            continue
        out.append(z)
    return out


def _suff3(problem, y0, tol, class_tol):
    """Transversality check of the n = 3 sufficiency condition at a zero.

    Needs Delta_3 away from zero and f'(-l) f''(l) != -f'(l) f''(-l); with
    the axis symmetry the latter reads 2 Re(conj(f'(l)) f''(l)) != 0.  f''
    comes from Richardson-extrapolated differences of the variational f'.
    """
    try:
        s0 = floquet_sample(problem, 1j * y0, tol, with_derivative=True)
    except Exception:
        return None
    cls = classify_sample(s0, problem, class_tol)
    if cls.boundary:
        return False

    def fprime(y):
        return complex(floquet_sample(problem, 1j * y, tol, with_derivative=True).eprime[1])

    h = 1e-4 * max(1.0, abs(y0))
    # d/dlambda f' with lambda = iy: f'' = d/dy f'(iy) / i
    d1 = (fprime(y0 + h) - fprime(y0 - h)) / (2.0 * h * 1j)
    d2 = (fprime(y0 + h / 2) - fprime(y0 - h / 2)) / (h * 1j)
    fpp = (4.0 * d2 - d1) / 3.0
    fp = complex(s0.eprime[1])
    lhs = 2.0 * (np.conj(fp) * fpp).real
    scale = (abs(fp) + abs(fpp)) ** 2 + 1e-12
    return bool(abs(lhs) > 1e-6 * scale)


# ---------------------------------------------------------------------------
# WKB asymptotics


def _log_magnitude(z):
    return math.log(abs(z)) if z != 0 else -math.inf


def wkb_asymptotics(family: str, nu: float, T: float):
    """Leading-order large-|lambda| discriminant and index along the axis.

    Families parametrize lambda = i nu^n: 'kdv3' (n = 3), 'nls4' and
    'boussinesq4' (n = 2, identical leading order), 'kawahara5' (n = 5).
    Returns a dict with the asymptotic values and their stable logarithms
    (the raw values overflow doubles once nu T is moderately large).
    """
    if family == "kdv3":
        a = math.sqrt(3.0) / 2.0 * nu * T
        b = 1.5 * nu * T
        # Delta = 16 sinh(a)^2 (cos b - cosh a)^2 > 0 for nu != 0
        log_sinh = _log_sinh(a)
        log_fac = _log_cos_minus_cosh(b, a)
        log_delta = math.log(16.0) + 2.0 * log_sinh + 2.0 * log_fac
        log_phi = math.log(T**3 / 27.0) - 6.0 * math.log(abs(nu)) + log_delta
        return {"log_abs_delta": log_delta, "delta_sign": 1.0,
                "log_abs_phi": log_phi, "phi_sign": -1.0}
    if family in ("nls4", "boussinesq4"):
        s, c = math.sin(nu * T), math.cos(nu * T)
        log_sinh = _log_sinh(nu * T)
        log_fac = _log_cos_minus_cosh(nu * T, nu * T)
        log_common = 2.0 * math.log(abs(s) + 1e-300) + 2.0 * log_sinh + 4.0 * log_fac
        log_delta = math.log(256.0) + log_common
        log_phi = math.log(16.0) + 4.0 * math.log(T) - 4.0 * math.log(abs(nu)) + log_common
        return {"log_abs_delta": log_delta, "delta_sign": -1.0 if s != 0 else 0.0,
                "log_abs_phi": log_phi, "phi_sign": 1.0 if s != 0 else 0.0}
    if family == "kawahara5":
        r5 = math.sqrt(5.0)
        pairs = [
            (0.5 * r5 * nu * T, 0.5 * math.sqrt(5.0 - 2.0 * r5) * nu * T),
            (0.25 * (5.0 + r5) * nu * T, 0.5 * math.sqrt(0.5 * (5.0 - r5)) * nu * T),
            (0.25 * (r5 - 5.0) * nu * T, 0.5 * math.sqrt(0.5 * (5.0 + r5)) * nu * T),
            (0.5 * r5 * nu * T, 0.5 * math.sqrt(5.0 + 2.0 * r5) * nu * T),
        ]
        log_delta = math.log(4096.0)
        for b, a in pairs:
            log_delta += 2.0 * _log_cos_minus_cosh(b, a)
        log_delta += 2.0 * _log_sinh(0.5 * math.sqrt(0.5 * (5.0 - r5)) * abs(nu) * T)
        log_delta += 2.0 * _log_sinh(0.5 * math.sqrt(0.5 * (5.0 + r5)) * abs(nu) * T)
        return {"log_abs_delta": log_delta, "delta_sign": 1.0}
    raise ValueError(f"unsupported WKB family '{family}'")


def _log_sinh(a):
    a = abs(a)
    if a < 20.0:
        return math.log(math.sinh(a)) if a > 0 else -math.inf
    return a - math.log(2.0) + math.log1p(-math.exp(-2.0 * a))


def _log_cosh(a):
    a = abs(a)
    if a < 20.0:
        return math.log(math.cosh(a))
    return a - math.log(2.0) + math.log1p(math.exp(-2.0 * a))


def _log_cos_minus_cosh(b, a):
    # log |cos b - cosh a|; cosh a >= 1 dominates for a != 0
    if abs(a) < 20.0:
        return math.log(abs(math.cos(b) - math.cosh(a)))
    corr = -math.cos(b) / math.cosh(a) if abs(a) < 700.0 else 0.0
    return _log_cosh(a) + math.log1p(corr)


def phi_n_asymptotic_generic(n: int, lam: complex, T: float) -> complex:
    """Generic product formula prod_{j<k} (e^{l^{1/n} w_j T} - e^{l^{1/n} w_k T})^2
    with the principal branch of lambda^{1/n} (real for n odd on the axis)."""
    root = lam ** (1.0 / n)
    w = np.exp(2j * np.pi * np.arange(n) / n)
    th = np.exp(root * w * T)
    val = 1.0 + 0.0j
    for j in range(n):
        for k in range(j + 1, n):
            val *= (th[j] - th[k]) ** 2
    return complex(val)
