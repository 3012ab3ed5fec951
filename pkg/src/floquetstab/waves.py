"""Periodic traveling-wave profiles and the special functions behind them.

Complete elliptic integrals and Jacobi elliptic functions are evaluated by
the arithmetic-geometric mean; wave profiles come either in closed elliptic
form (BBM, mBBM, Boussinesq, Kawahara) or from quadrature plus ODE
integration (generalized KdV wells, the quintic Schroedinger amplitude).

Profiles carry their period, defining parameters and (lazily) Fourier
coefficients; ``as_series_eval`` builds a fast trigonometric-series
evaluator used inside ODE right-hand sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import solve_ivp

__all__ = [
    "WaveProfile",
    "WaveError",
    "elliptic_K",
    "jacobi_cn_dn_sn",
    "gkdv_wave",
    "bbm_wave",
    "mbbm_wave",
    "boussinesq_wave",
    "kawahara_mstar",
    "kawahara_wave",
    "nls_quintic_phase_wave",
    "fourier_coefficients",
]


class WaveError(ValueError):
    pass


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter convention.

    K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta), via AGM:
    K = pi / (2 agm(1, sqrt(1-m))).
    """
    if not 0.0 <= m < 1.0:
        raise WaveError(f"elliptic parameter m={m} outside [0, 1)")
    a, b = 1.0, math.sqrt(1.0 - m)
    for _ in range(40):
        if abs(a - b) <= 2e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def jacobi_cn_dn_sn(x: float, m: float):
    """(cn, dn, sn) at x for parameter m in [0, 1), by the descending AGM.

    Arguments are reduced modulo the full period 4K before the AGM phase
    recursion; dn is recovered from dn^2 = 1 - m sn^2 (positive branch is
    exact for m < 1).
    """
    if not 0.0 <= m < 1.0:
        raise WaveError(f"elliptic parameter m={m} outside [0, 1)")
    if m == 0.0:
        return math.cos(x), 1.0, math.sin(x)
    K = elliptic_K(m)
    x = x - 4.0 * K * round(x / (4.0 * K))
    a = [1.0]
    b = [math.sqrt(1.0 - m)]
    c = [math.sqrt(m)]
    while abs(c[-1]) > 1e-17:
        an = 0.5 * (a[-1] + b[-1])
        bn = math.sqrt(a[-1] * b[-1])
        cn_ = 0.5 * (a[-1] - b[-1])
        a.append(an)
        b.append(bn)
        c.append(cn_)
        if len(a) > 60:
            break
    N = len(a) - 1
    phi = 2.0**N * a[N] * x
    for k in range(N, 0, -1):
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, c[k] / a[k] * math.sin(phi)))))
    sn = math.sin(phi)
    cn = math.cos(phi)
    dn = math.sqrt(max(0.0, 1.0 - m * sn * sn))
    return cn, dn, sn


@dataclass
class WaveProfile:
    """Periodic coefficient profile: callable, period, parameters, Fourier data.

    ``eval2`` holds the second component for two-component waves (quintic
    Schroedinger amplitude/phase-gradient pair).
    """

    period: float
    eval: object
    params: dict = field(default_factory=dict)
    fourier: np.ndarray | None = None  # c_k, k = -N..N when registered
    eval2: object | None = None
    label: str = ""

    def __call__(self, x):
        return self.eval(x)

    def sample(self, n: int):
        x = np.arange(n) * (self.period / n)
        return x, np.array([self.eval(xx) for xx in x])

    def as_series_eval(self, nmodes: int = 48):
        """Fast evaluator from a truncated Fourier series of the profile."""
        c = fourier_coefficients(self, nmodes)
        return _series_closure(c, nmodes, self.period)


def _series_closure(c, nmodes, period):
    ks = np.arange(-nmodes, nmodes + 1)
    om = 2.0 * np.pi / period
    cc = np.asarray(c, dtype=complex)

    def f(x):
        return float(np.real(np.dot(cc, np.exp((1j * om * x) * ks))))

    return f


def fourier_coefficients(profile, N: int):
    """c_k, |k| <= N, of a real periodic profile.

    Registered analytic coefficients are returned when present; otherwise
    the DFT on 4N+1 equispaced samples (spectrally exact for band-limited
    data, exponentially accurate for analytic profiles).  Conjugate
    symmetry c_{-k} = conj(c_k) is enforced.
    """
    if N < 1:
        raise WaveError("need N >= 1")
    if profile.fourier is not None:
        have = (len(profile.fourier) - 1) // 2
        if have >= N:
            mid = have
            return np.asarray(profile.fourier)[mid - N : mid + N + 1]
    n = 4 * N + 1
    _, vals = profile.sample(n)
    hat = np.fft.fft(vals) / n
    c = np.empty(2 * N + 1, dtype=complex)
    for k in range(-N, N + 1):
        c[k + N] = hat[k % n]
    c = 0.5 * (c + np.conj(c[::-1]))
    return c


# ---------------------------------------------------------------------------
# generalized KdV wells


def _quadrature_period(poly, lo, hi, nquad=256):
    # period = 2 int_lo^hi dphi / sqrt(G); Gauss-Chebyshev absorbs the
    # inverse-square-root endpoint singularities of simple roots
    mid, rad = 0.5 * (lo + hi), 0.5 * (hi - lo)
    t = np.cos((2 * np.arange(1, nquad + 1) - 1) * np.pi / (2 * nquad))
    ph = mid + rad * t
    S = poly(ph) / ((ph - lo) * (hi - ph))
    if np.any(S <= 0):
        raise WaveError("quadrature found nonpositive interior values")
    return 2.0 * (np.pi / nquad) * float(np.sum(1.0 / np.sqrt(S)))


def _polish_root(poly, dpoly, r, iters=3):
    for _ in range(iters):
        r = r - poly(r) / dpoly(r)
    return r


def gkdv_wave(k: int, c: float, a: float, E: float) -> WaveProfile:
    """Periodic traveling wave of the generalized KdV equation.

    The orbit solves phi_x^2 = G(phi) = 2E + 2a phi + c phi^2 - 2/(k+1) phi^(k+1).
    The well is the pair of largest adjacent simple real roots of G bounding
    a positive-G interval; the profile is integrated from the right turning
    point.  ``params['g_real_roots']`` reports the real-root count of G.
    """
    if k < 2:
        raise WaveError("need k >= 2")
    coeffs = np.zeros(k + 2)
    coeffs[0] = 2.0 * E
    coeffs[1] = 2.0 * a
    coeffs[2] = c
    coeffs[k + 1] = -2.0 / (k + 1)
    G = npoly.Polynomial(coeffs)
    dG = G.deriv()
    roots = G.roots()
    real_mask = np.abs(roots.imag) < 1e-9 * max(1.0, np.max(np.abs(roots)))
    rr = np.sort(np.unique(np.round(roots[real_mask].real, 12)))
    well = None
    for i in range(len(rr) - 1, 0, -1):
        lo, hi = rr[i - 1], rr[i]
        if hi - lo > 1e-10 and G(0.5 * (lo + hi)) > 0:
            well = (lo, hi)
            break
    if well is None:
        raise WaveError(f"G(phi; c={c}, a={a}, E={E}) admits no oscillation well")
    lo = _polish_root(G, dG, well[0])
    hi = _polish_root(G, dG, well[1])
    T = _quadrature_period(G, lo, hi)

    def rhs(x, y):
        return [y[1], 0.5 * dG(y[0])]

    events = _turning_events()
    sol = solve_ivp(
        rhs, [0.0, 1.5 * T], [hi, 0.0], method="DOP853",
        rtol=1e-12, atol=1e-13, dense_output=True, events=events,
    )
    ev = sol.t_events[0]
    if len(ev) == 0:
        raise WaveError("period event detection failed")
    T_event = ev[np.argmin(np.abs(ev - T))]
    if abs(T_event - T) > 1e-6 * T:
        raise WaveError(f"event period {T_event} disagrees with quadrature {T}")
    interp = sol.sol

    def eval_phi(x):
        return float(interp(x % T)[0])

    return WaveProfile(
        period=T,
        eval=eval_phi,
        params={
            "k": k, "c": c, "a": a, "E": E,
            "g_real_roots": int(np.sum(real_mask)),
            "phi_min": lo, "phi_max": hi,
        },
        label=f"gkdv(k={k})",
    )


def _turning_events():
    def turning(x, y):
        return y[1]

    turning.terminal = False
    turning.direction = 0
    return [turning]


# ---------------------------------------------------------------------------
# closed-form elliptic waves


def bbm_wave() -> WaveProfile:
    """BBM cnoidal wave phi = 1 + cn^2(sqrt(5/12) x; 1/5); range [1, 2]."""
    m = 0.2
    beta = math.sqrt(5.0 / 12.0)
    T = 2.0 * elliptic_K(m) / beta

    def f(x):
        cn, _, _ = jacobi_cn_dn_sn(beta * x, m)
        return 1.0 + cn * cn

    return WaveProfile(period=T, eval=f, params={"m": m, "c": 1.0, "a": 7.0 / 6.0, "E": -1.0},
                       label="bbm")


def mbbm_wave(m: float) -> WaveProfile:
    """mBBM cnoidal wave sqrt(2m/(2m-1)) cn(x/sqrt(2m-1); m), m > 1/2."""
    if not m > 0.5:
        raise WaveError("mbbm wave requires m > 1/2")
    amp = math.sqrt(2.0 * m / (2.0 * m - 1.0))
    beta = 1.0 / math.sqrt(2.0 * m - 1.0)
    T = 4.0 * elliptic_K(m) / beta

    def f(x):
        cn, _, _ = jacobi_cn_dn_sn(beta * x, m)
        return amp * cn

    return WaveProfile(period=T, eval=f, params={"m": m, "c": 1.0, "amplitude": amp},
                       label="mbbm")


def boussinesq_wave() -> WaveProfile:
    """Boussinesq dnoidal wave (sqrt7/2) dn(sqrt(7/8) x, 6/7); range [1/2, sqrt7/2]."""
    m = 6.0 / 7.0
    beta = math.sqrt(7.0 / 8.0)
    T = 2.0 * elliptic_K(m) / beta

    def f(x):
        _, dn, _ = jacobi_cn_dn_sn(beta * x, m)
        return math.sqrt(7.0) / 2.0 * dn

    return WaveProfile(period=T, eval=f, params={"m": m, "c": 1.0}, label="boussinesq")


# ---------------------------------------------------------------------------
# Kawahara family

# |alpha/sigma^2| bound: unique real root of 31 x^3 - 56784 x - 1406080
KAWAHARA_RATIO_BOUND = 52.0


def _kawahara_cubic(mm: float, r: float) -> float:
    return -703040.0 * (mm - 2.0) * (mm + 1.0) * (2.0 * mm - 1.0) \
        + 56784.0 * r * (mm * mm - mm + 1.0) - 31.0 * r**3


def kawahara_mstar(r: float, tol: float = 1e-13) -> float:
    """Elliptic parameter m* in (0,1) for ratio r = alpha/sigma^2, |r| < 52.

    Safeguarded bisection-Newton on the defining cubic; satisfies the
    complementary symmetry m*(-r) = 1 - m*(r).
    """
    if abs(r) >= KAWAHARA_RATIO_BOUND:
        raise WaveError(f"|alpha/sigma^2| = {abs(r)} >= 52: no periodic wave")
    lo, hi = 1e-14, 1.0 - 1e-14
    flo, fhi = _kawahara_cubic(lo, r), _kawahara_cubic(hi, r)
    if flo * fhi > 0:
        raise WaveError("root bracketing failed for m*")
    m = 0.5
    for _ in range(200):
        f = _kawahara_cubic(m, r)
        if f * flo <= 0:
            hi = m
        else:
            lo, flo = m, f
        if hi - lo < tol:
            break
        df = -703040.0 * _dkawahara(m) + 56784.0 * r * (2.0 * m - 1.0)
        mn = m - f / df if df != 0 else m
        m = mn if lo < mn < hi else 0.5 * (lo + hi)
    return m


def _dkawahara(m: float) -> float:
    # d/dm of (m-2)(m+1)(2m-1) = d/dm (2m^3 - 3m^2 - 3m + 2)
    return 6.0 * m * m - 6.0 * m - 3.0


def kawahara_wave(alpha: float, sigma: float) -> WaveProfile:
    """Periodic stationary wave of the Kawahara equation.

    alpha = 0: phi = 420 sigma^4 cn^4(sigma x, 1/2) - 168 sigma^4.
    Otherwise phi = C1 + C2 cn^2(sigma x, m*) + C3 cn^4(sigma x, m*) with m*
    from ``kawahara_mstar``; both branches agree at alpha = 0 (m* = 1/2).
    Period 2K(m*)/sigma.
    """
    if sigma == 0:
        raise WaveError("sigma must be nonzero")
    if alpha == 0.0:
        m = 0.5
        C1 = -168.0 * sigma**4
        C2 = 0.0
        C3 = 420.0 * sigma**4
    else:
        r = alpha / sigma**2
        m = kawahara_mstar(r)
        C1 = (-31.0 * alpha**2 + 264992.0 * sigma**4 * m * m - 264992.0 * sigma**4 * m
              - 18928.0 * sigma**4 + 3640.0 * alpha * sigma**2
              - 7280.0 * alpha * sigma**2 * m) / 507.0
        C2 = -280.0 / 13.0 * sigma**2 * m * (-alpha + 104.0 * sigma**2 * m - 52.0 * sigma**2)
        C3 = 1680.0 * sigma**4 * m * m
    T = 2.0 * elliptic_K(m) / sigma

    def f(x):
        cn, _, _ = jacobi_cn_dn_sn(sigma * x, m)
        c2 = cn * cn
        return C1 + C2 * c2 + C3 * c2 * c2

    return WaveProfile(
        period=T, eval=f,
        params={"alpha": alpha, "sigma": sigma, "m": m, "C1": C1, "C2": C2, "C3": C3},
        label="kawahara",
    )


# ---------------------------------------------------------------------------
# quintic Schroedinger nontrivial-phase wave

QUINTIC_KAPPA = 3.0 * math.sqrt(2.0) / 8.0
QUINTIC_OMEGA = -31.0 / 16.0  # sign fixed by the quadrature below


def _quintic_F(A):
    return -21.0 / 32.0 - 9.0 / (32.0 * A * A) + 31.0 / 16.0 * A * A - A**6


def nls_quintic_phase_wave() -> WaveProfile:
    """Amplitude/phase-gradient pair for the focusing quintic Schroedinger wave.

    A_x^2 = -21/32 - 9/(32 A^2) + (31/16) A^2 - A^6 with kappa = 3 sqrt2/8;
    the positive oscillation well of the right side is A in [sqrt3/2, 1]
    and the closed orbit starting from the turning point A(0) = 1 has period
    about 1.93.  The second component is K_x = kappa/A^2.
    """
    lo, hi = math.sqrt(3.0) / 2.0, 1.0
    # A^2 F(A) is an even polynomial in A: -A^8 + 31/16 A^4 - 21/32 A^2 - 9/32
    # with simple roots at A = lo, hi; quadrature as for the gKdV wells.
    mid, rad = 0.5 * (lo + hi), 0.5 * (hi - lo)
    nquad = 256
    t = np.cos((2 * np.arange(1, nquad + 1) - 1) * np.pi / (2 * nquad))
    Ak = mid + rad * t
    S = _quintic_F(Ak) / ((Ak - lo) * (hi - Ak))
    T = 2.0 * (np.pi / nquad) * float(np.sum(1.0 / np.sqrt(S)))

    def rhs(x, y):
        A = y[0]
        # A'' = F'(A)/2
        return [y[1], 0.5 * (9.0 / (16.0 * A**3) + 31.0 / 8.0 * A - 6.0 * A**5)]

    sol = solve_ivp(rhs, [0.0, T], [hi, 0.0], method="DOP853",
                    rtol=1e-12, atol=1e-13, dense_output=True)
    resid = abs(sol.y[0, -1] - hi) + abs(sol.y[1, -1])
    if resid > 1e-7:
        raise WaveError(f"quintic amplitude orbit failed to close: residual {resid:.2e}")
    interp = sol.sol

    def eval_A(x):
        return float(interp(x % T)[0])

    def eval_Kx(x):
        A = eval_A(x)
        return QUINTIC_KAPPA / (A * A)

    return WaveProfile(
        period=T, eval=eval_A, eval2=eval_Kx,
        params={"kappa": QUINTIC_KAPPA, "omega": QUINTIC_OMEGA,
                "A_min": lo, "A_max": hi},
        label="nls-quintic-phase",
    )
