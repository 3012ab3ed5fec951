"""Monodromy matrices of periodic first-order systems v_x = A(x, lambda) v.

The period is integrated in eight panels by an adaptive embedded
Runge-Kutta 8(7) pair (DOP853); the monodromy matrix is the descending
product of panel propagators and, when requested, its lambda-derivative
comes from the per-panel variational systems W' = A W + A_lambda V.

Elementary symmetric functions of the monodromy eigenvalues are assembled
in a cancellation-safe split: e_k for k <= n/2 from Newton's trace
recurrence on M, and e_k for k > n/2 from e_{n-k}(M) = det(M) e_k(M^{-1})
with M^{-1} built from the well-conditioned panel inverses.  For stiff
problems (Kawahara eigenvalues spanning nine orders of magnitude) this
keeps the full coefficient set accurate where plain traces of M^k lose
them to cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import polyalg

__all__ = [
    "SpectralProblem",
    "MonodromyResult",
    "FloquetSample",
    "MonodromyError",
    "SingularParameterError",
    "integrate_monodromy",
    "verify_generalized_hamiltonian_symmetry",
    "floquet_sample",
]

N_PANELS = 8
DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-13


class MonodromyError(RuntimeError):
    pass


class SingularParameterError(MonodromyError):
    """lambda hits an excluded value (B singular or A undefined)."""


@dataclass
class SpectralProblem:
    """First-order periodic spectral problem v_x = A(x, lambda) v.

    ``eval_A(x, lam)`` returns the n x n complex system matrix;
    ``eval_A_lam`` its analytic lambda-derivative when the model is affine
    in lambda or 1/lambda (all bundled models), else None and differencing
    is used.  ``eval_B`` is the generalized Hamiltonian symmetry matrix
    when the model supplies one.  ``expected_det(lam)`` gives
    exp(int tr A dx) for non-trace-free models (gBBM full system).
    """

    n: int
    T: float
    eval_A: object
    eval_A_lam: object | None = None
    eval_B: object | None = None
    trace_free: bool = True
    excluded: tuple = ()     # A undefined or lambda otherwise excluded: no integration
    excluded_B: tuple = ()   # B singular: no symmetry verification
    expected_det: object | None = None
    bbm_weight: bool = False  # BBM-type exponential-weight flag
    label: str = ""
    meta: dict = field(default_factory=dict)

    def check_excluded(self, lam: complex, tol: float = 1e-12, for_B: bool = False):
        bad = self.excluded + (self.excluded_B if for_B else ())
        for z in bad:
            if abs(lam - z) <= tol:
                raise SingularParameterError(
                    f"lambda = {lam} is an excluded parameter of model '{self.label}'"
                )


@dataclass
class MonodromyResult:
    lam: complex
    M: np.ndarray
    Mlam: np.ndarray | None
    e: np.ndarray          # e_0..e_n
    eprime: np.ndarray | None  # d/dlambda e_k (None without derivative)
    det_residual: float
    low_confidence: bool = False


@dataclass
class FloquetSample:
    """Floquet discriminant components at purely imaginary lambda.

    ``f`` holds the n-1 real components (Re e_1, Im e_1, Re e_2, ...);
    ``imag_residual`` the largest imaginary part found in quantities the
    symmetry forces real (e.g. e_{n/2} for n even).
    """

    lam: complex
    f: np.ndarray
    e: np.ndarray
    eprime: np.ndarray | None
    imag_residual: float
    multiplicity: int | None = None
    classifiers: dict = field(default_factory=dict)
    phi: float | None = None


def _numeric_A_lam(problem, x, lam):
    h = 1e-6 * max(1.0, abs(lam))
    return (problem.eval_A(x, lam + h) - problem.eval_A(x, lam - h)) / (2.0 * h)


def _integrate_panels(problem, lam, rtol, atol, with_derivative):
    n = problem.n
    T = problem.T
    eval_A = problem.eval_A
    eval_Al = problem.eval_A_lam
    nn = n * n
    eye = np.eye(n, dtype=complex)

    if with_derivative:
        if eval_Al is None:
            def A_lam(x):
                return _numeric_A_lam(problem, x, lam)
        else:
            def A_lam(x):
                return eval_Al(x, lam)

        def rhs(x, y):
            A = eval_A(x, lam)
            V = y[:nn].reshape(n, n)
            W = y[nn:].reshape(n, n)
            return np.concatenate([(A @ V).ravel(), (A @ W + A_lam(x) @ V).ravel()])

        y0 = np.concatenate([eye.ravel(), np.zeros(nn, dtype=complex)])
    else:
        def rhs(x, y):
            return (eval_A(x, lam) @ y.reshape(n, n)).ravel()

        y0 = eye.ravel()

    panels = []
    dpanels = []
    for i in range(N_PANELS):
        a, b = T * i / N_PANELS, T * (i + 1) / N_PANELS
        sol = solve_ivp(rhs, [a, b], y0, method="DOP853", rtol=rtol, atol=atol)
        if not sol.success:
            raise MonodromyError(
                f"integration stalled near x = {sol.t[-1]:.6g}: {sol.message}"
            )
        yT = sol.y[:, -1]
        panels.append(yT[:nn].reshape(n, n))
        if with_derivative:
            dpanels.append(yT[nn:].reshape(n, n))
    return panels, dpanels


def _assemble(panels, dpanels):
    n = panels[0].shape[0]
    M = np.eye(n, dtype=complex)
    for P in panels:
        M = P @ M
    Mlam = None
    if dpanels:
        # M_lam = sum_i P_N..P_{i+1} dP_i P_{i-1}..P_1
        Mlam = np.zeros((n, n), dtype=complex)
        N = len(panels)
        prefix = [np.eye(n, dtype=complex)]
        for P in panels[:-1]:
            prefix.append(P @ prefix[-1])
        suffix = [np.eye(n, dtype=complex)]
        for P in panels[::-1][:-1]:
            suffix.append(suffix[-1] @ P)
        suffix = suffix[::-1]
        for i in range(N):
            Mlam += suffix[i] @ dpanels[i] @ prefix[i]
    return M, Mlam


def _split_symmetric_coeffs(M, panels, n):
    """e_0..e_n: low k from traces of M, high k via det(M) e_{n-k}(M^{-1})."""
    khalf = n // 2
    e_low = polyalg.elementary_symmetric_from_traces(polyalg.power_traces(M, n), n)
    Minv = np.eye(n, dtype=complex)
    det = 1.0 + 0.0j
    for P in panels:
        Minv = Minv @ np.linalg.inv(P)
        det = det * np.linalg.det(P)
    e_inv = polyalg.elementary_symmetric_from_traces(polyalg.power_traces(Minv, n), n)
    e = np.array(e_low)
    for k in range(khalf + 1, n + 1):
        e[k] = det * e_inv[n - k]
    return e, det


def integrate_monodromy(problem: SpectralProblem, lam: complex, tol: float = DEFAULT_RTOL,
                        with_derivative: bool = False) -> MonodromyResult:
    """Monodromy matrix M(lambda) = V(T, lambda) with local error control at tol.

    With ``with_derivative`` the variational system is integrated alongside
    and both M_lambda and d/dlambda e_k are returned.
    """
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-14, 1e-6]")
    problem.check_excluded(lam)
    atol = min(DEFAULT_ATOL, tol)
    panels, dpanels = _integrate_panels(problem, lam, tol, atol, with_derivative)
    M, Mlam = _assemble(panels, dpanels)

    e, det = _split_symmetric_coeffs(M, panels, problem.n)
    expected = 1.0 + 0.0j
    if not problem.trace_free:
        expected = problem.expected_det(lam) if problem.expected_det else None
    det_residual = abs(det - expected) if expected is not None else float("nan")

    eprime = None
    if with_derivative:
        n = problem.n
        t = polyalg.power_traces(M, n)
        # t'_j = j tr(M^{j-1} M_lam)
        dt = []
        P = np.eye(n, dtype=complex)
        for j in range(1, n + 1):
            dt.append(j * np.trace(P @ Mlam))
            P = P @ M
        _, eprime = polyalg.elementary_symmetric_derivatives(t, dt, n)
        if abs(lam.real) < 1e-12 * max(1.0, abs(lam)) and problem.trace_free:
            # on the axis e_k = conj(e_{n-k}) gives e'_{n-k} = -conj(e'_k);
            # replaces the cancellation-prone high-k trace derivatives
            for k in range(n // 2 + 1, n + 1):
                eprime[k] = -np.conj(eprime[n - k])

    sv = np.linalg.svd(M, compute_uv=False)
    low_conf = bool(sv[-1] == 0 or sv[0] / sv[-1] > 1e12)
    return MonodromyResult(lam=lam, M=M, Mlam=Mlam, e=e, eprime=eprime,
                           det_residual=det_residual, low_confidence=low_conf)


def verify_generalized_hamiltonian_symmetry(problem: SpectralProblem, lam: complex,
                                            tol: float = DEFAULT_RTOL):
    """Residuals of assumption (A2) and of the monodromy symmetry relation.

    residual_A2 = max over 32 equispaced x of ||A^T(x,l) B(l) + B(l) A(x,-l)||,
    residual_M  = ||M(l) - B^{-T}(l) M^{-T}(-l) B^T(l)|| / max(1, ||M(l)||)
    (Frobenius norms; the monodromy residual is relative since the
    B-conjugation amplifies absolute integration error with ||M||).
    """
    if problem.eval_B is None:
        raise MonodromyError(f"model '{problem.label}' supplies no symmetry matrix B")
    problem.check_excluded(lam, for_B=True)
    problem.check_excluded(-lam, for_B=True)
    B = np.asarray(problem.eval_B(lam), dtype=complex)
    if abs(np.linalg.det(B)) < 1e-14:
        raise SingularParameterError(f"B(lambda) singular at lambda = {lam}")
    xs = np.arange(32) * (problem.T / 32.0)
    residual_A2 = 0.0
    for x in xs:
        A1 = problem.eval_A(x, lam)
        A2 = problem.eval_A(x, -lam)
        residual_A2 = max(residual_A2, float(np.linalg.norm(A1.T @ B + B @ A2)))
    M = integrate_monodromy(problem, lam, tol).M
    Mm = integrate_monodromy(problem, -lam, tol).M
    Binv = np.linalg.inv(B)
    rhs = Binv.T @ np.linalg.inv(Mm).T @ B.T
    residual_M = float(np.linalg.norm(M - rhs)) / max(1.0, float(np.linalg.norm(M)))
    return residual_A2, residual_M


def floquet_sample(problem: SpectralProblem, lam: complex, tol: float = DEFAULT_RTOL,
                   with_derivative: bool = False) -> FloquetSample:
    """Floquet discriminant components at lambda on the imaginary axis.

    f_k = Re(e_{(k+1)/2}) for odd k, Im(e_{k/2}) for even k, k = 1..n-1.
    The imaginary residual of quantities forced real by the symmetry
    (e_{n/2} for n even) is recorded, not silently dropped.
    """
    if abs(lam.real) > 1e-10 * max(1.0, abs(lam)):
        raise ValueError(f"floquet_sample requires purely imaginary lambda, got {lam}")
    lam = 1j * lam.imag
    res = integrate_monodromy(problem, lam, tol, with_derivative)
    n = problem.n
    e = res.e
    scale = max(1.0, float(np.max(np.abs(e))))
    f = np.empty(n - 1)
    for k in range(1, n):
        if k % 2 == 1:
            f[k - 1] = e[(k + 1) // 2].real
        else:
            f[k - 1] = e[k // 2].imag
    imag_residual = 0.0
    if problem.trace_free:
        if n % 2 == 0:
            imag_residual = abs(e[n // 2].imag) / scale
        # symmetry violation e_k - conj(e_{n-k}) also contributes
        sym = max(abs(e[k] - np.conj(e[n - k])) for k in range(n + 1)) / scale
        imag_residual = max(imag_residual, sym)
    return FloquetSample(lam=lam, f=f, e=e, eprime=res.eprime,
                         imag_residual=imag_residual)
