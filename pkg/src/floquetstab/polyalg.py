"""Exact-degree polynomial algebra over real and complex coefficients.

Everything here works on plain coefficient sequences in ascending degree
order (constant term first), thinly wrapped by :class:`Poly`,
:class:`SelfInversivePoly` and :class:`RealPoly`.  The module provides the
pieces the classifiers are built from: elementary symmetric functions via
the Newton trace recurrence, the Cayley (Moebius) transform that converts
unit-circle root counting into real root counting, Sylvester resultants and
discriminants, and Sturm-sequence real root counting.

Polynomial roots (balanced companion eigenvalues, ``numpy.roots``) appear
only as test oracles and degenerate fallbacks; classification paths stay on
sign conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Poly",
    "RealPoly",
    "SelfInversivePoly",
    "PolyalgError",
    "NonSquarefreeError",
    "SymmetryError",
    "elementary_symmetric_from_traces",
    "elementary_symmetric_derivatives",
    "charpoly_from_monodromy",
    "charpoly_coeffs",
    "cayley_transform",
    "sylvester_resultant",
    "discriminant",
    "sturm_real_root_count",
    "unit_circle_root_count",
    "companion_roots",
]

MAX_DEGREE = 8


class PolyalgError(ValueError):
    pass


class NonSquarefreeError(PolyalgError):
    """Raised when an operation requires a squarefree polynomial."""


class SymmetryError(PolyalgError):
    """Raised when input violates the self-inversive symmetry beyond tolerance."""


def _trim(coeffs, tol=0.0):
    c = np.asarray(coeffs, dtype=complex).ravel()
    scale = np.max(np.abs(c)) if c.size else 0.0
    k = c.size - 1
    while k > 0 and abs(c[k]) <= tol * scale:
        k -= 1
    return c[: k + 1].copy()


@dataclass(frozen=True)
class Poly:
    """Polynomial with complex coefficients, ascending degree order."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        # Horner, ascending coefficients
        acc = np.zeros_like(np.asarray(z, dtype=complex))
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc if acc.shape else complex(acc)

    def deriv(self) -> "Poly":
        if self.degree == 0:
            return Poly(np.zeros(1))
        k = np.arange(1, self.degree + 1)
        return Poly(self.coeffs[1:] * k)

    def is_zero(self, tol=0.0) -> bool:
        return self.degree == 0 and abs(self.coeffs[0]) <= tol


@dataclass(frozen=True)
class RealPoly:
    """Polynomial with real coefficients, ascending degree order.

    ``dropped_degree`` records how many degrees were lost relative to the
    nominal degree of the source polynomial (nonzero after a Cayley
    transform of a polynomial with a root at mu = -1, the "roots at
    infinity" caveat).
    """

    coeffs: np.ndarray
    dropped_degree: int = 0

    def __post_init__(self):
        c = _trim(self.coeffs)
        object.__setattr__(self, "coeffs", c.real.astype(float))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0.0
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc

    def as_poly(self) -> Poly:
        return Poly(self.coeffs.astype(complex))


@dataclass(frozen=True)
class SelfInversivePoly:
    """Self-inversive polynomial: root multiset invariant under mu -> 1/conj(mu).

    For the monodromy charpoly convention p(mu) = sum_k (-mu)^k e_{n-k} with
    e_k = conj(e_{n-k}), the ascending coefficients satisfy
    c_{n-k} = (-1)^n conj(c_k).  ``symmetry_residual`` is the max violation
    of that relation relative to the coefficient scale.
    """

    base: Poly
    symmetry_residual: float = field(default=0.0)

    @staticmethod
    def from_coeffs(coeffs, tol=1e-8) -> "SelfInversivePoly":
        p = Poly(coeffs)
        c = p.coeffs
        n = p.degree
        scale = np.max(np.abs(c))
        sign = (-1) ** n
        resid = float(np.max(np.abs(c[::-1] - sign * np.conj(c)))) / scale
        if resid > tol:
            raise SymmetryError(
                f"coefficients violate self-inversive symmetry: residual {resid:.3e}"
            )
        return SelfInversivePoly(p, resid)

    @staticmethod
    def from_elementary_symmetric(e) -> "SelfInversivePoly":
        """Build p(mu) = sum_k (-mu)^k e_{n-k} from e_0..e_n."""
        e = np.asarray(e, dtype=complex)
        n = len(e) - 1
        coeffs = np.array([(-1) ** k * e[n - k] for k in range(n + 1)])
        return SelfInversivePoly.from_coeffs(coeffs)

    @property
    def degree(self) -> int:
        return self.base.degree


def elementary_symmetric_from_traces(traces, n: int):
    """Elementary symmetric functions e_0..e_n from power traces.

    ``traces[j-1]`` must hold tr(M^j), j = 1..n.  Newton's recurrence:
    k e_k = sum_{j=1..k} (-1)^(j-1) e_{k-j} traces[j].
    """
    traces = list(traces)
    if len(traces) < n:
        raise PolyalgError(f"need {n} traces, got {len(traces)}")
    e = [1.0 + 0.0j]
    for k in range(1, n + 1):
        acc = 0.0 + 0.0j
        for j in range(1, k + 1):
            acc += (-1) ** (j - 1) * e[k - j] * traces[j - 1]
        e.append(acc / k)
    return np.array(e)


def elementary_symmetric_derivatives(traces, dtraces, n: int):
    """d/dlambda of the e_k, given traces t_j and their derivatives t'_j.

    Differentiates Newton's recurrence:
    k e'_k = sum_j (-1)^(j-1) (e'_{k-j} t_j + e_{k-j} t'_j).
    Returns (e, eprime), both length n+1 (e'_0 = 0).
    """
    e = elementary_symmetric_from_traces(traces, n)
    ep = [0.0 + 0.0j]
    for k in range(1, n + 1):
        acc = 0.0 + 0.0j
        for j in range(1, k + 1):
            acc += (-1) ** (j - 1) * (ep[k - j] * traces[j - 1] + e[k - j] * dtraces[j - 1])
        ep.append(acc / k)
    return e, np.array(ep)


def power_traces(M, n: int):
    """tr(M^j) for j = 1..n."""
    M = np.asarray(M, dtype=complex)
    out = []
    P = np.eye(M.shape[0], dtype=complex)
    for _ in range(n):
        P = P @ M
        out.append(np.trace(P))
    return np.array(out)


def charpoly_coeffs(M):
    """e_0..e_n of det(M - mu I) via power traces and Newton's recurrence."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if n > MAX_DEGREE:
        raise PolyalgError(f"dimension {n} exceeds supported maximum {MAX_DEGREE}")
    return elementary_symmetric_from_traces(power_traces(M, n), n)


def charpoly_from_monodromy(M) -> Poly:
    """p(mu) = det(M - mu I) = sum_k (-mu)^k e_{n-k}, ascending coefficients."""
    e = charpoly_coeffs(M)
    n = len(e) - 1
    return Poly([(-1) ** k * e[n - k] for k in range(n + 1)])


def _binom_pow_conv(k: int, n: int):
    # ascending coefficients of (1 + i nu)^k (1 - i nu)^(n-k)
    a = np.array([1.0 + 0.0j])
    for _ in range(k):
        a = np.convolve(a, [1.0, 1.0j])
    for _ in range(n - k):
        a = np.convolve(a, [1.0, -1.0j])
    return a


def cayley_transform(p, tol: float = 1e-7) -> RealPoly:
    """p_sharp(nu) = (1 - i nu)^n p((1 + i nu)/(1 - i nu)).

    Unit-circle roots of a self-inversive p map to real roots of p_sharp.
    For odd n the raw coefficients carry a common unimodular phase (e.g. 2i
    for cubics); the phase is stripped before returning.  Stripping a unit
    phase leaves disc(p_sharp) invariant for n <= 5 since (2n-2) is then a
    multiple of 4 or the phase is real.

    The degree of p_sharp drops by the multiplicity of mu = -1 as a root of
    p (leading coefficient is (-i)^n p(-1)); the drop is recorded in
    ``dropped_degree``.
    """
    if isinstance(p, SelfInversivePoly):
        p = p.base
    elif not isinstance(p, Poly):
        p = Poly(p)
    c = p.coeffs
    n = p.degree
    out = np.zeros(n + 1, dtype=complex)
    for k, ck in enumerate(c):
        out += ck * _binom_pow_conv(k, n)
    scale = np.max(np.abs(out))
    if scale == 0.0:
        return RealPoly(np.zeros(1), dropped_degree=n)
    phase = out[np.argmax(np.abs(out))]
    phase = phase / abs(phase)
    if abs(phase.imag) < 1e-8:
        phase = 1.0  # already real: keep the original signs
    stripped = out / phase
    resid = float(np.max(np.abs(stripped.imag))) / scale
    if resid > tol:
        raise SymmetryError(
            f"input not self-inversive within tolerance: imaginary residual {resid:.3e}"
        )
    real_coeffs = stripped.real
    # drop near-zero leading coefficients (root of p at mu = -1)
    drop_tol = 1e-10 * scale
    deg = n
    while deg > 0 and abs(real_coeffs[deg]) <= drop_tol:
        deg -= 1
    return RealPoly(real_coeffs[: deg + 1], dropped_degree=n - deg)


def sylvester_matrix(p, q):
    p = p if isinstance(p, Poly) else Poly(p)
    q = q if isinstance(q, Poly) else Poly(q)
    m, n = p.degree, q.degree
    if (p.is_zero()) or (q.is_zero()):
        raise PolyalgError("resultant of zero polynomial")
    S = np.zeros((m + n, m + n), dtype=complex)
    pc = p.coeffs[::-1]  # descending
    qc = q.coeffs[::-1]
    for i in range(n):
        S[i, i : i + m + 1] = pc
    for i in range(m):
        S[n + i, i : i + n + 1] = qc
    return S


def sylvester_resultant(p, q) -> complex:
    """Determinant of the Sylvester matrix of p and q (partial-pivot LU).

    res(p, q) = lead(p)^deg(q) * prod q(alpha_i) over the roots alpha_i of p.
    """
    S = sylvester_matrix(p, q)
    if S.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(S))


def discriminant(p) -> complex:
    """disc(p) = (-1)^(n(n-1)/2) res(p, p') / lead(p), degree n >= 2."""
    p = p if isinstance(p, Poly) else (p.base if isinstance(p, SelfInversivePoly) else Poly(p))
    n = p.degree
    if n < 2:
        raise PolyalgError("discriminant requires degree >= 2")
    sign = (-1) ** (n * (n - 1) // 2)
    return sign * sylvester_resultant(p, p.deriv()) / p.lead


def _poly_divmod(a, b):
    # numpy polydiv on descending coefficients; a, b ascending float arrays
    q, r = np.polydiv(a[::-1], b[::-1])
    return np.atleast_1d(q)[::-1], np.atleast_1d(r)[::-1]


def _sign_at(coeffs, x: float) -> int:
    if np.isposinf(x):
        return int(np.sign(coeffs[-1]))
    if np.isneginf(x):
        n = len(coeffs) - 1
        return int(np.sign(coeffs[-1]) * (-1) ** n)
    v = 0.0
    for c in coeffs[::-1]:
        v = v * x + c
    return int(np.sign(v))


def _sturm_chain(coeffs, tol):
    chain = [coeffs]
    deriv = coeffs[1:] * np.arange(1, len(coeffs))
    chain.append(deriv / np.max(np.abs(deriv)))
    while len(chain[-1]) > 1:
        a, b = chain[-2], chain[-1]
        _, r = _poly_divmod(a, b)
        scale = np.max(np.abs(r)) if r.size else 0.0
        if scale <= tol * max(1.0, np.max(np.abs(a))):
            # gcd(p, p') has positive degree: not squarefree
            raise NonSquarefreeError("polynomial is not squarefree within tolerance")
        r = r / scale
        r = _trim(r, tol=1e-14).real
        chain.append(-r)
    return chain


def sturm_real_root_count(p, a: float = -np.inf, b: float = +np.inf) -> int:
    """Number of distinct real roots in (a, b] via the Sturm sequence.

    Requires p squarefree within tolerance; raises NonSquarefreeError
    otherwise so callers can fall back to classifier-specific handling.
    """
    if isinstance(p, RealPoly):
        coeffs = p.coeffs
    else:
        coeffs = np.asarray(p, dtype=float).ravel()
    coeffs = _trim(coeffs).real
    if len(coeffs) == 1:
        return 0
    if not a < b:
        raise PolyalgError("need a < b")
    coeffs = coeffs / np.max(np.abs(coeffs))
    if len(coeffs) == 2:
        root = -coeffs[0] / coeffs[1]
        return int(a < root <= b)
    chain = _sturm_chain(coeffs, tol=1e-12)

    def variations(x):
        signs = [_sign_at(c, x) for c in chain]
        signs = [s for s in signs if s != 0]
        return sum(1 for s, t in zip(signs, signs[1:]) if s * t < 0)

    # nudge b upward so a root exactly at b is included, per the (a, b]
    # contract (the dropped-zero sign convention behaves like the limit
    # from below there)
    if np.isfinite(b):
        b = b + 1e-12 * max(1.0, abs(b))
    return variations(a) - variations(b)


def companion_roots(p):
    """Roots via balanced companion-matrix eigenvalues (oracle use)."""
    p = p if isinstance(p, Poly) else (p.base if isinstance(p, SelfInversivePoly) else Poly(p))
    return np.roots(p.coeffs[::-1])


def unit_circle_root_count(p, disc_tol: float = 1e-8):
    """Count unit-circle roots of a self-inversive polynomial.

    Returns (count, degenerate).  The count is the number of distinct real
    roots of the Cayley transform plus the degree drop at mu = -1 (a root of
    p at -1 maps to nu = infinity).  ``degenerate`` is set when the
    discriminant of p_sharp is within a scale-aware tolerance of zero
    (repeated roots on the circle), in which case the count falls back to
    tolerance-based companion-root counting with multiplicity.
    """
    if not isinstance(p, SelfInversivePoly):
        p = SelfInversivePoly.from_coeffs(p)
    ps = cayley_transform(p)
    n_nominal = p.degree
    if ps.degree >= 2:
        c = ps.coeffs / np.max(np.abs(ps.coeffs))
        d = discriminant(Poly(c.astype(complex))).real
        degenerate = abs(d) < disc_tol
    else:
        degenerate = ps.degree == 0 and n_nominal - ps.dropped_degree > 0
    if not degenerate:
        try:
            count = sturm_real_root_count(ps) if ps.degree >= 1 else 0
        except NonSquarefreeError:
            degenerate = True
        else:
            return count + ps.dropped_degree, False
    roots = companion_roots(p)
    count = int(np.sum(np.abs(np.abs(roots) - 1.0) < 1e-7))
    return count, True
