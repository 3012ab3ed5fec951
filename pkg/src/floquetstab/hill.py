"""Fourier-Floquet-Hill computation of the L^2(R) essential spectrum.

Profiles are expanded in Fourier series; for each Floquet exponent mu the
operator is truncated to wavenumbers -N..N (derivative -> diagonal
i(mu + 2 pi k / T), multiplication -> Toeplitz block of Fourier
coefficients) and the dense nonsymmetric eigenproblem is solved.
lambda-quadratic problems (Boussinesq, the second-order example) are
companion-linearized to a standard eigenproblem of doubled dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import waves
from .models import ModelBundle, OperatorSymbol, build_model

__all__ = [
    "HillConfig",
    "SpectrumPoint",
    "HillError",
    "build_hill_matrix",
    "hill_spectrum",
    "spectrum_points",
    "multiplicity_cover",
    "max_real_part",
    "off_axis_attach_points",
    "real_axis_extent",
]


class HillError(RuntimeError):
    pass


@dataclass
class HillConfig:
    N: int = 31                  # wavenumbers -N..N
    n_exponents: int = 2000      # Floquet exponents in [-pi/T, pi/T)
    axis_tol: float = 1e-6       # |Re lambda| below this counts as on-axis

    def __post_init__(self):
        if self.N < 1 or self.n_exponents < 1:
            raise ValueError("need N >= 1 and a nonempty exponent grid")

    def exponents(self, T: float):
        return -np.pi / T + 2.0 * np.pi / T * np.arange(self.n_exponents) / self.n_exponents


@dataclass
class SpectrumPoint:
    lam: complex
    exponent: float
    branch: int


def _term_matrix(term, D, toeplitz):
    M = toeplitz[term.profile] if term.profile is not None else None
    a = np.diag(D**term.a)
    b = np.diag(D**term.b)
    if M is None:
        return term.coeff * np.diag(D ** (term.a + term.b))
    return term.coeff * (a @ M @ b)


def _toeplitz_blocks(symbol: OperatorSymbol, N: int):
    out = {}
    for name, prof in symbol.profiles.items():
        c = waves.fourier_coefficients(prof, 2 * N)
        mid = 2 * N
        T = np.empty((2 * N + 1, 2 * N + 1), dtype=complex)
        for i in range(2 * N + 1):
            for j in range(2 * N + 1):
                T[i, j] = c[mid + (i - j)]
        out[name] = T
    return out


def build_hill_matrix(symbol: OperatorSymbol, mu: float, N: int,
                      toeplitz: dict | None = None):
    """Truncated operator for Floquet exponent mu.

    Returns ``("linear", L)`` with lambda v = L v for lambda-degree-1
    problems (the BBM-type lhs multiplier is inverted on its nonvanishing
    diagonal), or ``("companion", C)`` with the doubled-dimension companion
    matrix for lambda-quadratic pencils.
    """
    if toeplitz is None:
        toeplitz = _toeplitz_blocks(symbol, N)
    T = symbol.period
    k = np.arange(-N, N + 1)
    D = 1j * (mu + 2.0 * np.pi * k / T)
    m = 2 * N + 1
    ncomp = symbol.components
    dim = ncomp * m
    R = np.zeros((dim, dim), dtype=complex)
    for (i, j), terms in symbol.blocks.items():
        blk = np.zeros((m, m), dtype=complex)
        for t in terms:
            blk += _term_matrix(t, D, toeplitz)
        R[i * m:(i + 1) * m, j * m:(j + 1) * m] = blk

    def lhs_matrix(power):
        terms = symbol.lhs_terms.get(power, [])
        out = np.zeros((m, m), dtype=complex)
        for t in terms:
            out += _term_matrix(t, D, toeplitz)
        blkdiag = np.zeros((dim, dim), dtype=complex)
        for i in range(ncomp):
            blkdiag[i * m:(i + 1) * m, i * m:(i + 1) * m] = out
        return blkdiag

    deg = symbol.lambda_degree
    if deg == 1:
        L1 = lhs_matrix(1)
        d = np.diag(L1)
        if np.any(np.abs(d) < 1e-14) or np.count_nonzero(L1 - np.diag(d)):
            L = np.linalg.solve(L1, R)
        else:
            L = R / d[:, None]
        return "linear", L
    if deg == 2:
        L2 = lhs_matrix(2)
        L1 = lhs_matrix(1)
        # lambda^2 L2 v + lambda L1 v = R v; with z = lambda v:
        # lambda [v; z] = [[0, I], [L2^-1 R, -L2^-1 L1]] [v; z]
        L2inv_R = np.linalg.solve(L2, R)
        L2inv_L1 = np.linalg.solve(L2, L1)
        Z = np.zeros((dim, dim), dtype=complex)
        I = np.eye(dim, dtype=complex)
        C = np.block([[Z, I], [L2inv_R, -L2inv_L1]])
        return "companion", C
    raise HillError(f"unsupported lambda degree {deg}")


def hill_spectrum(model, config: HillConfig = HillConfig(), params: dict | None = None):
    """All eigenvalues over the full exponent grid, exponent-major order.

    ``model`` may be a registered id or a ModelBundle.  Per-exponent
    eigensolver failures are reported in the second return value and the
    sweep continues.
    """
    bundle = build_model(model, params) if isinstance(model, str) else model
    symbol = bundle.symbol
    toeplitz = _toeplitz_blocks(symbol, config.N)
    mus = config.exponents(symbol.period)
    points = []
    failures = []
    for mu in mus:
        kind, L = build_hill_matrix(symbol, mu, config.N, toeplitz)
        try:
            ev = np.linalg.eigvals(L)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
            failures.append((float(mu), str(exc)))
            continue
        order = np.lexsort((ev.real, ev.imag))
        for b, idx in enumerate(order):
            points.append(SpectrumPoint(lam=complex(ev[idx]), exponent=float(mu), branch=b))
    return points, failures


def spectrum_points(points) -> np.ndarray:
    return np.array([p.lam for p in points])


def max_real_part(points) -> float:
    lam = spectrum_points(points)
    return float(np.max(np.abs(lam.real))) if len(lam) else 0.0


def multiplicity_cover(points, lo: float, hi: float, bin_width: float,
                       axis_tol: float = 1e-6):
    """Per-bin covering counts of the imaginary axis by spectrum branches.

    For a probe level y, the covering multiplicity is the number of branch
    crossings of Im(lambda) = y.  It is counted matching-free as the total
    variation over the exponent loop of g(mu) = #{on-axis eigenvalues with
    Im > y}; each transversal crossing contributes exactly one.

    Returns (bin_centers, counts).
    """
    if hi <= lo:
        raise ValueError("need lo < hi")
    centers = np.arange(lo + bin_width / 2.0, hi, bin_width)
    by_mu = {}
    for p in points:
        if abs(p.lam.real) <= axis_tol:
            by_mu.setdefault(p.exponent, []).append(p.lam.imag)
    mus = sorted(by_mu)
    if not mus:
        return centers, np.zeros(len(centers), dtype=int)
    ims = [np.sort(np.array(by_mu[mu])) for mu in mus]
    sizes = np.array([len(a) for a in ims])
    # For steps with an unchanged on-axis population the sorted pairing is
    # the monotone matching and the level-crossing count is |diff g|.  Where
    # branches enter/leave the axis filter (instability bubbles) the two
    # sets are aligned by monotone DP matching so surviving branches still
    # contribute their crossings.  The Brillouin wrap step is excluded: the
    # truncation-edge branch relabels k -> k+1 across it, which would add a
    # spurious crossing at every level.
    steady = sizes[1:] == sizes[:-1]
    counts = np.zeros(len(centers), dtype=int)
    for bi, y in enumerate(centers):
        g = np.array([len(a) - np.searchsorted(a, y) for a in ims])
        counts[bi] = int(np.sum(np.abs(np.diff(g))[steady]))
    def add_segment(a, b):
        lo2, hi2 = (a, b) if a <= b else (b, a)
        k0 = np.searchsorted(centers, lo2, side="right")
        k1 = np.searchsorted(centers, hi2, side="left")
        counts[k0:k1] += 1

    for i in np.nonzero(~steady)[0]:
        pairs, only_a, only_b = _monotone_match(ims[i], ims[i + 1])
        for a, b in pairs:
            add_segment(a, b)
        # branches enter/leave the axis in colliding pairs that split from
        # (or merge into) a double point; its location is approximated by
        # the pair midpoint, recovering the crossings inside this step
        for group in (only_a, only_b):
            for j in range(0, len(group) - 1, 2):
                mid = 0.5 * (group[j] + group[j + 1])
                add_segment(mid, group[j])
                add_segment(mid, group[j + 1])
    return centers, counts


def _monotone_match(a, b):
    """Order-preserving pairing of two sorted sequences minimizing sum |a-b|,
    allowing unmatched entries (branches entering/leaving)."""
    na, nb = len(a), len(b)
    INF = float("inf")
    # dp over (i, j): cost matching prefixes; allow at most the forced skips
    # on the longer side only
    cost = np.full((na + 1, nb + 1), INF)
    cost[0, 0] = 0.0
    for i in range(na + 1):
        for j in range(nb + 1):
            c = cost[i, j]
            if c == INF:
                continue
            if i < na and j < nb:
                v = c + abs(a[i] - b[j])
                if v < cost[i + 1, j + 1]:
                    cost[i + 1, j + 1] = v
            if i < na and na - i > nb - j:
                if c < cost[i + 1, j]:
                    cost[i + 1, j] = c
            if j < nb and nb - j > na - i:
                if c < cost[i, j + 1]:
                    cost[i, j + 1] = c
    # backtrack
    pairs = []
    only_a = []
    only_b = []
    i, j = na, nb
    while i > 0 or j > 0:
        if i > 0 and j > 0 and cost[i, j] == cost[i - 1, j - 1] + abs(a[i - 1] - b[j - 1]):
            pairs.append((a[i - 1], b[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and cost[i, j] == cost[i - 1, j]:
            only_a.append(a[i - 1])
            i -= 1
        else:
            only_b.append(b[j - 1])
            j -= 1
    return pairs, sorted(only_a), sorted(only_b)


def off_axis_attach_points(points, re_threshold: float = 1e-4, gap: float = 0.05,
                           min_cluster: int = 3):
    """Imaginary parts where off-axis spectrum attaches to the axis.

    Off-axis points are clustered by gaps in Im(lambda); each cluster
    reports its Im extremes (isola endpoints, figure-eight rejoin points)
    and, when the cluster straddles zero, the origin.
    """
    offs = sorted(p.lam.imag for p in points if abs(p.lam.real) > re_threshold)
    if not offs:
        return []
    clusters = [[offs[0]]]
    for y in offs[1:]:
        if y - clusters[-1][-1] > gap:
            clusters.append([])
        clusters[-1].append(y)
    out = []
    for cl in clusters:
        if len(cl) < min_cluster:
            continue
        out.append(cl[0])
        out.append(cl[-1])
        if cl[0] < 0.0 < cl[-1]:
            out.append(0.0)
    return sorted(out)


def real_axis_extent(points, im_tol: float = 1e-4) -> float:
    """Largest |Re lambda| among points lying on the real axis."""
    vals = [abs(p.lam.real) for p in points if abs(p.lam.imag) <= im_tol]
    return max(vals) if vals else 0.0
