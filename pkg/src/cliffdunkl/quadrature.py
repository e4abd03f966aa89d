"""Weighted quadrature for the product measures w_k(x) dx = prod |x_j|^(2 k_j) dx.

Three rule families, all driven by one Golub-Welsch eigen-solve:

* Gauss-Jacobi on (-1, 1) for the weight (1 - t^2)^(kappa - 1) (the psi
  density and the kernel integral representation live here),
* Gauss rules for x^(2 kappa) dx on a subinterval [0, b] (used for the
  innermost panel of every axis so the |x|^(2 kappa) singularity at 0
  never meets a plain Gauss-Legendre rule),
* plain Gauss-Legendre panels elsewhere.

Recurrence coefficients for the Jacobi-type weights are the classical
closed forms; measures with no closed form (the generalized Hermite weight
in dunkl_rank1) go through the discretized Stieltjes procedure below and
share the same eigen-solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "RecurrenceBreakdown",
    "NodeCountExceeded",
    "gauss_from_recurrence",
    "jacobi_recurrence",
    "legendre_rule",
    "JacobiRule",
    "jacobi_rule",
    "power_rule",
    "stieltjes",
    "Grid1D",
    "TensorGrid",
    "build_axis",
    "build_grid",
    "integrate",
    "parse_grid_spec",
    "NODE_CAP",
]

NODE_CAP = 1 << 24


class RecurrenceBreakdown(ArithmeticError):
    pass


class NodeCountExceeded(ValueError):
    pass


def gauss_from_recurrence(alpha, beta, order: int):
    """Gauss nodes/weights from monic three-term recurrence coefficients.

    alpha[k], beta[k] define p_{k+1} = (x - alpha[k]) p_k - beta[k] p_{k-1},
    with beta[0] = total mass of the measure.  Nodes are the eigenvalues of
    the symmetric Jacobi matrix, weights beta[0] times the squared first
    eigenvector components.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if order < 1 or len(alpha) < order or len(beta) < order:
        raise ValueError("need at least `order` recurrence coefficients")
    if beta[0] <= 0.0 or np.any(beta[1:order] <= 0.0):
        raise RecurrenceBreakdown("nonpositive recurrence norm")
    J = np.diag(alpha[:order])
    if order > 1:
        off = np.sqrt(beta[1:order])
        J += np.diag(off, 1) + np.diag(off, -1)
    nodes, vectors = np.linalg.eigh(J)
    weights = beta[0] * vectors[0, :] ** 2
    return nodes, weights


def jacobi_recurrence(n: int, a: float, b: float):
    """Monic recurrence coefficients for the weight (1-t)^a (1+t)^b on (-1,1)."""
    if a <= -1.0 or b <= -1.0:
        raise ValueError("Jacobi exponents must exceed -1")
    if n < 1:
        raise ValueError("need n >= 1")
    alpha = np.zeros(n)
    beta = np.zeros(n)
    beta[0] = (
        2.0 ** (a + b + 1.0)
        * math.gamma(a + 1.0)
        * math.gamma(b + 1.0)
        / math.gamma(a + b + 2.0)
    )
    alpha[0] = (b - a) / (a + b + 2.0)
    for k in range(n):
        s = 2.0 * k + a + b
        if k >= 1:
            alpha[k] = (b * b - a * a) / (s * (s + 2.0))
        if k == 1:
            # cancelled form; the generic one is 0/0 when a + b = -1
            beta[1] = 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) ** 2 * (a + b + 3.0))
        elif k >= 2:
            beta[k] = (
                4.0 * k * (k + a) * (k + b) * (k + a + b)
                / (s * s * (s + 1.0) * (s - 1.0))
            )
    return alpha, beta


@lru_cache(maxsize=64)
def legendre_rule(order: int):
    """Gauss-Legendre nodes/weights on (-1, 1); read-only arrays."""
    alpha, beta = jacobi_recurrence(order, 0.0, 0.0)
    nodes, weights = gauss_from_recurrence(alpha, beta, order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


@dataclass(frozen=True)
class JacobiRule:
    """Gauss rule on (-1, 1) for the weight (1 - t^2)^(kappa - 1), kappa > 0."""

    kappa: float
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def mass(self) -> float:
        """sum of weights = B(1/2, kappa)."""
        return float(np.sum(self.weights))


@lru_cache(maxsize=256)
def jacobi_rule(kappa: float, order: int) -> JacobiRule:
    if kappa <= 0.0:
        raise ValueError("jacobi_rule needs kappa > 0")
    alpha, beta = jacobi_recurrence(order, kappa - 1.0, kappa - 1.0)
    nodes, weights = gauss_from_recurrence(alpha, beta, order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return JacobiRule(kappa=kappa, order=order, nodes=nodes, weights=weights)


def power_rule(two_kappa: float, lo: float, hi: float, order: int):
    """Gauss rule for the measure x^(two_kappa) dx on [lo, hi], lo >= 0.

    Only the lo = 0 case carries the singular factor; it maps the Jacobi
    (0, two_kappa) rule from (-1, 1).  For lo > 0 the weight is smooth and
    a plain Gauss-Legendre rule folds it in.
    """
    if two_kappa < 0.0:
        raise ValueError("exponent must be nonnegative")
    if not 0.0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    if lo == 0.0:
        alpha, beta = jacobi_recurrence(order, 0.0, two_kappa)
        t, w = gauss_from_recurrence(alpha, beta, order)
        half = hi / 2.0
        nodes = half * (t + 1.0)
        weights = half ** (two_kappa + 1.0) * w
        return nodes, weights
    t, w = legendre_rule(order)
    half = (hi - lo) / 2.0
    nodes = lo + half * (t + 1.0)
    weights = half * w * nodes**two_kappa
    return nodes, weights


def stieltjes(nodes, weights, n: int):
    """Monic recurrence coefficients of the discrete measure sum w_i delta(x_i).

    The discretization must integrate polynomials of degree 2n against the
    target measure accurately; the returned (alpha, beta) then feed
    gauss_from_recurrence.
    """
    x = np.asarray(nodes, dtype=float)
    w = np.asarray(weights, dtype=float)
    alpha = np.zeros(n)
    beta = np.zeros(n)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    norm_prev = 1.0
    for k in range(n):
        norm = float(w @ (p * p))
        if not np.isfinite(norm) or norm <= 0.0:
            raise RecurrenceBreakdown(f"norm {norm} at degree {k}")
        alpha[k] = float(w @ (x * p * p)) / norm
        beta[k] = w.sum() if k == 0 else norm / norm_prev
        p_next = (x - alpha[k]) * p - (beta[k] if k > 0 else 0.0) * p_prev
        p_prev, p, norm_prev = p, p_next, norm
    return alpha, beta


@dataclass(frozen=True)
class Grid1D:
    """Panelled quadrature for one coordinate on (-L, L).

    `weights` are plain dx quadrature weights; the |x|^(2 kappa) factor is
    cached separately in `wk` and applied at integration time, so
    weights[i] * wk[i] integrates against |x|^(2 kappa) dx.
    """

    kappa: float
    L: float
    panels: int
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    wk: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)


def build_axis(kappa: float, L: float, panels: int, order: int) -> Grid1D:
    """Uniform panels per side, split at 0; singular inner panel gets the
    x^(2 kappa)-weighted Gauss rule (exposed as effective dx weights)."""
    if kappa < 0.0:
        raise ValueError("kappa must be nonnegative")
    if L <= 0.0 or panels < 1 or order < 1:
        raise ValueError("need L > 0, panels >= 1, order >= 1")
    h = L / panels
    xs = []
    ws = []
    for i in range(panels):
        lo, hi = i * h, (i + 1) * h
        if i == 0 and kappa > 0.0:
            n, w = power_rule(2.0 * kappa, 0.0, hi, order)
            w = w / n ** (2.0 * kappa)
        else:
            t, w0 = legendre_rule(order)
            n = lo + (hi - lo) / 2.0 * (t + 1.0)
            w = (hi - lo) / 2.0 * w0
        xs.append(n)
        ws.append(w)
    pos = np.concatenate(xs)
    wpos = np.concatenate(ws)
    nodes = np.concatenate([-pos[::-1], pos])
    weights = np.concatenate([wpos[::-1], wpos])
    wk = np.abs(nodes) ** (2.0 * kappa) if kappa > 0.0 else np.ones_like(nodes)
    for arr in (nodes, weights, wk):
        arr.flags.writeable = False
    return Grid1D(
        kappa=kappa, L=L, panels=panels, order=order,
        nodes=nodes, weights=weights, wk=wk,
    )


@dataclass(frozen=True)
class TensorGrid:
    """Tensor product of per-coordinate grids, nodes in lexicographic order."""

    axes: tuple[Grid1D, ...]

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(ax) for ax in self.axes)

    @property
    def n_nodes(self) -> int:
        return int(np.prod(self.shape)) if self.axes else 1

    def nodes(self) -> np.ndarray:
        """(n_nodes, d) coordinate matrix, lexicographic in the axis order."""
        if not self.axes:
            return np.zeros((1, 0))
        mesh = np.meshgrid(*(ax.nodes for ax in self.axes), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def weight_values(self) -> np.ndarray:
        """Cached w_k values per node (no quadrature weights)."""
        return self._outer(tuple(ax.wk for ax in self.axes))

    def quad_weights(self) -> np.ndarray:
        """Plain dx quadrature weight per node."""
        return self._outer(tuple(ax.weights for ax in self.axes))

    def total_weights(self) -> np.ndarray:
        """quadrature weight times cached w_k, per node."""
        return self._outer(
            tuple(ax.weights * ax.wk for ax in self.axes)
        )

    @staticmethod
    def _outer(factors) -> np.ndarray:
        out = np.ones(1)
        for f in factors:
            out = np.multiply.outer(out, f)
        return out.ravel()


def build_grid(ms, L, panels: int = 4, order: int = 12) -> TensorGrid:
    """TensorGrid for a multiplicity vector (or anything with a .kappa).

    L may be a scalar (broadcast) or one half-width per coordinate.
    """
    kappas = tuple(getattr(ms, "kappa", ms))
    d = len(kappas)
    Ls = np.broadcast_to(np.asarray(L, dtype=float), (d,))
    axes = tuple(
        build_axis(kappas[j], float(Ls[j]), panels, order) for j in range(d)
    )
    grid = TensorGrid(axes=axes)
    if grid.n_nodes > NODE_CAP:
        raise NodeCountExceeded(f"{grid.n_nodes} nodes exceeds cap {NODE_CAP}")
    return grid


def integrate(values, grid: TensorGrid):
    """sum values * (quadrature weight * cached w_k) in fixed node order.

    `values` is an array whose first axis runs over grid nodes (extra axes,
    e.g. blade coefficients, ride along), or a sequence of MultiVector.
    """
    from .clifford_core import MultiVector

    w = grid.total_weights()
    if isinstance(values, (list, tuple)) and len(values) > 0 and isinstance(values[0], MultiVector):
        sig = values[0].sig
        stack = np.stack([v.coeff for v in values])
        if stack.shape[0] != grid.n_nodes:
            raise ValueError(f"expected {grid.n_nodes} values, got {stack.shape[0]}")
        return MultiVector(sig, np.einsum("n,nk->k", w, stack))
    arr = np.asarray(values, dtype=float)
    if arr.shape[0] != grid.n_nodes:
        raise ValueError(f"expected {grid.n_nodes} values, got {arr.shape[0]}")
    return np.einsum("n,n...->...", w, arr)


def parse_grid_spec(text: str):
    """Parse "-L:L:panels:order" (one per coordinate, ";"-separated).

    Returns a list of (L, panels, order) triples; a single spec broadcasts.
    """
    specs = []
    for part in text.split(";"):
        pieces = part.strip().split(":")
        if len(pieces) != 4:
            raise ValueError(f"grid spec {part!r} is not -L:L:panels:order")
        lo, hi = float(pieces[0]), float(pieces[1])
        if not (lo == -hi and hi > 0.0):
            raise ValueError(f"grid spec {part!r} must be symmetric about 0")
        panels, order = int(pieces[2]), int(pieces[3])
        specs.append((hi, panels, order))
    return specs
