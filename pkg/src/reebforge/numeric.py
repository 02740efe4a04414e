"""Float-side polynomial evaluation for the verifier.

Construction stays rational (:mod:`reebforge.poly`); everything numeric goes
through :class:`NumPoly`, which holds the coefficients and exponent matrix as
numpy arrays and evaluates on point clouds or full grids vectorized.
"""

from __future__ import annotations

import numpy as np

from .poly import Polynomial


class NumPoly:
    """Float view of an exact polynomial, vectorized over numpy arrays."""

    def __init__(self, p: Polynomial):
        self.num_vars = p.num_vars
        items = p.sorted_terms()
        self.coeffs = np.array([float(c) for _, c in items], dtype=np.float64)
        self.exps = np.array([e for e, _ in items], dtype=np.int64).reshape(
            len(items), p.num_vars
        )
        self._grads: list[NumPoly] | None = None
        self._poly = p

    def eval_points(self, pts: np.ndarray) -> np.ndarray:
        """Evaluate at an (N, num_vars) array of points."""
        pts = np.asarray(pts, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[None, :]
        if self.coeffs.size == 0:
            return np.zeros(pts.shape[0])
        # (N, T) powers product across variables
        acc = np.ones((pts.shape[0], self.coeffs.size))
        for v in range(self.num_vars):
            e = self.exps[:, v]
            nz = e > 0
            if nz.any():
                acc[:, nz] *= pts[:, v : v + 1] ** e[nz]
        return acc @ self.coeffs

    def eval_grid(self, axes: list[np.ndarray]) -> np.ndarray:
        """Evaluate on the tensor grid spanned by 1-d coordinate arrays."""
        if len(axes) != self.num_vars:
            raise ValueError("one axis per variable required")
        shape = tuple(len(a) for a in axes)
        out = np.zeros(shape)
        for t in range(self.coeffs.size):
            term = np.full((), self.coeffs[t])
            pieces = []
            for v, ax in enumerate(axes):
                e = int(self.exps[t, v])
                pieces.append(ax**e if e else np.ones_like(ax))
            # outer product via broadcasting
            val = self.coeffs[t]
            grid = np.ones(shape)
            for v, pc in enumerate(pieces):
                sh = [1] * self.num_vars
                sh[v] = len(pc)
                grid = grid * pc.reshape(sh)
            out += val * grid
        return out

    def gradient(self) -> list["NumPoly"]:
        if self._grads is None:
            self._grads = [NumPoly(self._poly.partial(i)) for i in range(self.num_vars)]
        return self._grads

    def grad_points(self, pts: np.ndarray) -> np.ndarray:
        """Gradient rows for an (N, num_vars) array of points."""
        grads = self.gradient()
        return np.stack([g.eval_points(pts) for g in grads], axis=1)


def newton_project(
    F: NumPoly, pts: np.ndarray, tol: float, max_iter: int = 50
) -> tuple[np.ndarray, np.ndarray]:
    """Project points onto {F = 0} along the gradient.

    Returns (refined points, |F| residuals); non-convergent points keep their
    last iterate and a large residual.
    """
    x = np.array(pts, dtype=np.float64)
    for _ in range(max_iter):
        f = F.eval_points(x)
        done = np.abs(f) <= tol
        if done.all():
            break
        g = F.grad_points(x)
        gnorm2 = np.einsum("ij,ij->i", g, g)
        safe = gnorm2 > 1e-30
        step = np.zeros_like(x)
        upd = (~done) & safe
        step[upd] = (f[upd] / gnorm2[upd])[:, None] * g[upd]
        x = x - step
    return x, np.abs(F.eval_points(x))


def grid_axes(box: list[tuple[float, float]], steps: list[float]) -> list[np.ndarray]:
    """Per-axis sample coordinates covering a box at roughly the given steps."""
    axes = []
    for (lo, hi), h in zip(box, steps):
        n = max(2, int(np.ceil((hi - lo) / h)) + 1)
        axes.append(np.linspace(lo, hi, n))
    return axes
