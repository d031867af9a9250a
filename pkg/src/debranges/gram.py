"""Gram systems of point evaluators and the derived-space kernel.

The Gram matrix couples the evaluators attached to a zero sequence,
G[i][j] = (Z_i, Z_j) = kernel_mixed_partial(k_i, k_j, z_j, z_i). Solving
G beta = ((Z_i, Z_z))_i yields the projection coefficients of Z_z onto
the span of the Z_j; the derived-space kernel is the projection residual
rescaled by the rational factors,

    K_z(w) = gamma(w) * conj(gamma(z)) * (Z_z(w) - sum_j beta_j Z_j(w)).

The linear-solve route is the production path. The bordered-determinant
route exists purely as an independent cross-check and is therefore kept
free of any shared intermediate beyond the Gram matrix itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DomainError, LinearDependenceError
from .kernels import StructureFunction
from .sigma import DESINGULARIZATION_TERMS, ZeroSequence

CONDITION_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class GramSystem:
    """Hermitian positive-definite Gram matrix plus solve machinery."""

    space: StructureFunction
    zeros: ZeroSequence
    matrix: np.ndarray
    factorization: Optional[tuple]
    det: float
    condition_estimate: float

    @property
    def n(self) -> int:
        return len(self.zeros)

    def solve(self, rhs) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=complex)
        if self.n == 0:
            return np.zeros(0, dtype=complex)
        return cho_solve(self.factorization, rhs)

    def _constraint_rhs(self, z: complex, b: int = 0) -> np.ndarray:
        pts, ks = self.zeros.points, self.zeros.confluence
        return np.array(
            [self.space.kernel_mixed_partial(ks[i], b, z, pts[i]) for i in range(self.n)],
            dtype=complex,
        )

    def solve_beta(self, z: complex) -> np.ndarray:
        """Projection coefficients beta with sum_j beta_j Z_j[z_i] = Z_z[z_i]."""
        return self.solve(self._constraint_rhs(complex(z)))

    def incomplete_kernel(self, z: complex, w: complex) -> complex:
        """Projection residual Z_z(w) - sum_j beta_j(z) Z_j(w).

        Vanishes on the zero sequence in w (to the run multiplicity) and,
        by symmetry, anti-analytically in z.
        """
        z, w = complex(z), complex(w)
        beta = self.solve_beta(z)
        pts, ks = self.zeros.points, self.zeros.confluence
        val = self.space.kernel(z, w)
        for t in range(self.n):
            val -= beta[t] * self.space.kernel_mixed_partial(0, ks[t], pts[t], w)
        return complex(val)

    def sigma_kernel(self, z: complex, w: complex) -> complex:
        """Derived-space evaluator K_z(w), finite also on the zero sequence.

        When z or w sits inside the de-singularization disk of a run of m
        equal zeros, the vanishing order of the projection residual is
        divided out through its Taylor coefficients (mixed partials of the
        residual), so the removable singularities of the gamma factors are
        crossed with analytic derivatives rather than extrapolation.
        """
        z, w = complex(z), complex(w)
        zs = self.zeros
        space = self.space
        pts, ks = zs.points, zs.confluence

        wg = zs.local_group(w)
        if wg is None:
            w0, mw, jmax, w_excl = w, 0, 0, None
        else:
            w0, mw = wg
            jmax = 0 if w == w0 else DESINGULARIZATION_TERMS
            w_excl = w0
        zg = zs.local_group(z)
        if zg is None:
            z0, mz, qmax, z_excl = z, 0, 0, None
        else:
            z0, mz = zg
            qmax = 0 if z == z0 else DESINGULARIZATION_TERMS
            z_excl = z0

        dz = (z - z0).conjugate()
        dw = w - w0
        total = 0j
        for q in range(qmax + 1):
            b = mz + q
            beta = self.solve(self._constraint_rhs(z0, b))
            zfac = dz**q / math.factorial(b)
            for j in range(jmax + 1):
                a = mw + j
                val = space.kernel_mixed_partial(a, b, z0, w0)
                for t in range(self.n):
                    val -= beta[t] * space.kernel_mixed_partial(a, ks[t], pts[t], w0)
                total += val * zfac * dw**j / math.factorial(a)
        denom = zs.product(w, exclude_value=w_excl) * zs.product(z, exclude_value=z_excl).conjugate()
        return total / denom

    def sigma_kernel_det(self, z: complex, w: complex) -> complex:
        """Bordered-determinant form of K_z(w); cross-validation route.

        Undefined when z or w equals a zero of the sequence (those limits
        are served by :meth:`sigma_kernel`).
        """
        z, w = complex(z), complex(w)
        zs = self.zeros
        pts, ks = zs.points, zs.confluence
        if any(z == p for p in pts) or any(w == p for p in pts):
            raise DomainError(
                "determinant route is undefined on the zero sequence; "
                "sigma_kernel evaluates those limits"
            )
        n = self.n
        m = np.empty((n + 1, n + 1), dtype=complex)
        m[:n, :n] = self.matrix
        for i in range(n):
            m[i, n] = self.space.kernel_mixed_partial(ks[i], 0, z, pts[i])
        for j in range(n):
            m[n, j] = self.space.kernel_mixed_partial(0, ks[j], pts[j], w)
        m[n, n] = self.space.kernel(z, w)
        det = complex(np.linalg.det(m))
        denom = zs.product(w) * zs.product(z).conjugate()
        return det / (self.det * denom)


def build(space: StructureFunction, zeros: ZeroSequence) -> GramSystem:
    """Assemble, symmetrize and factor the Gram matrix of the evaluators.

    Raises LinearDependenceError when the matrix has a non-positive pivot
    or a condition estimate above CONDITION_LIMIT, both of which signal
    numerically dependent evaluators.
    """
    n = len(zeros)
    pts, ks = zeros.points, zeros.confluence
    g = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            g[i, j] = space.kernel_mixed_partial(ks[i], ks[j], pts[j], pts[i])
    # entries come from two different partial routes; symmetry is exact in
    # theory, so average away the rounding asymmetry before factoring
    g = 0.5 * (g + g.conj().T)

    if n == 0:
        return GramSystem(space, zeros, g, None, 1.0, 1.0)

    try:
        factor = cho_factor(g, lower=True)
    except np.linalg.LinAlgError:
        cond = float(np.linalg.cond(g))
        raise LinearDependenceError(
            f"Gram matrix has a non-positive pivot (condition estimate {cond:.3e}); "
            "the evaluators are numerically linearly dependent",
            cond,
        ) from None

    eig = np.linalg.eigvalsh(g)
    if eig[0] <= 0:
        raise LinearDependenceError(
            "Gram matrix is numerically indefinite; the evaluators are "
            "linearly dependent",
            float("inf"),
        )
    cond = float(eig[-1] / eig[0])
    if cond > CONDITION_LIMIT:
        raise LinearDependenceError(
            f"Gram condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.0e}; "
            "the evaluators are numerically linearly dependent",
            cond,
        )
    det = float(np.prod(np.diag(factor[0]).real) ** 2)
    return GramSystem(space, zeros, g, factor, det, cond)
