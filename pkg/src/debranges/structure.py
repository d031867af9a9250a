"""The derived structure function and its construction routes.

Imposing a zero sequence on a space with structure function E produces a
new space whose structure function is determined by a finite datum: the
incomplete form E(w) - sum_j c_j Z_j(w) must vanish on the sequence with
multiplicity, which pins the coefficients c through one Gram solve (and
d likewise for the reflected companion F = Estar). Three routes exist:

* ``derive``: the direct Gram solve; production path, handles repeated
  zeros through confluent mixed-partial entries.
* ``derive_iterative``: adds distinct zeros one at a time via the
  single-zero update, re-expressed against the original evaluators.
* ``derive_epsilon_oracle``: splits repeated zeros by z_i - k_i*eps,
  derives on each distinct configuration and extrapolates eps -> 0.
  Test-only oracle for the confluent solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidScheduleError, LinearDependenceError
from .gram import GramSystem, build
from .kernels import StructureFunction
from .sigma import DESINGULARIZATION_TERMS, ZeroSequence, canonicalize

_WHICH = ("E", "F")

# Relative floor on the projected kernel diagonal below which adding one
# more zero is declared linearly dependent (mirrors the Gram condition cap).
_DIAGONAL_FLOOR = 1e-12


def extrapolate_to_zero(steps: Sequence[float], values: Sequence[complex]) -> complex:
    """Value at 0 of the polynomial through (steps[i], values[i]).

    Neville's scheme evaluated at 0; with steps in constant ratio this is
    the classic elimination of the leading error powers eps, eps^2, ...
    """
    if len(steps) != len(values):
        raise ValueError("steps and values must have matching lengths")
    if not steps:
        raise ValueError("at least one step is required")
    e = [float(s) for s in steps]
    p = [complex(v) for v in values]
    n = len(p)
    for level in range(1, n):
        for i in range(n - level):
            p[i] = (e[i] * p[i + 1] - e[i + level] * p[i]) / (e[i] - e[i + level])
    return p[0]


@dataclass(frozen=True)
class SigmaStructureFunction:
    """Structure function of the derived space, stored by coefficients.

    The incomplete forms E(w) - sum c_j Z_j(w) and F(w) - sum d_j Z_j(w)
    vanish on the zero sequence with multiplicity; the complete forms are
    those divided by prod (w - z_i).
    """

    base: StructureFunction
    zeros: ZeroSequence
    coeffs_E: tuple[complex, ...]
    coeffs_F: tuple[complex, ...]

    def _coeffs(self, which: str) -> tuple[complex, ...]:
        if which not in _WHICH:
            raise ValueError("which must be 'E' or 'F'")
        return self.coeffs_E if which == "E" else self.coeffs_F

    def incomplete(self, which: str, w: complex, order: int = 0) -> complex:
        """order-th w-derivative of the incomplete form at w."""
        coeffs = self._coeffs(which)
        w = complex(w)
        if which == "E":
            acc = self.base.eval_E(w, order)
        else:
            acc = self.base.eval_E_star(w, order)
        pts, ks = self.zeros.points, self.zeros.confluence
        for j in range(len(self.zeros)):
            acc -= coeffs[j] * self.base.kernel_mixed_partial(order, ks[j], pts[j], w)
        return complex(acc)

    def eval(self, which: str, w: complex) -> complex:
        """Complete form at w; the trivial zeros are crossed by Taylor.

        Inside the de-singularization disk of a run of m equal zeros the
        vanishing order m of the incomplete form is divided out against
        (w - z)^m using its analytic derivatives.
        """
        self._coeffs(which)  # validates `which`
        w = complex(w)
        if len(self.zeros) == 0:
            return self.incomplete(which, w)
        group = self.zeros.local_group(w)
        if group is None:
            return self.incomplete(which, w) / self.zeros.product(w)
        v, m = group
        deflated = self.zeros.product(w, exclude_value=v)
        delta = w - v
        jmax = 0 if delta == 0 else DESINGULARIZATION_TERMS
        total = 0j
        dpow = 1.0 + 0j
        for j in range(jmax + 1):
            total += self.incomplete(which, v, order=m + j) / math.factorial(m + j) * dpow
            dpow *= delta
        return total / deflated


def derive(gs: GramSystem) -> SigmaStructureFunction:
    """Coefficients from one Gram factorization and two right-hand sides."""
    pts, ks = gs.zeros.points, gs.zeros.confluence
    e = np.array([gs.space.eval_E(p, k) for p, k in zip(pts, ks)], dtype=complex)
    f = np.array([gs.space.eval_E_star(p, k) for p, k in zip(pts, ks)], dtype=complex)
    c = gs.solve(e)
    d = gs.solve(f)
    return SigmaStructureFunction(
        gs.space, gs.zeros, tuple(complex(v) for v in c), tuple(complex(v) for v in d)
    )


def derive_iterative(space: StructureFunction, zeros: ZeroSequence) -> SigmaStructureFunction:
    """Distinct zeros added one at a time.

    Each step divides the current derived structure function by the new
    linear factor and removes its value through the current derived-space
    kernel; the update is folded back onto the original evaluators:
    with mu = p(z_new) / k(z_new, z_new), the coefficients become
    c_j -> c_j - mu * beta_j(z_new) and c_new = mu.
    """
    if any(k != 0 for k in zeros.confluence):
        raise DomainError("iterative route requires distinct zeros; derive handles repetitions")
    pts = zeros.points
    c: list[complex] = []
    d: list[complex] = []
    for m, znew in enumerate(pts):
        prefix = canonicalize(pts[:m])
        gs = build(space, prefix)
        p_e = space.eval_E(znew)
        p_f = space.eval_E_star(znew)
        for j in range(m):
            zj = space.kernel(pts[j], znew)
            p_e -= c[j] * zj
            p_f -= d[j] * zj
        diag = gs.incomplete_kernel(znew, znew)
        if abs(diag) < _DIAGONAL_FLOOR * abs(space.kernel(znew, znew)):
            raise LinearDependenceError(
                f"evaluator at {znew} is numerically in the span of the previous ones"
            )
        beta = gs.solve_beta(znew)
        mu_e = p_e / diag
        mu_f = p_f / diag
        c = [cj - mu_e * bj for cj, bj in zip(c, beta)] + [mu_e]
        d = [dj - mu_f * bj for dj, bj in zip(d, beta)] + [mu_f]
    return SigmaStructureFunction(space, zeros, tuple(c), tuple(d))


@dataclass(frozen=True, eq=False)
class EpsilonSplitOracle:
    """Extrapolated evaluators over a family of split-zero configurations.

    Every repeated zero z_i is displaced to z_i - k_i*eps for each eps of
    the schedule, the distinct-zero derivation runs on each configuration,
    and all exposed quantities extrapolate the results to eps = 0 with a
    first-order (one-sided difference) error model.
    """

    space: StructureFunction
    zeros: ZeroSequence
    schedule: tuple[float, ...]
    systems: tuple[GramSystem, ...]
    derived: tuple[SigmaStructureFunction, ...]

    def incomplete(self, which: str, w: complex) -> complex:
        """Extrapolated incomplete form of the derived structure function."""
        return extrapolate_to_zero(
            self.schedule, [ssf.incomplete(which, w) for ssf in self.derived]
        )

    def eval(self, which: str, w: complex) -> complex:
        """Extrapolated complete form; w should stay off the zero sequence."""
        return extrapolate_to_zero(
            self.schedule, [ssf.eval(which, w) for ssf in self.derived]
        )

    def incomplete_kernel(self, z: complex, w: complex) -> complex:
        """Extrapolated projection residual of the split configurations."""
        return extrapolate_to_zero(
            self.schedule, [gs.incomplete_kernel(z, w) for gs in self.systems]
        )

    def sigma_kernel(self, z: complex, w: complex) -> complex:
        """Extrapolated derived kernel; z, w off the confluent sequence."""
        return extrapolate_to_zero(
            self.schedule, [gs.sigma_kernel(z, w) for gs in self.systems]
        )

    def gram_entry(self, i: int, j: int) -> complex:
        """Double one-sided difference of plain kernel values, extrapolated.

        Converges to the confluent Gram entry (Z_i, Z_j); assembled from
        kernel evaluations alone so it is independent of the analytic
        mixed-partial route.
        """
        ki = self.zeros.confluence[i]
        kj = self.zeros.confluence[j]
        zi = self.zeros.points[i]
        zj = self.zeros.points[j]
        vals = []
        for eps in self.schedule:
            acc = 0j
            for ell in range(ki + 1):
                for m in range(kj + 1):
                    acc += (
                        ((-1) ** (ell + m))
                        * math.comb(ki, ell)
                        * math.comb(kj, m)
                        * self.space.kernel(zj - m * eps, zi - ell * eps)
                    )
            vals.append(acc / eps ** (ki + kj))
        return extrapolate_to_zero(self.schedule, vals)


def derive_epsilon_oracle(
    space: StructureFunction,
    zeros: ZeroSequence,
    eps_schedule: Sequence[float],
) -> EpsilonSplitOracle:
    """Split repeated zeros, derive on each configuration, extrapolate.

    For distinct zeros no splitting happens and every configuration equals
    the confluent one. Colliding split points raise InvalidScheduleError.
    """
    schedule = tuple(float(e) for e in eps_schedule)
    if not schedule:
        raise InvalidScheduleError("schedule must contain at least one eps")
    if any(not (math.isfinite(e) and e > 0) for e in schedule):
        raise InvalidScheduleError("every eps must be a positive finite real")
    if len(set(schedule)) != len(schedule):
        raise InvalidScheduleError("eps values must be distinct")

    systems: list[GramSystem] = []
    derived: list[SigmaStructureFunction] = []
    for eps in schedule:
        pts = [z - k * eps for z, k in zip(zeros.points, zeros.confluence)]
        if len(set(pts)) != len(pts):
            raise InvalidScheduleError(
                f"split points collide at eps={eps}; choose a different schedule"
            )
        gs = build(space, canonicalize(pts))
        systems.append(gs)
        derived.append(derive(gs))
    return EpsilonSplitOracle(space, zeros, schedule, tuple(systems), tuple(derived))
