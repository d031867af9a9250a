"""Structure functions and the reproducing kernel of the base space.

A structure function is an entire function E with |E(z)| > |E(conj(z))|
on the upper half-plane, used together with its reflected companion
Estar(w) = conj(E(conj(w))). The associated Hilbert space of entire
functions has reproducing kernel

    Z_z(w) = (conj(E(z))*E(w) - conj(Estar(z))*Estar(w)) / (1j*(conj(z) - w))

analytic in w, anti-analytic in z, and finite across the removable
singularity at w = conj(z).

Two families are implemented:

* ``PaleyWiener(x)``: E(w) = exp(-1j*x*w). The kernel is the sinc form
  2*sin((conj(z)-w)*x)/(conj(z)-w) and every mixed partial reduces to the
  trigonometric moment integral of t**p * exp(1j*(w-conj(z))*t) over
  [-x, x], evaluated in closed form with series protection.
* ``PolynomialHB(roots)``: E(w) = prod(w - r) with every root in the open
  lower half-plane. The space is finite dimensional (polynomials of
  degree < deg E) and all evaluations are exact polynomial arithmetic,
  which makes it a good cross-check of the generic kernel route.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import DomainError, UnsupportedOrderError

DEFAULT_DERIVATIVE_BUDGET = 64

# Below |u| * scale = SINC_PROTECTION_RADIUS the kernel denominator is
# crossed with truncated Taylor series (degree SINC_SERIES_DEGREE for the
# plain sinc) instead of direct division.
SINC_PROTECTION_RADIUS = 1e-3
SINC_SERIES_DEGREE = 8

# The far route differentiates 1/(conj(z) - w), so an order-p partial
# amplifies rounding by p!/|delta|^(p+1); derivatives switch to the series
# form much earlier than the plain kernel does.
PARTIAL_PROTECTION_RADIUS = 5e-2

# Number of series terms used by the divided-difference expansion of the
# generic kernel near the diagonal; the highest E-derivative consumed by a
# mixed partial of orders (a, b) is then a + b + 1 + DIAGONAL_SERIES_TERMS.
DIAGONAL_SERIES_TERMS = SINC_SERIES_DEGREE

_IPOW = (1 + 0j, 1j, -1 + 0j, -1j)  # 1j**n for n mod 4


def _ipow(n: int) -> complex:
    return _IPOW[n % 4]


def _inegpow(n: int) -> complex:
    """(-1j)**n."""
    return _IPOW[(-n) % 4]


class StructureFunction:
    """Shared kernel algebra; families supply raw E / Estar derivatives."""

    max_derivative_order: int

    # ------------------------------------------------------------------
    # family hooks
    # ------------------------------------------------------------------

    def _eval_E_raw(self, w: complex, order: int) -> complex:
        raise NotImplementedError

    def _eval_E_star_raw(self, w: complex, order: int) -> complex:
        raise NotImplementedError

    @property
    def scale(self) -> float:
        """Frequency scale used to normalize distances to the diagonal."""
        raise NotImplementedError

    @property
    def dimension(self) -> Optional[int]:
        """Dimension of the space, None when infinite."""
        return None

    # ------------------------------------------------------------------
    # public operations
    # ------------------------------------------------------------------

    def _check_order(self, order: int) -> None:
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        if order > self.max_derivative_order:
            raise UnsupportedOrderError(
                f"derivative order {order} exceeds the guaranteed budget "
                f"{self.max_derivative_order}"
            )

    def eval_E(self, w: complex, order: int = 0) -> complex:
        """order-th derivative of E at w."""
        self._check_order(order)
        return self._eval_E_raw(complex(w), order)

    def eval_E_star(self, w: complex, order: int = 0) -> complex:
        """order-th derivative of Estar at w, Estar(w) = conj(E(conj(w)))."""
        self._check_order(order)
        return self._eval_E_star_raw(complex(w), order)

    def kernel(self, z: complex, w: complex) -> complex:
        """Reproducing kernel Z_z(w); total, stable across w = conj(z)."""
        return self._mixed(0, 0, complex(z), complex(w))

    def kernel_mixed_partial(self, a: int, b: int, z: complex, w: complex) -> complex:
        """d^a/dw^a d^b/d(conj z)^b of the kernel.

        a differentiates the analytic evaluation point, b the conjugated
        parameter. The generic route draws on E-derivatives up to order
        max(a, b) away from the diagonal, so a + b is capped by the
        family's derivative budget.
        """
        if a < 0 or b < 0:
            raise ValueError("partial orders must be nonnegative")
        if a + b > self.max_derivative_order:
            raise UnsupportedOrderError(
                f"mixed partial of total order {a + b} exceeds the budget "
                f"{self.max_derivative_order}"
            )
        return self._mixed(a, b, complex(z), complex(w))

    def hb_margin(self, z: complex) -> float:
        """|E(z)|^2 - |Estar(z)|^2; strictly positive for Im(z) > 0."""
        z = complex(z)
        if not z.imag > 0:
            raise DomainError("hb_margin requires Im(z) > 0")
        e = self._eval_E_raw(z, 0)
        f = self._eval_E_star_raw(z, 0)
        return (e.real * e.real + e.imag * e.imag) - (f.real * f.real + f.imag * f.imag)

    # ------------------------------------------------------------------
    # generic kernel route
    # ------------------------------------------------------------------

    def _mixed(self, a: int, b: int, z: complex, w: complex) -> complex:
        s = z.conjugate()
        radius = SINC_PROTECTION_RADIUS if a + b == 0 else PARTIAL_PROTECTION_RADIUS
        if abs(s - w) * self.scale < radius:
            return self._mixed_near(a, b, s, w)
        return self._mixed_far(a, b, s, w)

    def _mixed_far(self, a: int, b: int, s: complex, w: complex) -> complex:
        # double Leibniz on N(s, w) / (1j*(s - w)) with
        # N(s, w) = Estar(s)E(w) - E(s)Estar(w)
        delta = s - w
        ew = [self._eval_E_raw(w, j) for j in range(a + 1)]
        fw = [self._eval_E_star_raw(w, j) for j in range(a + 1)]
        es = [self._eval_E_raw(s, k) for k in range(b + 1)]
        fs = [self._eval_E_star_raw(s, k) for k in range(b + 1)]
        total = 0j
        for j in range(a + 1):
            ca = math.comb(a, j)
            for k in range(b + 1):
                njk = fs[k] * ew[j] - es[k] * fw[j]
                order = (a - j) + (b - k)
                gfac = ((-1) ** (b - k)) * math.factorial(order) / delta ** (order + 1)
                total += ca * math.comb(b, k) * njk * gfac
        return total / 1j

    def _mixed_near(self, a: int, b: int, s: complex, w: complex) -> complex:
        # N(s,w)/(s-w) = E(w)*D[Estar](s,w) - Estar(w)*D[E](s,w) with the
        # entire divided difference D[f](s,w) = (f(s)-f(w))/(s-w), whose
        # mixed partials have a fast Taylor expansion in (s - w).
        delta = s - w
        total = 0j
        for j in range(a + 1):
            cj = math.comb(a, j)
            alpha = a - j
            dd_f = self._dd_partial(True, alpha, b, w, delta)
            dd_e = self._dd_partial(False, alpha, b, w, delta)
            total += cj * (self._eval_E_raw(w, j) * dd_f - self._eval_E_star_raw(w, j) * dd_e)
        return total / 1j

    def _dd_partial(self, star: bool, alpha: int, beta: int, w: complex, delta: complex) -> complex:
        # d^alpha/dw^alpha d^beta/ds^beta of (f(s)-f(w))/(s-w) at s = w + delta:
        # sum_m f^(alpha+beta+1+m)(w) * delta^m/m! * (beta+m)! alpha! / (alpha+beta+m+1)!
        raw = self._eval_E_star_raw if star else self._eval_E_raw
        total = 0j
        dpow = 1.0 + 0j
        for m in range(DIAGONAL_SERIES_TERMS + 1):
            order = alpha + beta + 1 + m
            weight = (
                math.factorial(beta + m)
                * math.factorial(alpha)
                / (math.factorial(m) * math.factorial(alpha + beta + m + 1))
            )
            total += raw(w, order) * dpow * weight
            dpow *= delta
        return total


@dataclass(frozen=True)
class PaleyWiener(StructureFunction):
    """E(w) = exp(-1j*x*w) for exponential type x > 0.

    Kernel and all mixed partials use the closed moment form, so they are
    not limited by the derivative budget (the budget still governs the
    explicit eval_E / eval_E_star derivatives).
    """

    x: float
    max_derivative_order: int = DEFAULT_DERIVATIVE_BUDGET

    def __post_init__(self):
        x = float(self.x)
        if not (math.isfinite(x) and x > 0):
            raise ValueError("exponential type x must be a positive finite real")
        object.__setattr__(self, "x", x)

    @property
    def scale(self) -> float:
        return self.x

    def _eval_E_raw(self, w: complex, order: int) -> complex:
        return _inegpow(order) * self.x**order * cmath.exp(-1j * self.x * w)

    def _eval_E_star_raw(self, w: complex, order: int) -> complex:
        return _ipow(order) * self.x**order * cmath.exp(1j * self.x * w)

    def kernel(self, z: complex, w: complex) -> complex:
        u = complex(z).conjugate() - complex(w)
        v = u * self.x
        if abs(v) < SINC_PROTECTION_RADIUS:
            v2 = v * v
            # sin(v)/v truncated at degree 8
            sinc = 1.0 - v2 / 6.0 * (1.0 - v2 / 20.0 * (1.0 - v2 / 42.0 * (1.0 - v2 / 72.0)))
            return 2.0 * self.x * sinc
        return 2.0 * cmath.sin(v) / u

    def kernel_mixed_partial(self, a: int, b: int, z: complex, w: complex) -> complex:
        if a < 0 or b < 0:
            raise ValueError("partial orders must be nonnegative")
        if a == 0 and b == 0:
            return self.kernel(z, w)
        u = complex(w) - complex(z).conjugate()
        return _ipow(a) * _inegpow(b) * self._moment(a + b, u)

    # moment integral of t**p * exp(1j*u*t) over [-x, x]
    def _moment(self, p: int, u: complex) -> complex:
        if abs(u * self.x) <= max(16.0, p + 2.0):
            return self._moment_series(p, u)
        return self._moment_closed(p, u)

    def _moment_series(self, p: int, u: complex) -> complex:
        # sum_k (1j*u)^k/k! * int t^(p+k) dt; odd powers integrate to zero
        x = self.x
        nterms = int(abs(u * x)) + 48
        total = 0j
        term = 1.0 + 0j  # (1j*u)^k / k!
        xpow = x ** (p + 1)
        for k in range(nterms + 1):
            q = p + k
            if q % 2 == 0:
                total += term * (2.0 * xpow / (q + 1))
            xpow *= x
            term *= 1j * u / (k + 1)
        return total

    def _moment_closed(self, p: int, u: complex) -> complex:
        # antiderivative exp(1j*u*t) * sum_j (-1)^j p!/(p-j)! t^(p-j) / (1j*u)^(j+1),
        # stable once |u*x| exceeds p
        iu = 1j * u

        def primitive(t: float) -> complex:
            acc = 0j
            coef = 1.0
            ipow = iu
            for j in range(p + 1):
                acc += ((-1) ** j) * coef * t ** (p - j) / ipow
                coef *= p - j
                ipow *= iu
            return acc

        x = self.x
        return cmath.exp(iu * x) * primitive(x) - cmath.exp(-iu * x) * primitive(-x)


@dataclass(frozen=True)
class PolynomialHB(StructureFunction):
    """E(w) = prod(w - r) with every root in the open lower half-plane."""

    roots: tuple[complex, ...]
    max_derivative_order: int = DEFAULT_DERIVATIVE_BUDGET

    def __post_init__(self):
        rts = tuple(complex(r) for r in self.roots)
        if not rts:
            raise ValueError("at least one root is required")
        if any(not r.imag < 0 for r in rts):
            raise ValueError("all roots must lie in the open lower half-plane")
        object.__setattr__(self, "roots", rts)

    @property
    def scale(self) -> float:
        return 1.0

    @property
    def dimension(self) -> Optional[int]:
        return len(self.roots)

    @cached_property
    def _coeffs(self) -> tuple[complex, ...]:
        # monomial coefficients, ascending, leading coefficient 1
        coeffs = [1.0 + 0j]
        for r in self.roots:
            nxt = [0j] * (len(coeffs) + 1)
            for k, ck in enumerate(coeffs):
                nxt[k] -= r * ck
                nxt[k + 1] += ck
            coeffs = nxt
        return tuple(coeffs)

    @cached_property
    def _deriv_table(self) -> dict:
        return {}

    def _dcoeffs(self, order: int, star: bool) -> tuple[complex, ...]:
        key = (order, star)
        table = self._deriv_table
        if key not in table:
            coeffs = list(
                c.conjugate() for c in self._coeffs) if star else list(self._coeffs)
            for _ in range(order):
                coeffs = [k * coeffs[k] for k in range(1, len(coeffs))]
            table[key] = tuple(coeffs)
        return table[key]

    @staticmethod
    def _horner(coeffs: tuple[complex, ...], w: complex) -> complex:
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * w + c
        return acc

    def _eval_E_raw(self, w: complex, order: int) -> complex:
        return self._horner(self._dcoeffs(order, False), w)

    def _eval_E_star_raw(self, w: complex, order: int) -> complex:
        return self._horner(self._dcoeffs(order, True), w)
