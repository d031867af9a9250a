"""Shared fixtures and independent numerical oracles for the test suite.

The oracles here deliberately avoid the library's evaluation paths:
kernel values come from Gauss-Legendre quadrature of the defining
integral, derivatives from central finite differences.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from debranges import PaleyWiener, PolynomialHB

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_nodes(n: int = 96) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def pw_kernel_quadrature(x: float, z: complex, w: complex) -> complex:
    """Quadrature of the defining integral of the sinc-type kernel."""
    return pw_moment_quadrature(x, 0, z, w)


def pw_moment_quadrature(x: float, p: int, z: complex, w: complex) -> complex:
    """Quadrature of t**p * exp(1j*(w - conj(z))*t) over [-x, x]."""
    nodes, weights = _gl_nodes()
    t = nodes * x
    u = complex(w) - complex(z).conjugate()
    vals = t**p * np.exp(1j * u * t)
    return complex(np.sum(weights * vals) * x)


# five-point central stencils, truncation O(h^4)
_CENTRAL = {
    0: ((0, 1.0),),
    1: ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12)),
    2: ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12)),
}


def fd_mixed_partial(fn, a: int, b: int, z: complex, w: complex, h: float | None = None) -> complex:
    """Central finite differences in w and in conj(z) of fn(z, w).

    A real step applied to z moves conj(z) by the same real step, so the
    anti-analytic derivative uses plain real displacements of z. The step
    grows with the total order: rounding noise scales like eps / h^(a+b),
    so the tight step only suits low orders.
    """
    if h is None:
        h = 1e-4 if a + b <= 2 else 1e-2
    total = 0j
    for di, ci in _CENTRAL[b]:
        for dj, cj in _CENTRAL[a]:
            total += ci * cj * fn(z + di * h, w + dj * h)
    return total / h ** (a + b)


@pytest.fixture
def pw1() -> PaleyWiener:
    return PaleyWiener(1.0)


@pytest.fixture
def pw2() -> PaleyWiener:
    return PaleyWiener(2.0)


@pytest.fixture
def hb1() -> PolynomialHB:
    return PolynomialHB((-1j,))


@pytest.fixture
def hb3() -> PolynomialHB:
    return PolynomialHB((-1j, 1 - 1j, -1 - 2j))
