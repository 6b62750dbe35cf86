"""Root-of-unity scalar system shared by every other module.

A ``PhaseRing`` fixes, for a qudit degree ``d``:

* ``q``     -- the primitive d-th root of unity exp(2*pi*i/d),
* ``zeta``  -- a square root of q satisfying zeta**(d*d) == 1,
* ``eps``   -- exp(i*pi/d), a primitive 2d-th root of unity,
* ``omega`` -- the normalized quadratic sum d**-0.5 * sum_j zeta**(j*j),
  which has modulus one,
* ``omega_sqrt`` -- a fixed square root of omega (principal branch).

Phase exponents are reduced exactly modulo the base's order before any
floating-point evaluation, so long products of phases do not drift.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class PhaseRing:
    """Immutable bundle of the scalar constants for one qudit degree."""

    d: int
    q: complex
    zeta: complex
    eps: complex
    omega: complex
    omega_sqrt: complex
    # zeta as a power of eps: eps**zeta_exp == zeta exactly.
    zeta_exp: int

    def q_pow(self, e: int) -> complex:
        """q**e with the exponent reduced mod d."""
        return self.eps_pow(2 * e)

    def zeta_pow(self, e: int) -> complex:
        """zeta**e with the exponent reduced mod 2d."""
        return self.eps_pow(self.zeta_exp * e)

    def eps_pow(self, e: int) -> complex:
        """eps**e with the exponent reduced mod 2d."""
        e = e % (2 * self.d)
        return cmath.exp(1j * cmath.pi * e / self.d)

    def omega_pow(self, e: int) -> complex:
        """omega**e via exact angle multiplication (|omega| == 1)."""
        return cmath.exp(1j * e * cmath.phase(self.omega))


def make_phase_ring(d: int) -> PhaseRing:
    """Build the scalar system for qudit degree ``d`` (d >= 2).

    The square root of q is pinned to zeta = exp(i*pi/d) for even d and
    zeta = q**((d+1)/2) for odd d; both choices satisfy zeta**2 == q and
    zeta**(d*d) == 1, and recording the choice keeps every downstream
    phase deterministic.
    """
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"qudit degree must be an integer >= 2, got {d!r}")
    zeta_exp = 1 if d % 2 == 0 else d + 1
    eps = cmath.exp(1j * cmath.pi / d)
    q = eps**2
    zeta = cmath.exp(1j * cmath.pi * (zeta_exp % (2 * d)) / d)
    omega = sum(
        cmath.exp(1j * cmath.pi * ((zeta_exp * j * j) % (2 * d)) / d) for j in range(d)
    ) / (d**0.5)
    # Principal square root: half the principal argument, taken in (-pi, pi].
    omega_sqrt = cmath.exp(1j * cmath.phase(omega) / 2) * abs(omega) ** 0.5
    return PhaseRing(
        d=d, q=q, zeta=zeta, eps=eps, omega=omega, omega_sqrt=omega_sqrt, zeta_exp=zeta_exp
    )


def phase_pow(ring: PhaseRing, base: str, e: int) -> complex:
    """Integer power of one of the named phases ``q``, ``zeta``, ``eps``, ``omega``.

    Exponents of q are reduced mod d, of zeta and eps mod 2d, before
    evaluation; omega powers use exact angle multiplication.
    """
    if base == "q":
        return ring.q_pow(e)
    if base == "zeta":
        return ring.zeta_pow(e)
    if base == "eps":
        return ring.eps_pow(e)
    if base == "omega":
        return ring.omega_pow(e)
    raise ValueError(f"unknown phase base {base!r}")


def gauss_identity_residual(ring: PhaseRing, ell: int) -> float:
    """Residual of d**-0.5 * sum_k q**(k*ell) zeta**(k*k) == omega * zeta**(-ell*ell).

    Returns |LHS - RHS|; callers assert it is below tolerance.
    """
    if not 0 <= ell < ring.d:
        raise ValueError(f"ell must lie in 0..d-1, got {ell}")
    lhs = sum(ring.q_pow(k * ell) * ring.zeta_pow(k * k) for k in range(ring.d)) / (
        ring.d**0.5
    )
    rhs = ring.omega * ring.zeta_pow(-ell * ell)
    return abs(lhs - rhs)
