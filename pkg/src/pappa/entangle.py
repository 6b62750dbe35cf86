"""Entangled resource states, density matrices, and entanglement entropy.

The maximally entangled family is produced by the string Fourier
transform acting on product states; closed forms:

    |Max>_n     = d**-((n-1)/2) * sum_{|l|=0} |l>
    |Max_k>     = SFT|k> = zeta**(-|k|**2) d**-((n-1)/2)
                  * sum_{|l|=|k|} q**(k1 l1 + (k1+k2) l2 + ... + |k| ln) |l>
    |GHZ>_n     = d**-0.5 * sum_k |k,...,k>
    |GHZ_k>     = (F x...x F)**-1 |Max_k>
                = zeta**(-|k|**2) d**-0.5 * sum_s q**(-s|k|)
                  |k1+s, k1+k2+s, ..., |k|+s>

Entropy is von Neumann entropy in nats with eigenvalues below 1e-12
treated as null-space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import QState, all_digit_tuples, basis_index
from .phases import PhaseRing

_EIG_CUTOFF = 1e-12


def max_state(ring: PhaseRing, n: int) -> QState:
    """Uniform superposition over the zero-total-charge sector."""
    d = ring.d
    v = np.zeros(d**n, dtype=complex)
    amp = float(d) ** (-(n - 1) / 2)
    for ks in all_digit_tuples(d, n):
        if sum(ks) % d == 0:
            v[basis_index(ks, d)] = amp
    return QState(d, n, v)


def ghz_state(ring: PhaseRing, n: int) -> QState:
    d = ring.d
    v = np.zeros(d**n, dtype=complex)
    for k in range(d):
        v[basis_index((k,) * n, d)] = d**-0.5
    return QState(d, n, v)


def max_basis(ring: PhaseRing, ks) -> QState:
    """Closed form of SFT |k1,...,kn> (the generalized Max basis)."""
    ks = tuple(ks)
    d, n = ring.d, len(ks)
    if any(not 0 <= k < d for k in ks):
        raise ValueError("charges must lie in 0..d-1")
    ktot = sum(ks)
    v = np.zeros(d**n, dtype=complex)
    amp = float(d) ** (-(n - 1) / 2)
    prefix = np.cumsum(ks)
    for ls in all_digit_tuples(d, n):
        if (sum(ls) - ktot) % d != 0:
            continue
        expo = int(sum(int(p) * l for p, l in zip(prefix, ls)))
        v[basis_index(ls, d)] = amp * ring.q_pow(expo)
    return QState(d, n, ring.zeta_pow(-ktot * ktot) * v)


def ghz_basis(ring: PhaseRing, ks) -> QState:
    """Closed form of (F x...x F)**-1 SFT |k>, the GHZ basis family."""
    ks = tuple(ks)
    d, n = ring.d, len(ks)
    if any(not 0 <= k < d for k in ks):
        raise ValueError("charges must lie in 0..d-1")
    ktot = sum(ks)
    prefix = np.cumsum(ks)
    v = np.zeros(d**n, dtype=complex)
    for s in range(d):
        digits = tuple((int(p) + s) % d for p in prefix)
        v[basis_index(digits, d)] += d**-0.5 * ring.q_pow(-s * ktot)
    return QState(d, n, ring.zeta_pow(-ktot * ktot) * v)


@dataclass
class DensityMatrix:
    """Positive, trace-one operator on an n-qudit register."""

    d: int
    n: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = self.d**self.n
        if self.matrix.shape != (dim, dim):
            raise ValueError("density matrix has wrong shape")
        if np.abs(self.matrix - self.matrix.conj().T).max() > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(self.matrix) - 1.0) > 1e-10:
            raise ValueError("density matrix trace is not one")
        if np.linalg.eigvalsh(self.matrix).min() < -1e-9:
            raise ValueError("density matrix is not positive semidefinite")

    @classmethod
    def from_state(cls, state: QState) -> "DensityMatrix":
        v = state.vector / np.linalg.norm(state.vector)
        return cls(state.d, state.n, np.outer(v, v.conj()))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix on the (0-based) site set ``keep``."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= rho.n:
        raise ValueError("keep set out of range")
    d, n = rho.d, rho.n
    t = rho.matrix.reshape([d] * (2 * n))
    drop = [i for i in range(n) if i not in keep]
    for count, site in enumerate(drop):
        ax = site - count  # axes shift left as we trace out
        t = np.trace(t, axis1=ax, axis2=ax + (n - count))
    m = t.reshape(d ** len(keep), d ** len(keep))
    return DensityMatrix(d, len(keep), m)


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy -sum(lam ln lam) in nats over the support."""
    lams = np.linalg.eigvalsh(rho.matrix)
    lams = lams[lams > _EIG_CUTOFF]
    return float(-(lams * np.log(lams)).sum())


def entanglement_entropy(state: QState, cut) -> float:
    """Entropy of the reduced state on ``cut`` (a site or site set)."""
    sites = (cut,) if isinstance(cut, int) else tuple(cut)
    return entropy(partial_trace(DensityMatrix.from_state(state), sites))
