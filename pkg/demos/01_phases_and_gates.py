"""Phases and single-qudit gates: the scalar system everything runs on.

Run:  python demos/01_phases_and_gates.py
"""

import numpy as np

from pappa import fourier_gate, gaussian_gate, make_phase_ring, pauli_gate
from pappa.phases import gauss_identity_residual

print("=" * 64)
print("The scalar system: q, zeta, omega")
print("=" * 64)

for d in (2, 3, 4, 5):
    ring = make_phase_ring(d)
    print(f"\nd={d}:")
    print(f"  q     = exp(2 pi i/{d})       = {ring.q:.6f}")
    print(f"  zeta  = sqrt(q), zeta^(d^2)=1 = {ring.zeta:.6f}")
    print(f"  omega = d^-1/2 sum zeta^(j^2) = {ring.omega:.6f}   |omega| = {abs(ring.omega):.12f}")

print("\nThe quadratic sum identity  d^-1/2 sum_k q^(k l) zeta^(k^2) = omega zeta^(-l^2):")
for d in (2, 3, 5, 7):
    worst = max(gauss_identity_residual(make_phase_ring(d), l) for l in range(d))
    print(f"  d={d}: max residual over l = {worst:.2e}")

print()
print("=" * 64)
print("Pauli X, Y, Z and the Fourier / Gaussian pair")
print("=" * 64)

ring = make_phase_ring(3)
x, y, z = (pauli_gate(ring, w) for w in "XYZ")
f, g = fourier_gate(ring), gaussian_gate(ring)

print("\nFor d=3, Z = diag(1, q, q^2):")
print(np.round(z, 4))

print("\nWeyl relations XY = qYX, YZ = qZY, ZX = qXZ, XYZ = zeta:")
print(f"  |XY - qYX|  = {np.abs(x @ y - ring.q * y @ x).max():.2e}")
print(f"  |XYZ - zeta| = {np.abs(x @ y @ z - ring.zeta * np.eye(3)).max():.2e}")

print("\nConjugations F X F^-1 = Z and G X G^-1 = Y^-1:")
print(f"  |FXF^-1 - Z|    = {np.abs(f @ x @ f.conj().T - z).max():.2e}")
print(f"  |GXG^-1 - Y^-1| = {np.abs(g @ x @ g.conj().T - np.linalg.inv(y)).max():.2e}")

print("\nAt d=2 these are the familiar qubit gates:")
r2 = make_phase_ring(2)
print("  F =")
print(np.round(fourier_gate(r2), 4), " (the Hadamard)")
print("  G =")
print(np.round(gaussian_gate(r2), 4), " (the phase gate S)")
