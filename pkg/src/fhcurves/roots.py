"""Polynomial roots with multiplicities.

Multiplicities come from an exact squarefree decomposition; each squarefree
factor is then solved numerically by Aberth iteration and polished with
Newton steps.  Every root carries a residual certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact import Poly, squarefree_decomposition

RESIDUAL_TOL = 1e-10


class RootFindingError(RuntimeError):
    pass


@dataclass(frozen=True)
class Root:
    value: complex
    multiplicity: int
    residual: float  # |p(z)| / sum |c_i| |z|^i for the squarefree factor


def _horner(coeffs: np.ndarray, z):
    """Value and derivative, coefficients constant term first."""
    p = np.zeros_like(z, dtype=complex)
    dp = np.zeros_like(z, dtype=complex)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def relative_residual(coeffs: np.ndarray, z: complex) -> float:
    p, _ = _horner(coeffs, np.asarray(z, dtype=complex))
    scale = np.sum(np.abs(coeffs) * np.abs(z) ** np.arange(len(coeffs)))
    return float(abs(p) / scale) if scale > 0 else 0.0


def aberth(coeffs: np.ndarray, max_iter: int = 500, tol: float = 1e-15) -> np.ndarray:
    """All roots of a squarefree polynomial given by complex coefficients."""
    coeffs = np.asarray(coeffs, dtype=complex)
    d = len(coeffs) - 1
    if d < 1:
        return np.empty(0, dtype=complex)
    if d == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    lead = coeffs[-1]
    # Cauchy-type radius, offset angle to avoid symmetric stalls
    radius = 1 + np.max(np.abs(coeffs[:-1] / lead))
    geo = np.abs(coeffs[0] / lead) ** (1.0 / d) if coeffs[0] != 0 else radius / 2
    r0 = min(radius, max(geo, 1e-3))
    z = r0 * np.exp(1j * (2 * np.pi * np.arange(d) / d + 0.4))
    for _ in range(max_iter):
        p, dp = _horner(coeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = ratio / (1 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= tol * np.maximum(1, np.abs(z))):
            break
    return z


def _polish(coeffs: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    for _ in range(steps):
        p, dp = _horner(coeffs, z)
        ok = dp != 0
        z = np.where(ok, z - np.where(ok, p / np.where(ok, dp, 1), 0), z)
    return z


def poly_roots(p: Poly, tol: float = RESIDUAL_TOL) -> list[Root]:
    """Roots of ``p`` with multiplicities, sorted by (modulus, argument)."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    out: list[Root] = []
    for factor, mult in squarefree_decomposition(p):
        c = factor.to_complex()
        zs = _polish(c, aberth(c))
        for z in zs:
            res = relative_residual(c, z)
            if res > tol:
                raise RootFindingError(f"root {z} of {factor} has residual {res:.3g}")
            out.append(Root(complex(z), mult, res))
    out.sort(key=lambda r: (abs(r.value), np.angle(r.value)))
    return out
