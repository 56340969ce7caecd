"""Fourier-side description of the spatial generator.

The operator acting on the field is lambda * Laplacian + mu * (J * I - I),
where J is a radial probability density.  Its Fourier symbol is

    a(xi) = lambda |xi|^2 + mu (1 - j_hat(xi)) >= 0,

with the convention  j_hat(xi) = integral e^{-i x.xi} J(x) dx,  so that
j_hat(0) = 1.  The time kernel of the solution formula is

    Lambda(t, xi) = t^(alpha-1) E_{alpha,alpha}(-t^alpha a(xi)),

and the deterministic part of the Fourier-transformed field started from a
Dirac mass is  E_alpha(-a(xi) t^alpha).

All evaluators are vectorized over frequency: ``xi`` may be a scalar or an
ndarray of radial frequencies |xi| (every kernel in the menu is radial, so
only the magnitude matters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special_fn import DEFAULT_POLICY, EvalPolicy, MLOrder, ml_eval

__all__ = [
    "KernelSpec",
    "DiffusionParams",
    "j_hat",
    "symbol_a",
    "lambda_kernel",
    "mean_hat",
    "kernel_to_json",
    "kernel_from_json",
]


@dataclass(frozen=True)
class KernelSpec:
    """Jump kernel J with a closed-form Fourier transform.

    kind="gaussian": radial Gaussian density with standard deviation `scale`
    per coordinate, any dimension; j_hat = exp(-scale^2 |xi|^2 / 2).
    kind="uniform": uniform density on [-scale, scale], one dimension only;
    j_hat = sin(scale xi)/(scale xi).
    """

    kind: str = "gaussian"
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "uniform"):
            raise DomainError(f"unknown kernel kind {self.kind!r}")
        if not self.scale > 0:
            raise DomainError("kernel scale must be positive")


@dataclass(frozen=True)
class DiffusionParams:
    """Model coefficients and spatial dimension."""

    alpha: float
    lam: float = 1.0
    mu: float = 0.0
    sigma: float = 1.0
    dim: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise DomainError("alpha must lie in (0, 2)")
        if self.lam < 0 or self.mu < 0:
            raise DomainError("lambda and mu must be nonnegative")
        if self.dim < 1 or self.dim != int(self.dim):
            raise DomainError("dim must be a positive integer")


def j_hat(kernel: KernelSpec, xi):
    """Fourier transform of the jump density at radial frequency |xi|.

    Vectorized; values lie in [-1, 1] with j_hat(0) = 1.  The uniform
    kernel is one-dimensional by construction.
    """
    r = np.abs(np.asarray(xi, dtype=float))
    if kernel.kind == "gaussian":
        out = np.exp(-0.5 * (kernel.scale * r) ** 2)
    else:
        out = np.sinc(kernel.scale * r / math.pi)
    if np.ndim(xi) == 0:
        return float(out)
    return out


def symbol_a(params: DiffusionParams, kernel: KernelSpec, xi):
    """Symbol a(xi) = lambda |xi|^2 + mu (1 - j_hat(xi)), vectorized."""
    if kernel.kind == "uniform" and params.dim != 1:
        raise DomainError("uniform kernel is defined for dim=1 only")
    r = np.abs(np.asarray(xi, dtype=float))
    out = params.lam * r * r + params.mu * (1.0 - j_hat(kernel, r))
    # guard against -0.0 / tiny negative round-off in the nonlocal part
    out = np.maximum(out, 0.0)
    if np.ndim(xi) == 0:
        return float(out)
    return out


def lambda_kernel(
    params: DiffusionParams,
    kernel: KernelSpec,
    t: float,
    xi,
    policy: EvalPolicy = DEFAULT_POLICY,
):
    """Time kernel Lambda(t, xi) = t^(alpha-1) E_{alpha,alpha}(-t^alpha a(xi))."""
    if not t > 0:
        raise DomainError("lambda_kernel requires t > 0")
    a = symbol_a(params, kernel, xi)
    order = MLOrder(params.alpha, params.alpha)
    return t ** (params.alpha - 1.0) * ml_eval(order, -(t**params.alpha) * a, policy)


def mean_hat(
    params: DiffusionParams,
    kernel: KernelSpec,
    t: float,
    xi,
    policy: EvalPolicy = DEFAULT_POLICY,
):
    """Fourier transform of the mean field from a Dirac datum: E_alpha(-a(xi) t^alpha)."""
    if t < 0:
        raise DomainError("mean_hat requires t >= 0")
    if t == 0:
        out = np.ones_like(np.asarray(xi, dtype=float))
        return float(out) if np.ndim(xi) == 0 else out
    a = symbol_a(params, kernel, xi)
    return ml_eval(MLOrder(params.alpha, 1.0), -(t**params.alpha) * a, policy)


def kernel_to_json(kernel: KernelSpec) -> dict:
    """Serialize to the run-config schema."""
    key = "scale" if kernel.kind == "gaussian" else "half_width"
    return {"type": kernel.kind, key: kernel.scale}


def kernel_from_json(obj: dict) -> KernelSpec:
    """Parse the run-config kernel object; unknown keys are rejected."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise DomainError("kernel config must be an object with a 'type' field")
    kind = obj["type"]
    if kind == "gaussian":
        allowed = {"type", "scale"}
        scale = obj.get("scale", 1.0)
    elif kind == "uniform":
        allowed = {"type", "half_width"}
        scale = obj.get("half_width", 1.0)
    else:
        raise DomainError(f"unknown kernel type {kind!r}")
    extra = set(obj) - allowed
    if extra:
        raise DomainError(f"unknown kernel config keys: {sorted(extra)}")
    return KernelSpec(kind=kind, scale=float(scale))
