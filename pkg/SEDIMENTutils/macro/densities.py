"""Analytic initial densities for the transport-Stokes problem."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from scipy import integrate

from ..exceptions import ValidationError
from ..utils import as_vec3, ensure_nonnegative, ensure_positive

DensityKind = Literal["uniform_ball", "mollified_ball", "gaussian"]
# gaussian densities are treated as supported within this many standard deviations
GAUSSIAN_CUTOFF = 6.0


def smooth_step(t):
    """C-infinity transition: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return a / (a + b)


@dataclass(frozen=True)
class AnalyticDensity:
    """Radially symmetric density rho_0.

    ``radius`` is the ball radius (uniform/mollified) or the standard
    deviation (gaussian); ``width`` is the half-width of the mollified edge.
    """

    kind: DensityKind
    radius: float = 1.0
    amplitude: float = 1.0
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    width: float | None = None

    def __post_init__(self):
        if self.kind not in ("uniform_ball", "mollified_ball", "gaussian"):
            raise ValidationError(f"Unknown density kind '{self.kind}'")
        ensure_positive("radius", self.radius)
        ensure_nonnegative("amplitude", self.amplitude)
        object.__setattr__(self, "center", as_vec3("center", self.center))
        if self.kind == "mollified_ball":
            width = 0.2 * self.radius if self.width is None else self.width
            ensure_positive("width", width)
            if width >= self.radius:
                raise ValidationError("mollified_ball width must be smaller than its radius")
            object.__setattr__(self, "width", float(width))

    # ------------------------------------------------------------------
    @property
    def smooth(self) -> bool:
        """Whether rho_0 and its gradient decay in every X_beta (uniform ball does not)."""
        return self.kind != "uniform_ball"

    @property
    def support_radius(self) -> float:
        if self.kind == "uniform_ball":
            return self.radius
        if self.kind == "mollified_ball":
            return self.radius + self.width
        return GAUSSIAN_CUTOFF * self.radius

    def profile(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.kind == "uniform_ball":
            return np.where(r <= self.radius, self.amplitude, 0.0)
        if self.kind == "mollified_ball":
            t = (self.radius + self.width - r) / (2.0 * self.width)
            return self.amplitude * smooth_step(t)
        return self.amplitude * np.exp(-0.5 * (r / self.radius) ** 2)

    def __call__(self, x) -> np.ndarray:
        y = np.asarray(x, dtype=float) - self.center
        return self.profile(np.sqrt(np.einsum("...i,...i->...", y, y)))

    def mass(self) -> float:
        """Total mass, closed form where available."""
        if self.kind == "uniform_ball":
            return self.amplitude * 4.0 * np.pi / 3.0 * self.radius**3
        if self.kind == "gaussian":
            return self.amplitude * (2.0 * np.pi * self.radius**2) ** 1.5
        inner = self.radius - self.width
        core = self.amplitude * 4.0 * np.pi / 3.0 * inner**3
        shell, _ = integrate.quad(
            lambda r: 4.0 * np.pi * r * r * float(self.profile(r)),
            inner,
            self.support_radius,
            epsabs=1e-13,
            epsrel=1e-12,
        )
        return core + shell

    def normalized(self, mass: float) -> "AnalyticDensity":
        """Same shape rescaled to the given total mass."""
        current = self.mass()
        if current <= 0:
            raise ValidationError("cannot normalise a density with zero mass")
        return replace(self, amplitude=self.amplitude * mass / current)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "radius": self.radius,
            "amplitude": self.amplitude,
            "center": self.center.tolist(),
            "width": self.width,
        }
