"""Physical and dimensionless parameter sets for the controlled turning model.

All quantities are SI.  The dimensionless groups (xi, delta, h1, h2, ...)
drive every stability computation; `reduce` maps a physical machine/tool
description onto them, assuming the spindle gain is tuned so that the
stationary delay equals 2*pi/Omega0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import DomainError

TWO_PI = 2.0 * math.pi

#: relative tolerance for the symmetric-tool requirement c_x=c_y, k_x=k_y
SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    """Raw machine/tool/cutting constants of the governing equations."""

    m: float           # tool mass [kg]
    c_x: float         # damping, x direction [N s/m]
    c_y: float         # damping, y direction [N s/m]
    k_x: float         # stiffness, x direction [N/m]
    k_y: float         # stiffness, y direction [N/m]
    K_x: float         # cutting coefficient, x direction
    K_y: float         # cutting coefficient, y direction
    omega_cut: float   # depth of cut [m]
    q: float = 0.75    # force exponent (empirical default)
    nu: float = 0.01   # feed speed [m/s]
    R: float = 0.05    # workpiece radius [m]
    Omega0: float = 100.0  # virtual constant spindle speed [rad/s]

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{f.name} must be a finite positive number, got {v!r}")

    @property
    def is_symmetric(self) -> bool:
        return (
            math.isclose(self.c_x, self.c_y, rel_tol=SYMMETRY_RTOL)
            and math.isclose(self.k_x, self.k_y, rel_tol=SYMMETRY_RTOL)
        )

    def require_symmetric(self) -> None:
        """The scalar characteristic equation assumes a symmetric tool."""
        if not self.is_symmetric:
            raise DomainError(
                "characteristic-equation analysis requires c_x = c_y and "
                f"k_x = k_y (rel. tol {SYMMETRY_RTOL}); got "
                f"c=({self.c_x}, {self.c_y}), k=({self.k_x}, {self.k_y})"
            )


@dataclass(frozen=True)
class DimensionlessParams:
    """Reduced parameter groups driving the stability analysis."""

    xi: float       # damping group c_x*k_star/m
    delta: float    # stiffness group k_x*k_star^2/m
    h1: float       # delayed-control gain K1*p^(q-1)*(1 - p/k_r)
    h2: float       # instantaneous-control gain K1*p^(q-1)
    k_star: float   # stationary delay [s]
    K1: float       # dimensionless depth of cut
    k_r: float      # cutting force ratio K_y/K_x
    p: float        # dimensionless feed per revolution
    c_gain: float   # spindle gain
    q: float        # force exponent, carried through

    def __post_init__(self):
        for name in ("xi", "delta", "K1", "k_r", "p", "k_star", "c_gain", "q", "h2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if not math.isfinite(self.h1):
            raise DomainError(f"h1 must be finite, got {self.h1!r}")


@dataclass(frozen=True)
class StationaryState:
    """Stationary point of the transformed systems (both control variants)."""

    r_star: float    # stationary x deflection [m], > 0
    rho_star: float  # stationary y deflection [m], < 0
    k_star: float    # stationary delay [s]
    j_star: float = 0.0
    l_star: float = 0.0

    def __post_init__(self):
        if not self.r_star > 0:
            raise DomainError(f"r_star must be positive, got {self.r_star!r}")
        if not self.rho_star < 0:
            raise DomainError(f"rho_star must be negative, got {self.rho_star!r}")
        if not self.k_star > 0:
            raise DomainError(f"k_star must be positive, got {self.k_star!r}")


def spindle_gain(phys: PhysicalParams) -> float:
    """Gain c making the stationary delay equal 2*pi/Omega0."""
    return (
        phys.R * phys.Omega0 ** (phys.q + 1.0) * phys.k_x
        / ((TWO_PI * phys.nu) ** phys.q * phys.K_x * phys.omega_cut)
    )


def stationary_delay(phys: PhysicalParams, c: float) -> float:
    """k* = (2*pi*R*k_x / (c*K_x*omega*nu^q))^(1/(q+1)) for gain c."""
    if not c > 0:
        raise DomainError(f"spindle gain must be positive, got {c!r}")
    base = TWO_PI * phys.R * phys.k_x / (c * phys.K_x * phys.omega_cut * phys.nu ** phys.q)
    return base ** (1.0 / (phys.q + 1.0))


def stationary_state(phys: PhysicalParams, c: float) -> StationaryState:
    """Unique stationary point of the transformed system; variant-independent."""
    k_star = stationary_delay(phys, c)
    amp = (phys.nu * k_star) ** phys.q
    return StationaryState(
        r_star=phys.K_x * phys.omega_cut * amp / phys.k_x,
        rho_star=-phys.K_y * phys.omega_cut * amp / phys.k_y,
        k_star=k_star,
    )


def reduce(phys: PhysicalParams) -> DimensionlessParams:
    """Reduce a physical parameter set to the dimensionless groups.

    The gain is taken from `spindle_gain`, so k_star = 2*pi/Omega0 and the
    parameter-simplification identities hold exactly.
    """
    c = spindle_gain(phys)
    k_star = stationary_delay(phys, c)
    k_r = phys.K_y / phys.K_x
    K1 = phys.q * phys.K_y * phys.omega_cut * (TWO_PI * phys.R) ** (phys.q - 1.0) / phys.k_x
    p = phys.nu / (phys.R * phys.Omega0)
    h2 = K1 * p ** (phys.q - 1.0)
    return DimensionlessParams(
        xi=phys.c_x * k_star / phys.m,
        delta=phys.k_x * k_star ** 2 / phys.m,
        h1=h2 * (1.0 - p / k_r),
        h2=h2,
        k_star=k_star,
        K1=K1,
        k_r=k_r,
        p=p,
        c_gain=c,
        q=phys.q,
    )


def phys_from_dimensionless(
    xi: float,
    delta: float,
    h: float,
    q: float,
    variant: str = "instant",
) -> PhysicalParams:
    """Synthesize a physical parameter set realizing given (xi, delta, h, q).

    `h` is h1 for the delayed variant (any sign), h2 for the instantaneous
    one (must be positive).  The construction fixes m = R = omega_cut = 1,
    Omega0 = 2*pi and p = 1, so k_star = 1, then chooses the cutting
    coefficients to hit the requested gain.  Used by simulation oracles
    that operate directly on the dimensionless groups.
    """
    if variant not in ("delayed", "instant"):
        raise DomainError(f"unknown variant {variant!r}")
    if not (xi > 0 and delta > 0 and q > 0):
        raise DomainError("xi, delta, q must be positive")
    if variant == "instant":
        if not h > 0:
            raise DomainError("h2 must be positive for the instantaneous variant")
        K1 = h  # p = 1, so h2 = K1
        k_r = 2.0
    else:
        # h1 = K1*(1 - 1/k_r) with p = 1; pick K1 > max(h, 0) and solve for k_r
        K1 = abs(h) + 1.0
        k_r = 1.0 / (1.0 - h / K1)
    # with m=1, Omega0=2*pi, R=1: p = nu/(R*Omega0) = 1 -> nu = 2*pi, k_star = 1
    m, R, omega_cut, Omega0 = 1.0, 1.0, 1.0, TWO_PI
    nu = TWO_PI
    c_x = xi * m  # xi = c_x*k_star/m, k_star = 1
    k_x = delta * m
    K_y = K1 * k_x * TWO_PI ** (1.0 - q) / q / omega_cut  # inverts the K1 definition
    K_x = K_y / k_r
    return PhysicalParams(
        m=m, c_x=c_x, c_y=c_x, k_x=k_x, k_y=k_x,
        K_x=K_x, K_y=K_y, omega_cut=omega_cut,
        q=q, nu=nu, R=R, Omega0=Omega0,
    )


_PARAM_KEYS = [f.name for f in fields(PhysicalParams)]


def load_params(path: str | Path) -> PhysicalParams:
    """Parse a flat key=value parameter file (one key per line, # comments)."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _PARAM_KEYS:
            raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise DomainError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = float(val.strip())
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: bad number {val.strip()!r}") from exc
    missing = [k for k in _PARAM_KEYS[:8] if k not in values]  # defaults exist for the rest
    if missing:
        raise DomainError(f"{path}: missing required keys {missing}")
    return PhysicalParams(**values)


def dump_params(phys: PhysicalParams) -> str:
    """Serialize to the key=value file format."""
    return "".join(f"{f.name}={getattr(phys, f.name)!r}\n" for f in fields(phys))
