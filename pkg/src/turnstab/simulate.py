"""Time integration of the controlled turning models.

Three integrators share one fixed-step RK4 core with cubic Hermite
interpolation of stored history:

  * `integrate_linear`: the 4-dimensional linearizations about the
    stationary cutting state, for either control variant,
  * `integrate_nonlinear_transformed`: the full nonlinear systems in the
    rotation-angle time scale eta,
  * `integrate_original_instant`: the instantaneous-control model in
    physical time, with the delay defined by a threshold integral.

Every distributed integral is maintained exactly as a difference of a
cumulative auxiliary state advanced by the same RK4 step (for instance
int_{-1}^{0} x1_eta(s) ds = W(eta) - W(eta-1) with dW/deta = x1).  This
keeps the whole scheme fourth order; composite quadrature of the history
window each step would cap it at second order and fail the step-halving
convergence checks.

The step must divide the unit delay exactly, so discrete-delay lookups
and the kinks the delay propagates from eta = 0 always land on grid
nodes.  All delay lookups are done in integer node arithmetic to avoid
floating-point drift over long runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    Diverged,
    DomainError,
    NegativeChipThickness,
    TransformViolated,
)
from .params import PhysicalParams, StationaryState, spindle_gain, stationary_state

TWO_PI = 2.0 * math.pi

#: state-norm ceiling; beyond it the run is abandoned as Diverged
DIVERGENCE_NORM = 1e12


@dataclass(frozen=True)
class LinearizedSystem:
    """Linearization of a transformed turning model about its stationary state.

    The dynamics are

        delayed:  dx/deta = k*(M x + N x(eta-1))
                            - int_{-1}^{0} (a_coef*P x_eta(s) - b_coef*Q x_eta(s-1)) ds
        instant:  dx/deta = k*(M x + N x(eta-1)) + b_coef*int_{-1}^{0} Q x_eta(s) ds

    with a_coef = k*^3 nu/(2 pi R) and b_coef = c k*^3 nu/(2 pi R).  The
    delayed variant reaches back two delay units (through x_eta(s-1)),
    the instantaneous one a single unit.
    """

    variant: str
    k_star: float
    M: tuple            # 4x4, rows as tuples
    N: tuple
    P: tuple
    Q: tuple
    a_coef: float
    b_coef: float

    def __post_init__(self):
        if self.variant not in ("delayed", "instant"):
            raise DomainError(f"unknown variant {self.variant!r}")
        for name in ("M", "N", "P", "Q"):
            mat = getattr(self, name)
            if len(mat) != 4 or any(len(row) != 4 for row in mat):
                raise DomainError(f"{name} must be 4x4")
        # the distributed integrals are reconstructed from auxiliary
        # cumulative states of x1 and x3 only, so P and Q must not couple
        # to the other components
        for name in ("P", "Q"):
            mat = getattr(self, name)
            if any(mat[i][j] != 0.0 for i in range(4) for j in (1, 3)):
                raise DomainError(f"{name} may only have entries in columns 1 and 3")

    @property
    def history_depth(self) -> int:
        return 2 if self.variant == "delayed" else 1


def linearized_system(variant: str, phys: PhysicalParams, c: float | None = None) -> LinearizedSystem:
    """Build the linearization matrices from a physical parameter set."""
    if variant not in ("delayed", "instant"):
        raise DomainError(f"unknown variant {variant!r}")
    if c is None:
        c = spindle_gain(phys)
    stat = stationary_state(phys, c)
    ks = stat.k_star
    m = phys.m
    g_x = phys.q * phys.K_x * phys.omega_cut * (phys.nu * ks) ** (phys.q - 1.0) / m
    g_y = phys.q * phys.K_y * phys.omega_cut * (phys.nu * ks) ** (phys.q - 1.0) / m
    M = (
        (0.0, 0.0, 1.0, 0.0),
        (0.0, 0.0, 0.0, 1.0),
        (-phys.k_x / m, g_x, -phys.c_x / m, 0.0),
        (0.0, -phys.k_y / m - g_y, 0.0, -phys.c_y / m),
    )
    N = (
        (0.0, 0.0, 0.0, 0.0),
        (0.0, 0.0, 0.0, 0.0),
        (0.0, -g_x, 0.0, 0.0),
        (0.0, g_y, 0.0, 0.0),
    )
    P = (
        (0.0, 0.0, 0.0, 0.0),
        (0.0, 0.0, 0.0, 0.0),
        (0.0, 0.0, -g_x, 0.0),
        (0.0, 0.0, g_y, 0.0),
    )
    Q = (
        (0.0, 0.0, 0.0, 0.0),
        (0.0, 0.0, 0.0, 0.0),
        (-g_x, 0.0, 0.0, 0.0),
        (g_y, 0.0, 0.0, 0.0),
    )
    a_coef = ks ** 3 * phys.nu / (TWO_PI * phys.R)
    return LinearizedSystem(variant, ks, M, N, P, Q, a_coef, c * a_coef)


@dataclass(frozen=True)
class Trajectory:
    """A computed run on a uniform grid (eta for transformed runs, t otherwise)."""

    eta_grid: list            # floats
    states: list              # (x1, x2, x3, x4) per grid point
    k_values: list            # delay per grid point
    growth_rate: float
    aux: list | None = None   # time warp: t(eta) for transformed runs, eta(t) for t-domain runs

    def __post_init__(self):
        if len(self.states) != len(self.eta_grid) or len(self.k_values) != len(self.eta_grid):
            raise DomainError("grid, states and k_values must have equal length")
        if self.aux is not None and len(self.aux) != len(self.eta_grid):
            raise DomainError("aux must match the grid length")


def constant_history(values):
    """History function pinned at a constant state tuple."""
    vals = tuple(float(v) for v in values)
    return lambda eta: vals


def _steps_per_unit(step: float) -> int:
    if not 0.0 < step <= 1.0:
        raise DomainError(f"step must lie in (0, 1], got {step!r}")
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-12:
        raise DomainError(f"step {step!r} does not divide the unit delay")
    return n


def _interp(states, derivs, i: int, frac: float, h: float, kink_idx: int = -1, kink_left=None):
    """Cubic Hermite value between stored nodes i and i+1.

    The first run node is a kink: the solution's derivative jumps from the
    history's one-sided derivative to the right-hand side there.  `derivs`
    holds the right-sided value; `kink_left` supplies the left-sided one
    for interpolating the cell that ends at the kink.
    """
    if frac <= 0.0:
        return states[i]
    if frac >= 1.0:
        return states[i + 1]
    y0, y1, d0, d1 = states[i], states[i + 1], derivs[i], derivs[i + 1]
    if i + 1 == kink_idx:
        d1 = kink_left
    t2 = frac * frac
    t3 = t2 * frac
    a = 2.0 * t3 - 3.0 * t2 + 1.0
    b = (t3 - 2.0 * t2 + frac) * h
    cc = -2.0 * t3 + 3.0 * t2
    d = (t3 - t2) * h
    return tuple(
        a * v0 + b * s0 + cc * v1 + d * s1 for v0, s0, v1, s1 in zip(y0, d0, y1, d1)
    )


def _history_derivative(fn, eta: float, left_edge: float, right_edge: float, dim: int, d: float):
    """Second-order numerical derivative of a history function."""
    if eta - d >= left_edge and eta + d <= right_edge:
        lo, hi = fn(eta - d), fn(eta + d)
        return tuple((b - a) / (2.0 * d) for a, b in zip(lo, hi))
    if eta + d > right_edge:
        f0, f1, f2 = fn(eta), fn(eta - d), fn(eta - 2.0 * d)
        return tuple((3.0 * a - 4.0 * b + c) / (2.0 * d) for a, b, c in zip(f0, f1, f2))
    f0, f1, f2 = fn(eta), fn(eta + d), fn(eta + 2.0 * d)
    return tuple((-3.0 * a + 4.0 * b - c) / (2.0 * d) for a, b, c in zip(f0, f1, f2))


def _cumulative(samples_nodes, samples_mid, h: float):
    """Running integral at the nodes (Simpson per cell), anchored at 0 on the last node."""
    acc = [0.0]
    for j in range(len(samples_nodes) - 1):
        cell = h / 6.0 * (samples_nodes[j] + 4.0 * samples_mid[j] + samples_nodes[j + 1])
        acc.append(acc[-1] + cell)
    shift = acc[-1]
    return [v - shift for v in acc]


def _norm(vec) -> float:
    return math.sqrt(sum(v * v for v in vec))


def _fit_growth(times, norms) -> float:
    """Least-squares slope of log(norm) over the final third of the run."""
    start = (2 * len(times)) // 3
    pts = [(t, math.log(v)) for t, v in zip(times[start:], norms[start:]) if v > 0.0]
    if len(pts) < 2:
        return 0.0
    tbar = sum(t for t, _ in pts) / len(pts)
    ybar = sum(y for _, y in pts) / len(pts)
    num = sum((t - tbar) * (y - ybar) for t, y in pts)
    den = sum((t - tbar) ** 2 for t, _ in pts)
    return num / den if den > 0.0 else 0.0


def _drive(f, states, derivs, first: int, n_steps: int, h: float):
    """Advance `n_steps` RK4 steps from node index `first`; appends in place."""
    for i in range(first, first + n_steps):
        y = states[i]
        k1 = derivs[i]
        y2 = tuple(v + 0.5 * h * k for v, k in zip(y, k1))
        k2 = f(i, 0.5, y2)
        y3 = tuple(v + 0.5 * h * k for v, k in zip(y, k2))
        k3 = f(i, 0.5, y3)
        y4 = tuple(v + h * k for v, k in zip(y, k3))
        k4 = f(i, 1.0, y4)
        ynew = tuple(
            v + h / 6.0 * (a + 2.0 * b + 2.0 * c + d)
            for v, a, b, c, d in zip(y, k1, k2, k3, k4)
        )
        if any(not math.isfinite(v) for v in ynew) or _norm(ynew) > DIVERGENCE_NORM:
            raise Diverged(f"state norm exceeded {DIVERGENCE_NORM:g} near step {i + 1}")
        states.append(ynew)
        derivs.append(f(i + 1, 0.0, ynew))


def _matvec(mat, vec):
    return tuple(sum(row[j] * vec[j] for j in range(4)) for row in mat)


def integrate_linear(sys: LinearizedSystem, initial_history, eta_end: float, step: float) -> Trajectory:
    """Integrate a linearized variant from a history function on [-depth, 0].

    The state is augmented with running integrals W1, W3 of x1 and x3, so
    both distributed terms reduce to exact differences of stored states.
    """
    n = _steps_per_unit(step)
    h = 1.0 / n
    depth = sys.history_depth
    n_hist = depth * n
    n_run = math.ceil(eta_end / h - 1e-9)
    if n_run < 3:
        raise DomainError(f"eta_end {eta_end!r} gives a run of under 3 steps")

    # prefill history nodes: state (x1..x4, W1, W3) and its derivative
    node_x = [tuple(initial_history(-depth + j * h)) for j in range(n_hist + 1)]
    mid_x = [tuple(initial_history(-depth + (j + 0.5) * h)) for j in range(n_hist)]
    w1 = _cumulative([v[0] for v in node_x], [v[0] for v in mid_x], h)
    w3 = _cumulative([v[2] for v in node_x], [v[2] for v in mid_x], h)
    states = [v + (a, b) for v, a, b in zip(node_x, w1, w3)]
    derivs = []
    for j, v in enumerate(node_x):
        eta = -depth + j * h
        dx = _history_derivative(initial_history, eta, -depth, 0.0, 4, 0.5 * h)
        derivs.append(dx + (v[0], v[2]))

    ks = sys.k_star
    delayed = sys.variant == "delayed"
    kink_idx = n_hist
    kink_left = derivs[n_hist]

    def f(i, frac, y):
        x = y[:4]
        xd = _interp(states, derivs, i - n, frac, h, kink_idx, kink_left)
        base = _matvec(sys.M, x)
        nd = _matvec(sys.N, xd[:4])
        # distributed integrals as differences of the running integrals
        if delayed:
            xdd = _interp(states, derivs, i - 2 * n, frac, h, kink_idx, kink_left)
            vec_s = (y[4] - xd[4], 0.0, y[5] - xd[5], 0.0)        # int x_eta(s) ds
            vec_sm1 = (xd[4] - xdd[4], 0.0, xd[5] - xdd[5], 0.0)  # int x_eta(s-1) ds
            ps = _matvec(sys.P, vec_s)
            qs = _matvec(sys.Q, vec_sm1)
            dx = tuple(
                ks * (m_ + n_) - sys.a_coef * p_ + sys.b_coef * q_
                for m_, n_, p_, q_ in zip(base, nd, ps, qs)
            )
        else:
            vec_s = (y[4] - xd[4], 0.0, y[5] - xd[5], 0.0)
            qs = _matvec(sys.Q, vec_s)
            dx = tuple(
                ks * (m_ + n_) + sys.b_coef * q_ for m_, n_, q_ in zip(base, nd, qs)
            )
        return dx + (x[0], x[2])

    derivs[n_hist] = f(n_hist, 0.0, states[n_hist])
    _drive(f, states, derivs, n_hist, n_run, h)

    grid = [j * h for j in range(n_run + 1)]
    run_states = [s[:4] for s in states[n_hist:]]
    norms = [_norm(s) for s in run_states]
    rate = _fit_growth(grid, norms)
    return Trajectory(grid, run_states, [ks] * len(grid), rate)


def integrate_nonlinear_transformed(
    variant: str,
    phys: PhysicalParams,
    c: float,
    initial_history,
    eta_end: float,
    step: float,
) -> Trajectory:
    """Integrate a full transformed system from a history on [-depth, 0].

    The history function returns (r, rho, j, l).  The state is augmented
    with physical time t(eta) (dt/deta is exactly the right-hand-side
    multiplier), so the reconstructed delay is k(eta) = t(eta) - t(eta-1)
    with no quadrature error.
    """
    if variant not in ("delayed", "instant"):
        raise DomainError(f"unknown variant {variant!r}")
    if not c > 0:
        raise DomainError(f"spindle gain must be positive, got {c!r}")
    n = _steps_per_unit(step)
    h = 1.0 / n
    delayed = variant == "delayed"
    depth = 2 if delayed else 1
    n_hist = depth * n
    n_run = math.ceil(eta_end / h - 1e-9)
    if n_run < 3:
        raise DomainError(f"eta_end {eta_end!r} gives a run of under 3 steps")

    m = phys.m
    cx_m, cy_m = phys.c_x / m, phys.c_y / m
    kx_m, ky_m = phys.k_x / m, phys.k_y / m
    fx_m = phys.K_x * phys.omega_cut / m
    fy_m = phys.K_y * phys.omega_cut / m

    def multiplier(eta, r_here, j_here, r_del):
        # dt/deta; also the positivity guard of the change of variables
        if delayed:
            denom = c * r_del - j_here
            if denom <= 0.0:
                raise TransformViolated(eta, "c*r(eta-1) - j(eta) must stay positive")
        else:
            if r_here <= 0.0:
                raise TransformViolated(eta, "r(eta) must stay positive")
            denom = c * r_here
        return TWO_PI * phys.R / denom

    def hist_multiplier(eta):
        r_del = initial_history(eta - 1.0)[0] if delayed else initial_history(eta)[0]
        here = initial_history(eta)
        return multiplier(eta, here[0], here[2], r_del)

    node_x = [tuple(initial_history(-depth + j * h)) for j in range(n_hist + 1)]
    # t(eta) on the history, anchored t(0) = 0; only the most recent unit
    # interval of t is ever read back, so the delayed variant needs the
    # extra unit of (r, j) history that `hist_multiplier` reaches for
    start_t = -1.0
    nodes_t = [hist_multiplier(start_t + j * h) for j in range(n + 1)]
    mids_t = [hist_multiplier(start_t + (j + 0.5) * h) for j in range(n)]
    t_hist = _cumulative(nodes_t, mids_t, h)
    pad = n_hist - n   # nodes before eta = -1 (delayed variant only)
    states, derivs = [], []
    for j, v in enumerate(node_x):
        eta = -depth + j * h
        t_val = t_hist[j - pad] if j >= pad else math.nan
        states.append(v + (t_val,))
        dx = _history_derivative(initial_history, eta, -depth, 0.0, 4, 0.5 * h)
        dt = hist_multiplier(eta) if j >= pad else math.nan
        derivs.append(dx + (dt,))

    kink_idx = n_hist
    kink_left = derivs[n_hist]

    def f(i, frac, y):
        eta = (i - n_hist + frac) * h
        r, rho, jj, ll, t_now = y
        back = _interp(states, derivs, i - n, frac, h, kink_idx, kink_left)
        mult = multiplier(eta, r, jj, back[0])
        k_here = t_now - back[4]
        chip = phys.nu * k_here + rho - back[1]
        if chip <= 0.0:
            raise NegativeChipThickness(eta, chip)
        force = chip ** phys.q
        return (
            jj * mult,
            ll * mult,
            (-cx_m * jj - kx_m * r + fx_m * force) * mult,
            (-cy_m * ll - ky_m * rho - fy_m * force) * mult,
            mult,
        )

    derivs[n_hist] = f(n_hist, 0.0, states[n_hist])
    _drive(f, states, derivs, n_hist, n_run, h)

    grid = [j * h for j in range(n_run + 1)]
    run = states[n_hist:]
    run_states = [s[:4] for s in run]
    k_values = [s[4] - states[n_hist + j - n][4] for j, s in enumerate(run)]
    stat = stationary_state(phys, c)
    ref = (stat.r_star, stat.rho_star, 0.0, 0.0)
    norms = [_norm(tuple(a - b for a, b in zip(s, ref))) for s in run_states]
    rate = _fit_growth(grid, norms)
    return Trajectory(grid, run_states, k_values, rate, aux=[s[4] for s in run])


def _invert_monotone(states, derivs, comp: int, target: float, h: float) -> float:
    """Node position (index + fraction) where a monotone stored component hits target."""
    lo, hi = 0, len(states) - 1
    if not states[0][comp] <= target <= states[-1][comp]:
        raise DomainError("threshold target outside the stored history")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if states[mid][comp] <= target:
            lo = mid
        else:
            hi = mid
    # Newton on the Hermite cubic of the bracketing cell
    y0, y1 = states[lo][comp], states[lo + 1][comp]
    d0, d1 = derivs[lo][comp], derivs[lo + 1][comp]
    frac = (target - y0) / (y1 - y0) if y1 > y0 else 0.5
    for _ in range(30):
        t2, t3 = frac * frac, frac * frac * frac
        val = (
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + frac) * h * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * d1
        )
        dval = (
            (6.0 * t2 - 6.0 * frac) * y0
            + (3.0 * t2 - 4.0 * frac + 1.0) * h * d0
            + (-6.0 * t2 + 6.0 * frac) * y1
            + (3.0 * t2 - 2.0 * frac) * h * d1
        )
        if dval == 0.0:
            break
        new = frac - (val - target) / dval
        if new < 0.0:
            new = 0.0
        elif new > 1.0:
            new = 1.0
        if abs(new - frac) < 1e-15:
            frac = new
            break
        frac = new
    return lo + frac


def integrate_original_instant(
    phys: PhysicalParams,
    c: float,
    initial_history,
    t_hist: float,
    t_end: float,
    step: float,
) -> Trajectory:
    """Integrate the instantaneous-control model in physical time.

    The delay tau(t) solves the threshold relation

        integral_{t - tau}^{t} c x(s)/(2 pi R) ds = 1,

    maintained through the cumulative state H(t) with dH/dt = c x/(2 pi R)
    and inverted on the stored monotone H grid.  `initial_history` returns
    (x, y, u, v) on [-t_hist, 0] and must span at least one full delay.
    """
    if not c > 0:
        raise DomainError(f"spindle gain must be positive, got {c!r}")
    if not (step > 0 and t_hist > 0 and t_end > step):
        raise DomainError("step, t_hist and t_end must be positive with t_end > step")
    h = step
    n_hist = math.ceil(t_hist / h - 1e-9)
    n_run = math.ceil(t_end / h - 1e-9)
    if n_run < 3:
        raise DomainError(f"t_end {t_end!r} gives a run of under 3 steps")
    gain = c / (TWO_PI * phys.R)
    left = -n_hist * h

    node_x = [tuple(initial_history(left + j * h)) for j in range(n_hist + 1)]
    for j, v in enumerate(node_x):
        if v[0] <= 0.0:
            raise TransformViolated(left + j * h, "x must stay positive")
    mid_x = [tuple(initial_history(left + (j + 0.5) * h)) for j in range(n_hist)]
    h_vals = _cumulative([gain * v[0] for v in node_x], [gain * v[0] for v in mid_x], h)
    if h_vals[0] > -1.0:
        raise DomainError(
            f"history spans only {-h_vals[0]:g} of the unit threshold; lengthen t_hist"
        )
    states, derivs = [], []
    for j, v in enumerate(node_x):
        t = left + j * h
        states.append(v + (h_vals[j],))
        dx = _history_derivative(initial_history, t, left, 0.0, 4, 0.5 * h)
        derivs.append(dx + (gain * v[0],))

    kink_idx = n_hist
    kink_left = derivs[n_hist]

    def delay_at(t, h_now):
        pos = _invert_monotone(states, derivs, 4, h_now - 1.0, h)
        t_past = left + pos * h
        idx = int(pos)
        frac = pos - idx
        if idx >= len(states) - 1:
            idx, frac = len(states) - 2, 1.0
        past = _interp(states, derivs, idx, frac, h, kink_idx, kink_left)
        return t - t_past, past

    def f(i, frac, y):
        t = left + (i + frac) * h
        x, yy, u, v, h_now = y
        if x <= 0.0:
            raise TransformViolated(t, "x must stay positive")
        tau, past = delay_at(t, h_now)
        chip = phys.nu * tau + yy - past[1]
        if chip <= 0.0:
            raise NegativeChipThickness(t, chip)
        force = chip ** phys.q
        return (
            u,
            v,
            (-phys.c_x * u - phys.k_x * x + phys.K_x * phys.omega_cut * force) / phys.m,
            (-phys.c_y * v - phys.k_y * yy - phys.K_y * phys.omega_cut * force) / phys.m,
            gain * x,
        )

    derivs[n_hist] = f(n_hist, 0.0, states[n_hist])
    _drive(f, states, derivs, n_hist, n_run, h)

    grid = [j * h for j in range(n_run + 1)]
    run = states[n_hist:]
    run_states = [s[:4] for s in run]
    k_values = [delay_at(grid[j], run[j][4])[0] for j in range(len(run))]
    stat = stationary_state(phys, c)
    ref = (stat.r_star, stat.rho_star, 0.0, 0.0)
    norms = [_norm(tuple(a - b for a, b in zip(s, ref))) for s in run_states]
    rate = _fit_growth(grid, norms)
    return Trajectory(grid, run_states, k_values, rate, aux=[s[4] for s in run])


def interp_uniform(start: float, h: float, values, x: float):
    """Third-order 4-point Lagrange interpolation on a uniform grid.

    `values` holds tuples; returns the interpolated tuple.  Used to compare
    runs sampled on different grids (e.g. the transform-equivalence check)
    without re-deriving stored derivatives.
    """
    pos = (x - start) / h
    i = int(math.floor(pos)) - 1
    i = max(0, min(i, len(values) - 4))
    if i < 0:
        raise DomainError("grid too short for cubic interpolation")
    u = pos - i
    # Lagrange weights on nodes 0, 1, 2, 3
    w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0
    w1 = u * (u - 2.0) * (u - 3.0) / 2.0
    w2 = -u * (u - 1.0) * (u - 3.0) / 2.0
    w3 = u * (u - 1.0) * (u - 2.0) / 6.0
    rows = values[i : i + 4]
    return tuple(
        w0 * a + w1 * b + w2 * c + w3 * d for a, b, c, d in zip(*rows)
    )


def perturbed_stationary_history(stat: StationaryState, amplitude: float):
    """Constant history at the stationary state, offset in r by `amplitude`."""
    return constant_history((stat.r_star + amplitude, stat.rho_star, 0.0, 0.0))
