"""Numerical bracket flow  d mu/dt = -pi(Ric^c(mu)) mu  for cross-validation.

Moving the bracket by the group action is equivalent to moving the metric
with J fixed, so a soliton of the metric flow shows up as a bracket whose
Ric^c is c I + D.  Everything here is floating point; the exact verdicts
live in :mod:`nilmin.pipeline`.  Non-convergence within a horizon is
evidence, not proof.

Two integrators are offered.  ``bracket`` mode steps mu itself with RK4.
``orbit`` mode steps a group element g and sets mu(t) = g . mu0, so the
trajectory cannot drift off the GL(n, C)-orbit through rounding.  The
velocity of g is the minimal-norm A in gl(n, C) with pi(A) mu equal to the
flow velocity modulo scaling; the part of Ric^c acting as a derivation or as
a multiple of I does not move the normalised bracket and is dropped.  A
bounded g means the corresponding metrics converge; cond(g) running away
means the limit bracket lies on the orbit boundary, so no soliton metric
exists on the original algebra even if the residual decays.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import LieBracket


def dense(mu: LieBracket) -> np.ndarray:
    """Full antisymmetric float tensor c[i, j, k] (0-based)."""
    d = mu.dim
    c = np.zeros((d, d, d))
    for (i, j, k), v in mu.entries.items():
        c[i - 1, j - 1, k - 1] = float(v)
        c[j - 1, i - 1, k - 1] = -float(v)
    return c


def _j_matrix(d: int) -> np.ndarray:
    J = np.zeros((d, d))
    for p in range(0, d, 2):
        J[p + 1, p] = 1.0
        J[p, p + 1] = -1.0
    return J


def ricci_c(c: np.ndarray, J: np.ndarray) -> np.ndarray:
    d = c.shape[0]
    out_ = c.reshape(d, d * d)
    in_ = c.reshape(d * d, d)
    ric = -0.5 * out_ @ out_.T + 0.25 * in_.T @ in_
    return 0.5 * (ric - J @ ric @ J)


def pi_action(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """(pi(a) mu)(x, y) = a mu(x, y) - mu(a x, y) - mu(x, a y) on dense tensors."""
    t1 = c @ a.T
    t2 = np.tensordot(a, c, axes=([0], [0]))
    return t1 - t2 + t2.transpose(1, 0, 2)


def _inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.vdot(a, b))


def _defect(c: np.ndarray, J: np.ndarray):
    """(pi(Ric^c) mu, c*, residual) with the residual normalised by |mu|^3."""
    p = pi_action(ricci_c(c, J), c)
    n2 = _inner(c, c)
    if n2 == 0.0:
        raise ValueError("the zero bracket has no soliton residual")
    cstar = -_inner(p, c) / n2
    res = math.sqrt(_inner(p + cstar * c, p + cstar * c)) / n2**1.5
    return p, cstar, res


def soliton_residual(mu: LieBracket | np.ndarray, J: np.ndarray | None = None) -> float:
    """|pi(Ric^c) mu + c* mu| / |mu|^3; zero exactly at solitons and invariant under mu -> r mu."""
    c = dense(mu) if isinstance(mu, LieBracket) else np.asarray(mu, dtype=float)
    J = _j_matrix(c.shape[0]) if J is None else J
    return _defect(c, J)[2]


MODES = ("bracket", "orbit")


@dataclass(frozen=True)
class FlowOptions:
    dt: float = 1e-3
    max_steps: int = 200_000
    tol: float = 1e-6
    normalize: bool = True
    record_every: int = 1000
    monotone_slack: float = 1e-8
    mode: str = "orbit"
    cond_limit: float = 1e3

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}")
        if not self.cond_limit > 1:
            raise ValueError("cond_limit must exceed 1")


@dataclass
class FlowResult:
    converged: bool
    final_residual: float
    c_estimate: float
    steps: int
    time: float
    blowup: bool = False
    monotone_violations: int = 0
    trajectory: list[tuple[int, float, float, float, float]] = field(default_factory=list)
    final: np.ndarray | None = None
    mode: str = "bracket"
    degenerate: bool = False
    condition: float | None = None

    @property
    def status(self) -> str:
        if self.blowup:
            return "blowup"
        if self.degenerate:
            return "degenerate"
        return "converged" if self.converged else "not_converged"

    def trajectory_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("step", "time", "norm", "residual", "c_estimate"))
        for step, t, norm, res, cest in self.trajectory:
            w.writerow((step, f"{t:.6f}", f"{norm:.12e}", f"{res:.12e}", f"{cest:.12e}"))
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "status": self.status,
            "converged": self.converged,
            "final_residual": self.final_residual,
            "c_estimate": self.c_estimate,
            "steps": self.steps,
            "time": self.time,
            "monotone_violations": self.monotone_violations,
            "condition": self.condition,
            "trajectory_summary": [list(row) for row in self.trajectory],
        }


def _as_dense(mu0) -> np.ndarray:
    c = dense(mu0) if isinstance(mu0, LieBracket) else np.array(mu0, dtype=float)
    if c.ndim != 3 or len(set(c.shape)) != 1 or c.shape[0] % 2:
        raise ValueError("bracket tensor must be d x d x d with d even")
    if not np.any(c):
        raise ValueError("the zero bracket is already flat; nothing to flow")
    return c


def run_flow(mu0: LieBracket | np.ndarray, J=None, opts: FlowOptions | None = None) -> FlowResult:
    """Integrate the normalised flow from mu0 until the soliton residual drops below tol.

    In orbit mode the bracket is always renormalised and the run also stops,
    unconverged and flagged degenerate, once cond(g) exceeds ``cond_limit``.
    """
    opts = opts or FlowOptions()
    c = _as_dense(mu0)
    if J is None:
        J = _j_matrix(c.shape[0])
    run = _run_orbit if opts.mode == "orbit" else _run_bracket
    # overflow is detected from the norm and reported as a blow-up
    with np.errstate(over="ignore", invalid="ignore"):
        return run(c, np.asarray(J, dtype=float), opts)


def _run_bracket(c: np.ndarray, J: np.ndarray, opts: FlowOptions) -> FlowResult:
    """RK4 on d mu/dt = -pi(Ric^c(mu)) mu.

    With ``normalize`` the radial component is projected out of the field and
    |mu| is reset to 1 after each step; the normalised trajectory is the
    unnormalised one up to scale and a change of time.
    """
    if opts.normalize:
        c = c / math.sqrt(_inner(c, c))
    dt = opts.dt
    traj: list[tuple[int, float, float, float, float]] = []
    violations = 0
    step, t = 0, 0.0
    p, cstar, res = _defect(c, J)

    def rhs(x: np.ndarray, px: np.ndarray | None = None) -> np.ndarray:
        v = -(pi_action(ricci_c(x, J), x) if px is None else px)
        if opts.normalize:
            # drop the radial part so |mu| is conserved by the field itself
            v = v - (_inner(v, x) / _inner(x, x)) * x
        return v

    def record():
        traj.append((step, t, math.sqrt(_inner(c, c)), res, cstar))

    def done(converged: bool) -> FlowResult:
        if step % opts.record_every:
            record()
        return FlowResult(converged, res, cstar, step, t, monotone_violations=violations, trajectory=traj, final=c)

    while True:
        if step % opts.record_every == 0:
            record()
        if res < opts.tol:
            return done(True)
        if step >= opts.max_steps:
            return done(False)
        k1 = rhs(c, p)
        k2 = rhs(c + 0.5 * dt * k1)
        k3 = rhs(c + 0.5 * dt * k2)
        k4 = rhs(c + dt * k3)
        c = c + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        step += 1
        t += dt
        norm = math.sqrt(_inner(c, c))
        if not math.isfinite(norm) or norm > 1e150 or norm == 0.0:
            record()
            return FlowResult(False, math.nan, math.nan, step, t, blowup=True, monotone_violations=violations, trajectory=traj)
        if opts.normalize:
            c = c / norm
        prev = res
        p, cstar, res = _defect(c, J)
        if res > prev + opts.monotone_slack:
            violations += 1


def commuting_basis(J: np.ndarray) -> np.ndarray:
    """Orthonormal basis (as a stack of matrices) of {A : AJ = JA}, i.e. gl(n, C) inside gl(2n, R)."""
    d = J.shape[0]
    rows = []
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d))
            E[i, j] = 1.0
            rows.append((0.5 * (E - J @ E @ J)).ravel())
    _, s, vt = np.linalg.svd(np.array(rows))
    r = int(np.sum(s > 1e-9))
    return vt[:r].reshape(r, d, d)


def act_dense(g: np.ndarray, c0: np.ndarray) -> np.ndarray:
    """(g . mu)(x, y) = g mu(g^-1 x, g^-1 y) on dense tensors."""
    gi = np.linalg.inv(g)
    c1 = c0 @ g.T
    c2 = np.tensordot(gi, c1, axes=([0], [0]))
    return np.tensordot(c2, gi, axes=([1], [0])).transpose(0, 2, 1)


class _OrbitField:
    """Gauge-fixed velocity of g for the normalised flow through c0."""

    def __init__(self, c0: np.ndarray, J: np.ndarray):
        self.c0, self.J = c0, J
        self.basis = commuting_basis(J)
        self.basis_t = self.basis.transpose(0, 2, 1).copy()

    def pi_all(self, c: np.ndarray) -> np.ndarray:
        t1 = c[None] @ self.basis_t[:, None]
        t2 = np.tensordot(self.basis, c, axes=([1], [0]))
        return (t1 - t2 + t2.transpose(0, 2, 1, 3)).reshape(len(self.basis), -1)

    def __call__(self, g: np.ndarray) -> np.ndarray:
        c = act_dense(g, self.c0)
        v = pi_action(ricci_c(c, self.J), c).ravel()
        M = self.pi_all(c)
        cr = c.ravel()
        n2 = cr @ cr
        # drop the scaling direction, then take the (ridge-regularised) minimal-norm solution
        M = M - np.outer(M @ cr, cr) / n2
        v = v - cr * (cr @ v) / n2
        G = M @ M.T
        G[np.diag_indices_from(G)] += 1e-12 * (np.trace(G) + 1.0)
        x = np.linalg.solve(G, M @ v)
        return -np.tensordot(x, self.basis, axes=1) @ g


def _run_orbit(c0: np.ndarray, J: np.ndarray, opts: FlowOptions) -> FlowResult:
    c0 = c0 / math.sqrt(_inner(c0, c0))
    field_ = _OrbitField(c0, J)
    dt = opts.dt
    g = np.eye(c0.shape[0])
    c = c0
    traj: list[tuple[int, float, float, float, float]] = []
    violations = 0
    step, t = 0, 0.0
    p, cstar, res = _defect(c, J)
    cond = 1.0

    def record():
        traj.append((step, t, math.sqrt(_inner(c, c)), res, cstar))

    def done(converged: bool, degenerate: bool = False, blowup: bool = False) -> FlowResult:
        if step % opts.record_every:
            record()
        return FlowResult(
            converged, res, cstar, step, t, blowup=blowup, monotone_violations=violations,
            trajectory=traj, final=c, mode="orbit", degenerate=degenerate, condition=cond,
        )

    while True:
        if step % opts.record_every == 0:
            record()
        if cond > opts.cond_limit:
            return done(False, degenerate=True)
        if res < opts.tol:
            return done(True)
        if step >= opts.max_steps:
            return done(False)
        k1 = field_(g)
        k2 = field_(g + 0.5 * dt * k1)
        k3 = field_(g + 0.5 * dt * k2)
        k4 = field_(g + dt * k3)
        g = g + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        g = 0.5 * (g - J @ g @ J)
        step += 1
        t += dt
        c = act_dense(g, c0)
        norm = math.sqrt(_inner(c, c))
        if not math.isfinite(norm) or norm == 0.0:
            res = cstar = math.nan
            return done(False, blowup=True)
        g = g * norm
        c = c / norm
        cond = float(np.linalg.cond(g))
        prev = res
        p, cstar, res = _defect(c, J)
        if res > prev + opts.monotone_slack:
            violations += 1
