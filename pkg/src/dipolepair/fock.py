"""Single-photon (Fock) driving of the atom pair, by two independent solvers.

``evolve_amplitudes`` integrates the driven-damped amplitudes of the
single-excitation states |s> and |a>; for one-photon input this closed
two-variable model is exact and serves as the oracle for the second solver.

``evolve_hierarchy`` integrates the photon-number-sector density matrices
rho_mn (m, n in {0, 1}) in the basis {|gg>, |s>, |a>, |ee>}: the diagonal
sectors evolve under the two-channel vacuum dissipator plus the coherent
dipole-dipole coupling, and the off-diagonal sectors carry the envelope-
weighted drive.  Every one- and two-atom Pauli expectation is a linear
functional of rho_11 (see ``table1_expectations``).

Both solvers integrate in the interaction picture of the dipole-dipole
Hamiltonian, so matched rising-exponential drives yield smooth right-hand
sides even deep in the subradiant regime where the level splitting exceeds
the channel bandwidth by orders of magnitude.  The unwinding back to the lab
frame is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .convention import CLS_PHASE_SIGN
from .errors import DegenerateChannel, DomainError, NumericalError
from .pulses import EPS_BAND, TemporalEnvelope
from .trajectory import StateTrajectory

GG, S, A, EE = 0, 1, 2, 3

_TRUNCATION_TOL = 1e-10   # admissible pulse norm before the grid start
_TRACE_DRIFT_TOL = 1e-6   # hierarchy trace drift that signals a solver bug


@dataclass(frozen=True)
class AmplitudeState:
    """Lab-frame amplitudes of |s> and |a> at one time."""

    t: float
    beta_s: complex
    beta_a: complex

    @property
    def norm_squared(self) -> float:
        return abs(self.beta_s) ** 2 + abs(self.beta_a) ** 2


@dataclass(frozen=True)
class FockHierarchy:
    """Lab-frame photon-number sectors at one time.

    rho01 is not stored; it is the adjoint of rho10 by construction.
    """

    t: float
    rho00: np.ndarray
    rho10: np.ndarray
    rho11: np.ndarray

    @property
    def rho01(self) -> np.ndarray:
        return self.rho10.conj().T


# ---------------------------------------------------------------------------
# envelope plumbing
# ---------------------------------------------------------------------------

def _channel_envelopes(env):
    """Accept a single envelope (shared by both channels) or an (s, a) pair."""
    if isinstance(env, TemporalEnvelope):
        return env, env
    if isinstance(env, (tuple, list)) and len(env) == 2:
        es, ea = env
        for e in (es, ea):
            if e is not None and not isinstance(e, TemporalEnvelope):
                raise DomainError("envelope pair must contain TemporalEnvelope or None")
        return es, ea
    raise DomainError("env must be a TemporalEnvelope or a pair (env_s, env_a)")


def _active_channels(rates, profile, env):
    """Resolve per-channel envelopes and guard the degenerate channel."""
    env_s, env_a = _channel_envelopes(env)
    cs = complex(profile.c_s) if env_s is not None else 0.0j
    ca = complex(profile.c_a) if env_a is not None else 0.0j
    if abs(ca) > 1e-15 and rates.gamma_anti <= EPS_BAND * rates.gamma:
        raise DegenerateChannel(
            "profile drives the antisymmetric channel but gamma - gamma12 = "
            f"{rates.gamma_anti:.3e} <= {EPS_BAND}*gamma"
        )
    return cs, ca, env_s, env_a


def default_time_grid(env, gamma: float = 1.0, t_end: float | None = None, n: int = 1001):
    """Grid covering the pulse support and a decay window, containing t = 0."""
    env_s, env_a = _channel_envelopes(env)
    envs = [e for e in (env_s, env_a) if e is not None]
    if not envs:
        raise DomainError("no envelope given")
    lo = min(0.0, min(e.support[0] for e in envs))
    hi_env = max(0.0, max(e.support[1] for e in envs))
    hi = t_end if t_end is not None else hi_env + 10.0 / gamma
    if lo < 0.0 < hi:
        n1 = max(2, int(0.6 * n))
        return np.concatenate([np.linspace(lo, 0.0, n1), np.linspace(0.0, hi, n - n1 + 1)[1:]])
    return np.linspace(lo, hi, n)


def _check_grid(grid, cs, ca, env_s, env_a):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise DomainError("time grid must be strictly increasing with >= 2 points")
    for c, e, name in ((cs, env_s, "symmetric"), (ca, env_a, "antisymmetric")):
        if abs(c) > 1e-15 and e is not None:
            missed = e.norm_before(grid[0])
            if missed > _TRUNCATION_TOL:
                raise DomainError(
                    f"grid starts at {grid[0]} after the {name} pulse onset: "
                    f"{missed:.2e} of the pulse norm would be discarded"
                )
    return grid


# ---------------------------------------------------------------------------
# piecewise integration (drives are discontinuous at envelope support edges)
# ---------------------------------------------------------------------------

class _PiecewiseSolution:
    """Dense ODE solution stitched from per-segment solve_ivp results."""

    def __init__(self, segments):
        self.segments = segments  # list of (lo, hi, OdeSolution)
        self.t_min = segments[0][0]
        self.t_max = segments[-1][1]

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if t.size and (t.min() < self.t_min - 1e-12 or t.max() > self.t_max + 1e-12):
            raise DomainError(
                f"evaluation times outside the integrated span "
                f"[{self.t_min}, {self.t_max}]"
            )
        ydim = self.segments[0][2](self.t_min).shape[0]
        out = np.zeros((ydim, t.size), dtype=complex)
        for i, (lo, hi, sol) in enumerate(self.segments):
            # boundary points belong to the earlier segment (the state is
            # continuous; the drive there is one-sided)
            mask = ((t >= lo) if i == 0 else (t > lo)) & (t <= hi)
            if np.any(mask):
                out[:, mask] = sol(t[mask])
        return out

    def scalar(self, t: float) -> np.ndarray:
        for lo, hi, sol in self.segments:
            if lo <= t <= hi:
                return sol(t)
        raise DomainError(f"t = {t} outside the integrated span")


def _segment_edges(t0, t1, envelopes):
    edges = {t0, t1}
    for e in envelopes:
        if e is None:
            continue
        for b in e.breakpoints:
            if t0 < b < t1:
                edges.add(b)
    edges = sorted(edges)
    # drop numerically coincident edges
    cleaned = [edges[0]]
    for x in edges[1:]:
        if x - cleaned[-1] > 1e-13 * max(1.0, abs(x)):
            cleaned.append(x)
    return cleaned


def _integrate_piecewise(make_rhs, y0, t0, t1, envelopes, rtol, atol):
    """Integrate with restarts at every envelope breakpoint.

    ``make_rhs(lo, hi)`` returns the right-hand side valid on [lo, hi]; the
    drive callables are segment-resolved so one-sided support edges are exact.
    """
    edges = _segment_edges(t0, t1, envelopes)
    segments = []
    y = np.asarray(y0, dtype=complex)
    for lo, hi in zip(edges[:-1], edges[1:]):
        res = solve_ivp(
            make_rhs(lo, hi), (lo, hi), y, method="DOP853",
            rtol=rtol, atol=atol, dense_output=True,
        )
        if not res.success:
            raise NumericalError(
                f"integration failed on [{lo:.6g}, {hi:.6g}]: {res.message}"
            )
        segments.append((lo, hi, res.sol))
        y = res.y[:, -1]
    return _PiecewiseSolution(segments)


def _segment_drive(env, cs_like, lo, hi):
    """Scalar drive callable on [lo, hi]: the envelope if the segment lies in
    its support, else zero."""
    if env is None or abs(cs_like) <= 1e-15:
        return None
    mid = 0.5 * (lo + hi)
    if env.support[0] <= mid <= env.support[1]:
        return env.scalar_fn()
    return None


# ---------------------------------------------------------------------------
# amplitude solver
# ---------------------------------------------------------------------------

class AmplitudeSolution:
    """Dense single-excitation solution; populations queryable at any time."""

    def __init__(self, piecewise, lam):
        self._pw = piecewise
        self.lam = lam
        self.t_min = piecewise.t_min
        self.t_max = piecewise.t_max

    def amplitudes(self, t):
        """Lab-frame (beta_s, beta_a) at times t."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        b = self._pw(t)
        phase = np.exp(0.5j * self.lam * t)
        return b[0] * phase, b[1] * phase.conj()

    def population(self, which: str, t):
        scalar = np.ndim(t) == 0
        bs, ba = self.amplitudes(t)
        ps, pa = np.abs(bs) ** 2, np.abs(ba) ** 2
        if which == "s":
            out = ps
        elif which == "a":
            out = pa
        elif which == "eg":
            out = 0.5 * (ps + pa) + (bs * ba.conj()).real
        elif which == "ge":
            out = 0.5 * (ps + pa) - (bs * ba.conj()).real
        else:
            raise DomainError(f"unknown population target {which!r}")
        return float(out[0]) if scalar else out


def amplitude_solution(rates, profile, env, t_span, rtol=1e-9, atol=1e-12):
    """Integrate the single-excitation amplitudes, returning the dense solution.

    Interaction-picture variables b are used internally; ``AmplitudeSolution``
    restores the lab frame on evaluation.
    """
    cs, ca, env_s, env_a = _active_channels(rates, profile, env)
    lam = CLS_PHASE_SIGN * rates.lambda12
    gs, ga = rates.gamma_sym, rates.gamma_anti
    rs, ra = math.sqrt(gs), math.sqrt(max(ga, 0.0))
    t0, t1 = float(t_span[0]), float(t_span[1])

    def make_rhs(lo, hi):
        fs = _segment_drive(env_s, cs, lo, hi)
        fa = _segment_drive(env_a, ca, lo, hi)

        def rhs(t, y):
            dbs = -0.5 * gs * y[0]
            dba = -0.5 * ga * y[1]
            if fs is not None:
                dbs -= rs * cs * fs(t) * np.exp(-0.5j * lam * t)
            if fa is not None:
                dba -= ra * ca * fa(t) * np.exp(+0.5j * lam * t)
            return [dbs, dba]

        return rhs

    pw = _integrate_piecewise(make_rhs, [0.0j, 0.0j], t0, t1, (env_s, env_a), rtol, atol)
    return AmplitudeSolution(pw, lam)


def evolve_amplitudes(rates, profile, env, grid, rtol=1e-9, atol=1e-12,
                      keep_states=False) -> StateTrajectory:
    """Single-excitation trajectory driven by a one-photon pulse.

    ``env`` is one envelope shared by both channels or a pair (env_s, env_a);
    the doubly excited state is unreachable here (P_ee = 0 identically).
    """
    cs, ca, env_s, env_a = _active_channels(rates, profile, env)
    grid = _check_grid(grid, cs, ca, env_s, env_a)
    sol = amplitude_solution(rates, profile, env, (grid[0], grid[-1]), rtol, atol)
    bs, ba = sol.amplitudes(grid)
    ps, pa = np.abs(bs) ** 2, np.abs(ba) ** 2
    if np.any(ps + pa > 1.0 + 1e-9):
        raise NumericalError("single-excitation norm exceeded 1 beyond tolerance")
    states = None
    if keep_states:
        states = [AmplitudeState(float(t), complex(b1), complex(b2))
                  for t, b1, b2 in zip(grid, bs, ba)]
    return StateTrajectory.from_populations(
        grid, 1.0 - ps - pa, ps, pa, np.zeros_like(ps), bs * np.conj(ba), states=states
    )


# ---------------------------------------------------------------------------
# Fock-sector hierarchy solver
# ---------------------------------------------------------------------------

def _rotating_dissipator_factory(rates):
    """Elementwise two-channel dissipator in the interaction picture.

    The collective lowering operators split into pieces rotating at
    -+lambda/2; their squares are static and the cross ('cascade') terms carry
    e^{+-i*lambda*t}.  Every sandwich term moves a single matrix element.
    """
    gs, ga = rates.gamma_sym, rates.gamma_anti
    m = np.array([0.0, gs, ga, gs + ga])
    half_anticomm = 0.5 * (m[:, None] + m[None, :])

    def dissip(rho, ep, em, out):
        out -= half_anticomm * rho
        out[GG, GG] += gs * rho[S, S] + ga * rho[A, A]
        out[S, S] += gs * rho[EE, EE]
        out[A, A] += ga * rho[EE, EE]
        out[GG, S] += ep * gs * rho[S, EE]
        out[S, GG] += em * gs * rho[EE, S]
        out[GG, A] -= em * ga * rho[A, EE]
        out[A, GG] -= ep * ga * rho[EE, A]
        return out

    return dissip


def evolve_hierarchy(rates, profile, env, field="fock1", grid=None,
                     rtol=1e-9, atol=1e-12, keep_states=False) -> StateTrajectory:
    """Integrate the four photon-number sectors for single-photon input.

    rho00 and rho11 are bona fide density matrices (vacuum- and one-photon-
    conditioned); rho10 carries the field-atom coherence that feeds the drive.
    Populations are read from the diagonal of rho11.  Raises NumericalError if
    either trace drifts by more than 1e-6 (an implementation bug, not a user
    error).
    """
    if field != "fock1":
        raise DomainError(
            f"field = {field!r}: only single-photon Fock input ('fock1') is supported"
        )
    cs, ca, env_s, env_a = _active_channels(rates, profile, env)
    if grid is None:
        grid = default_time_grid((env_s, env_a), gamma=rates.gamma)
    grid = _check_grid(grid, cs, ca, env_s, env_a)

    lam = CLS_PHASE_SIGN * rates.lambda12
    gs, ga = rates.gamma_sym, rates.gamma_anti
    rs, ra = math.sqrt(gs), math.sqrt(max(ga, 0.0))
    dissip = _rotating_dissipator_factory(rates)

    def make_rhs(lo, hi):
        fs = _segment_drive(env_s, cs, lo, hi)
        fa = _segment_drive(env_a, ca, lo, hi)

        def rhs(t, y):
            r00 = y[:16].reshape(4, 4)
            r10 = y[16:32].reshape(4, 4)
            r11 = y[32:].reshape(4, 4)
            half = np.exp(0.5j * lam * t)
            ep = half * half
            em = ep.conjugate()
            d = np.zeros((12, 4), dtype=complex)
            d00, d10, d11 = d[:4], d[4:8], d[8:]
            dissip(r00, ep, em, d00)
            dissip(r10, ep, em, d10)
            dissip(r11, ep, em, d11)
            if fs is not None or fa is not None:
                # raising drive operator in the rotating frame
                gd = np.zeros((4, 4), dtype=complex)
                if fs is not None:
                    xs = cs * fs(t) * rs
                    gd[S, GG] = xs * half.conjugate()
                    gd[EE, S] = xs * half
                if fa is not None:
                    xa = ca * fa(t) * ra
                    gd[A, GG] = xa * half
                    gd[EE, A] = -xa * half.conjugate()
                gop = gd.conj().T
                r01 = r10.conj().T
                d10 += r00 @ gd - gd @ r00
                d11 += (r01 @ gd - gd @ r01) + (gop @ r10 - r10 @ gop)
            return d.ravel()

        return rhs

    y0 = np.zeros(48, dtype=complex)
    y0[0] = 1.0    # rho00 = |gg><gg|
    y0[32] = 1.0   # rho11 = |gg><gg|
    pw = _integrate_piecewise(make_rhs, y0, grid[0], grid[-1], (env_s, env_a), rtol, atol)

    ys = pw(grid)
    r00 = ys[:16].reshape(4, 4, -1)
    r10 = ys[16:32].reshape(4, 4, -1)
    r11 = ys[32:].reshape(4, 4, -1)

    tr11 = np.einsum("iit->t", r11).real
    tr00 = np.einsum("iit->t", r00).real
    drift = max(np.max(np.abs(tr11 - 1.0)), np.max(np.abs(tr00 - 1.0)))
    if drift > _TRACE_DRIFT_TOL:
        raise NumericalError(
            f"sector trace drifted by {drift:.2e} (> {_TRACE_DRIFT_TOL}); "
            "this indicates a solver defect"
        )

    ps, pa, pee, pgg = r11[S, S].real, r11[A, A].real, r11[EE, EE].real, r11[GG, GG].real
    coherence = r11[S, A] * np.exp(1j * lam * grid)   # unwind to the lab frame

    states = None
    if keep_states:
        energies = np.array([0.0, -lam / 2, lam / 2, 0.0])
        states = []
        for i, t in enumerate(grid):
            u = np.exp(-1j * energies * t)
            rot = np.outer(u, u.conj())
            states.append(FockHierarchy(
                t=float(t),
                rho00=rot * r00[:, :, i],
                rho10=rot * r10[:, :, i],
                rho11=rot * r11[:, :, i],
            ))
    return StateTrajectory.from_populations(grid, pgg, ps, pa, pee, coherence, states=states)


# ---------------------------------------------------------------------------
# vacuum decay
# ---------------------------------------------------------------------------

_INITIAL_VECTORS = {
    "gg": np.array([1, 0, 0, 0], dtype=complex),
    "s": np.array([0, 1, 0, 0], dtype=complex),
    "a": np.array([0, 0, 1, 0], dtype=complex),
    "ee": np.array([0, 0, 0, 1], dtype=complex),
    "eg": np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2),
    "ge": np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2),
}


def decay_only(rates, initial, grid, rtol=1e-9, atol=1e-12) -> StateTrajectory:
    """Vacuum-field master equation from a given atomic state (no drive).

    |s> and |a> decay at gamma +- gamma12; the grid must start at 0.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or abs(grid[0]) > 1e-12:
        raise DomainError("decay grid must start at t = 0 and be increasing")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("decay grid must be strictly increasing")
    if isinstance(initial, str):
        try:
            vec = _INITIAL_VECTORS[initial]
        except KeyError:
            raise DomainError(
                f"initial = {initial!r}; choose from {sorted(_INITIAL_VECTORS)}"
            ) from None
        rho0 = np.outer(vec, vec.conj())
    else:
        rho0 = np.asarray(initial, dtype=complex)
        if rho0.shape != (4, 4):
            raise DomainError("initial must be a state label or a 4x4 density matrix")

    lam = CLS_PHASE_SIGN * rates.lambda12
    energies = np.array([0.0, -lam / 2, lam / 2, 0.0])
    # diagonal Hamiltonian commutator is elementwise
    iomega = -1j * (energies[:, None] - energies[None, :])
    dissip = _rotating_dissipator_factory(rates)

    def rhs(t, y):
        rho = y.reshape(4, 4)
        out = np.zeros((4, 4), dtype=complex)
        dissip(rho, 1.0, 1.0, out)  # lab frame: cross terms at full strength
        out += iomega * rho
        return out.ravel()

    res = solve_ivp(rhs, (grid[0], grid[-1]), rho0.ravel(), method="DOP853",
                    t_eval=grid, rtol=rtol, atol=atol)
    if not res.success:
        raise NumericalError(f"decay integration failed: {res.message}")
    r = res.y.reshape(4, 4, -1)
    return StateTrajectory.from_populations(
        grid, r[GG, GG].real, r[S, S].real, r[A, A].real, r[EE, EE].real, r[S, A]
    )


# ---------------------------------------------------------------------------
# operator expectations (product-basis observables from rho11)
# ---------------------------------------------------------------------------

def _collective_operator_table():
    # per-atom basis ordered (g, e); sigma+ = (sx + i sy)/2 = |e><g| fixes the
    # sy sign (the familiar [[0,-i],[i,0]] form assumes (e, g) ordering)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, 1j], [-1j, 0]], dtype=complex)
    sz = np.array([[-1, 0], [0, 1]], dtype=complex)
    ident = np.eye(2, dtype=complex)
    paulis = {"x": sx, "y": sy, "z": sz}

    # product-basis index 2*a1 + a2 over (g, e); collective basis change
    v = np.zeros((4, 4), dtype=complex)
    v[0, 0] = 1.0                       # |gg>
    v[2, 1] = v[1, 1] = 1 / math.sqrt(2)  # |s> = (|eg> + |ge>)/sqrt(2)
    v[2, 2] = 1 / math.sqrt(2)
    v[1, 2] = -1 / math.sqrt(2)         # |a> = (|eg> - |ge>)/sqrt(2)
    v[3, 3] = 1.0                       # |ee>

    def to_collective(op):
        return v.conj().T @ op @ v

    table = {}
    for p, op in paulis.items():
        table[f"sigma1_{p}"] = to_collective(np.kron(op, ident))
        table[f"sigma2_{p}"] = to_collective(np.kron(ident, op))
    for p1, p2 in (("x", "x"), ("y", "y"), ("z", "z"), ("x", "y"), ("y", "x"),
                   ("x", "z"), ("z", "x"), ("y", "z"), ("z", "y")):
        table[f"sigma1_{p1}_sigma2_{p2}"] = to_collective(
            np.kron(paulis[p1], paulis[p2])
        )
    splus = np.array([[0, 0], [1, 0]], dtype=complex)  # |e><g|
    raise1 = to_collective(np.kron(splus, ident))
    return table, raise1


_TABLE1_OPS, _SIGMA1_PLUS = _collective_operator_table()

TABLE1_NAMES = tuple(sorted(_TABLE1_OPS))


def table1_expectations(hierarchy: FockHierarchy) -> dict[str, float]:
    """All fifteen one- and two-atom Pauli expectations from rho11."""
    rho = hierarchy.rho11
    return {name: float(np.trace(op @ rho).real) for name, op in _TABLE1_OPS.items()}


def drive_amplitudes(rates, profile, env, t: float) -> tuple[complex, complex]:
    """Per-atom drive inhomogeneities d_1(t), d_2(t) of the operator equations.

    These are the photon-mode contractions of the input field against each
    atom's coupling: d_(1,2) = (c_s xi_s sqrt(gamma+gamma12)
    +- c_a xi_a sqrt(gamma-gamma12)) / sqrt(2).
    """
    cs, ca, env_s, env_a = _active_channels(rates, profile, env)
    xs = cs * complex(env_s.value(t)) * math.sqrt(rates.gamma_sym) if env_s is not None else 0.0j
    xa = ca * complex(env_a.value(t)) * math.sqrt(max(rates.gamma_anti, 0.0)) if env_a is not None else 0.0j
    inv_sqrt2 = 1.0 / math.sqrt(2)
    return (xs + xa) * inv_sqrt2, (xs - xa) * inv_sqrt2


def atom1_inversion_rate(rates, profile, env, state: FockHierarchy) -> float:
    """d<sigma_1^z>/dt predicted by the operator equations of motion.

    Dissipative part from the Pauli expectations of rho11, drive part from the
    cross-sector coherence rho01 contracted with the photon-mode amplitude.
    Used to cross-check the hierarchy solver term by term.
    """
    e = table1_expectations(state)
    d1, _ = drive_amplitudes(rates, profile, env, state.t)
    drive = -4.0 * (d1 * np.trace(_SIGMA1_PLUS @ state.rho01)).real
    return (
        drive
        - rates.gamma * (e["sigma1_z"] + 1.0)
        - 0.5 * rates.gamma12 * (e["sigma1_x_sigma2_x"] + e["sigma1_y_sigma2_y"])
        + 0.5 * rates.lambda12 * (e["sigma1_x_sigma2_y"] - e["sigma1_y_sigma2_x"])
    )


def hierarchy_rhs(rates, profile, env, state: FockHierarchy):
    """Lab-frame time derivatives (d rho00, d rho10, d rho11) at a state.

    Plain-operator construction (full lowering operators, explicit commutator
    with the dipole-dipole Hamiltonian); used by tests to check the rotating-
    frame integrator against the untransformed generator.
    """
    cs, ca, env_s, env_a = _active_channels(rates, profile, env)
    lam = CLS_PHASE_SIGN * rates.lambda12
    gs, ga = rates.gamma_sym, rates.gamma_anti
    sm = np.zeros((4, 4), dtype=complex)
    sm[GG, S] = sm[S, EE] = 1.0
    am = np.zeros((4, 4), dtype=complex)
    am[GG, A] = 1.0
    am[A, EE] = -1.0
    ls, la = math.sqrt(gs) * sm, math.sqrt(max(ga, 0.0)) * am
    h0 = np.diag([0.0, -lam / 2, lam / 2, 0.0]).astype(complex)

    def lind(rho):
        out = -1j * (h0 @ rho - rho @ h0)
        for lop in (ls, la):
            ld = lop.conj().T
            out += lop @ rho @ ld - 0.5 * (ld @ lop @ rho + rho @ ld @ lop)
        return out

    t = state.t
    gd = np.zeros((4, 4), dtype=complex)
    if env_s is not None:
        gd += cs * complex(env_s.value(t)) * ls.conj().T
    if env_a is not None:
        gd += ca * complex(env_a.value(t)) * la.conj().T
    gop = gd.conj().T
    r00, r10, r11 = state.rho00, state.rho10, state.rho11
    r01 = state.rho01
    d00 = lind(r00)
    d10 = lind(r10) + r00 @ gd - gd @ r00
    d11 = lind(r11) + (r01 @ gd - gd @ r01) + (gop @ r10 - r10 @ gop)
    return d00, d10, d11
