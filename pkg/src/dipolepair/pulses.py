"""Photon spatial profiles and temporal envelopes.

The photon addressing the pair lives in two orthogonal spatial channels, the
symmetric and antisymmetric superpositions of the two delocalized dipole
patterns; a :class:`SpatialProfile` holds the complex weights on the two.
The time dependence is a unit-norm envelope xi(t).  The matched shapes are
rising exponentials whose bandwidth equals the channel decay rate
(gamma +- gamma12) and whose phase rate is -+ lambda12/2, i.e. the exact time
reverse of the channel's spontaneous emission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .convention import CLS_PHASE_SIGN
from .couplings import CollectiveRates
from .errors import DegenerateChannel, DomainError

RISING = "rising_exponential"
DECAYING = "decaying_exponential"
SQUARE = "square"
GAUSSIAN = "gaussian"
SAMPLED = "sampled"

KINDS = (RISING, DECAYING, SQUARE, GAUSSIAN, SAMPLED)

# antisymmetric channel is treated as closed below this bandwidth (units of gamma)
EPS_BAND = 1e-6

# rising/decaying exponentials are truncated where the missed norm is e^-40
_EXP_TAIL = 40.0
_GAUSS_TAIL = 10.0


@dataclass(frozen=True)
class SpatialProfile:
    """Unit-norm weights (c_s, c_a) on the symmetric/antisymmetric channels."""

    c_s: complex
    c_a: complex

    def __post_init__(self):
        n2 = abs(self.c_s) ** 2 + abs(self.c_a) ** 2
        if abs(n2 - 1.0) > 1e-9:
            raise DomainError(
                f"|c_s|^2 + |c_a|^2 = {n2} is not 1; build profiles with "
                "superposition_profile"
            )


def superposition_profile(weight_s: complex, weight_a: complex) -> SpatialProfile:
    """Normalize arbitrary channel weights into a SpatialProfile."""
    n = math.sqrt(abs(weight_s) ** 2 + abs(weight_a) ** 2)
    if n == 0.0:
        raise DomainError("profile weights must not both vanish")
    return SpatialProfile(c_s=complex(weight_s) / n, c_a=complex(weight_a) / n)


SYMMETRIC = SpatialProfile(1.0 + 0j, 0.0j)
ANTISYMMETRIC = SpatialProfile(0.0j, 1.0 + 0j)
EQUAL_SUPERPOSITION = SpatialProfile(1.0 / math.sqrt(2) + 0j, 1.0 / math.sqrt(2) + 0j)


@dataclass(frozen=True, eq=False)
class TemporalEnvelope:
    """Unit-norm complex envelope xi(t) of one of the supported families.

    bandwidth  : the family's rate parameter -- the real exponential constant
                 for the exponential kinds, 1/duration for square,
                 1/width for gaussian, 1/span for sampled
    phase_rate : angular rate of the phase factor e^{i*phase_rate*t}
    support    : interval outside which xi vanishes (exponential kinds are
                 truncated where the missed norm is ~1e-18)
    samples    : (t, xi) arrays for the sampled kind, linearly interpolated
    """

    kind: str
    bandwidth: float
    phase_rate: float = 0.0
    support: tuple[float, float] = (0.0, 0.0)
    samples: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown envelope kind {self.kind!r}")
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0.0):
            raise DomainError(f"bandwidth = {self.bandwidth} must be positive")

    # -- evaluation ---------------------------------------------------------

    def value(self, t):
        """xi(t), vectorized over t; zero outside the support."""
        t = np.asarray(t, dtype=float)
        lo, hi = self.support
        inside = (t >= lo) & (t <= hi)
        out = np.zeros(t.shape, dtype=complex)
        ts = t[inside]
        if self.kind == RISING:
            g = self.bandwidth
            out[inside] = math.sqrt(g) * np.exp((0.5 * g + 1j * self.phase_rate) * ts)
        elif self.kind == DECAYING:
            g = self.bandwidth
            out[inside] = math.sqrt(g) * np.exp((-0.5 * g + 1j * self.phase_rate) * ts)
        elif self.kind == SQUARE:
            T = 1.0 / self.bandwidth
            out[inside] = (1.0 / math.sqrt(T)) * np.exp(1j * self.phase_rate * ts)
        elif self.kind == GAUSSIAN:
            w = 1.0 / self.bandwidth
            amp = (w * math.sqrt(math.pi)) ** -0.5
            out[inside] = amp * np.exp(-ts * ts / (2 * w * w) + 1j * self.phase_rate * ts)
        else:  # SAMPLED
            tg, xg = self.samples
            out[inside] = np.interp(ts, tg, xg.real) + 1j * np.interp(ts, tg, xg.imag)
        if out.ndim == 0:
            return complex(out)
        return out

    def scalar_fn(self):
        """Fast scalar-time callable for ODE right-hand sides (no masking:
        the solvers restrict evaluation to the support segment)."""
        if self.kind == RISING:
            amp = math.sqrt(self.bandwidth)
            c = 0.5 * self.bandwidth + 1j * self.phase_rate
            return lambda t: amp * np.exp(c * t)
        if self.kind == DECAYING:
            amp = math.sqrt(self.bandwidth)
            c = -0.5 * self.bandwidth + 1j * self.phase_rate
            return lambda t: amp * np.exp(c * t)
        if self.kind == SQUARE:
            amp = math.sqrt(self.bandwidth)
            p = self.phase_rate
            return lambda t: amp * np.exp(1j * p * t)
        if self.kind == GAUSSIAN:
            w = 1.0 / self.bandwidth
            amp = (w * math.sqrt(math.pi)) ** -0.5
            p = self.phase_rate
            return lambda t: amp * np.exp(-t * t / (2 * w * w) + 1j * p * t)
        tg, xg = self.samples
        return lambda t: complex(np.interp(t, tg, xg.real), np.interp(t, tg, xg.imag))

    # -- norms --------------------------------------------------------------

    def norm_squared(self) -> float:
        """Integral of |xi|^2 over the support (exact per kind)."""
        lo, hi = self.support
        if self.kind == RISING:
            g = self.bandwidth
            return math.exp(g * hi) - math.exp(g * lo)
        if self.kind == DECAYING:
            g = self.bandwidth
            return math.exp(-g * lo) - math.exp(-g * hi)
        if self.kind == SQUARE:
            return self.bandwidth * (hi - lo)
        if self.kind == GAUSSIAN:
            w = 1.0 / self.bandwidth
            return 0.5 * (math.erf(hi / w) - math.erf(lo / w))
        tg, xg = self.samples
        return _piecewise_linear_norm2(tg, xg)

    def norm_before(self, t: float) -> float:
        """Fraction of |xi|^2 lying before time t (truncation diagnostic)."""
        lo, hi = self.support
        if t <= lo:
            return 0.0
        if self.kind != SAMPLED:
            clipped = TemporalEnvelope(
                self.kind, self.bandwidth, self.phase_rate, (lo, min(t, hi)), None
            )
            return clipped.norm_squared()
        tg, xg = self.samples
        tc = min(t, hi)
        m = tg <= tc
        if not m.any():
            return 0.0
        # include the partial segment up to tc by interpolating a node there
        tt = np.append(tg[m], tc) if tg[m][-1] < tc else tg[m]
        xx = np.append(xg[m], complex(self.value(tc))) if tg[m][-1] < tc else xg[m]
        if tt.size < 2:
            return 0.0
        return _piecewise_linear_norm2(tt, xx)

    @property
    def breakpoints(self) -> tuple[float, float]:
        """Times where xi is non-smooth; integrators restart there."""
        return self.support


def _piecewise_linear_norm2(t: np.ndarray, x: np.ndarray) -> float:
    # |linear segment|^2 is quadratic, integrated exactly
    a, b = x[:-1], x[1:]
    dt = np.diff(t)
    seg = (np.abs(a) ** 2 + np.abs(b) ** 2 + (a.conj() * b).real) / 3.0
    return float(np.sum(seg * dt))


def _rising(bandwidth: float, phase_rate: float) -> TemporalEnvelope:
    return TemporalEnvelope(
        RISING, bandwidth, phase_rate, support=(-_EXP_TAIL / bandwidth, 0.0)
    )


def symmetric_pulse(rates: CollectiveRates) -> TemporalEnvelope:
    """Matched rising exponential for the superradiant channel.

    Bandwidth gamma + gamma12, phase rate +lambda12/2 in the global
    convention; the time reverse of symmetric-state emission.
    """
    g = rates.gamma_sym
    assert g > 0.0, "gamma + gamma12 must be positive for valid rates"
    return _rising(g, CLS_PHASE_SIGN * rates.lambda12 / 2.0)


def antisymmetric_pulse(rates: CollectiveRates) -> TemporalEnvelope:
    """Matched rising exponential for the subradiant channel.

    Bandwidth gamma - gamma12 and the opposite phase rate -lambda12/2.
    Raises DegenerateChannel when the subradiant bandwidth closes.
    """
    g = rates.gamma_anti
    if g <= EPS_BAND * rates.gamma:
        raise DegenerateChannel(
            f"gamma - gamma12 = {g:.3e} <= {EPS_BAND}*gamma: the antisymmetric "
            "channel is forbidden at this separation"
        )
    return _rising(g, -CLS_PHASE_SIGN * rates.lambda12 / 2.0)


def square_pulse(duration: float, phase_rate: float = 0.0) -> TemporalEnvelope:
    """Flat envelope of the given duration ending at t = 0."""
    if duration <= 0.0:
        raise DomainError(f"duration = {duration} must be positive")
    return TemporalEnvelope(SQUARE, 1.0 / duration, phase_rate, support=(-duration, 0.0))


def gaussian_pulse(width: float, phase_rate: float = 0.0) -> TemporalEnvelope:
    """Gaussian envelope, |xi|^2 of rms width ~width, centered at t = 0."""
    if width <= 0.0:
        raise DomainError(f"width = {width} must be positive")
    return TemporalEnvelope(
        GAUSSIAN, 1.0 / width, phase_rate, support=(-_GAUSS_TAIL * width, _GAUSS_TAIL * width)
    )


def sampled_pulse(times, values) -> TemporalEnvelope:
    """Envelope from samples on a grid, renormalized to unit norm."""
    t = np.asarray(times, dtype=float)
    x = np.asarray(values, dtype=complex)
    if t.ndim != 1 or t.size < 2 or t.shape != x.shape:
        raise DomainError("sampled envelope needs matching 1-d grids of length >= 2")
    if np.any(np.diff(t) <= 0):
        raise DomainError("sample times must be strictly increasing")
    n2 = _piecewise_linear_norm2(t, x)
    if n2 <= 0.0:
        raise DomainError("sampled envelope has zero norm")
    x = x / math.sqrt(n2)
    return TemporalEnvelope(
        SAMPLED,
        1.0 / (t[-1] - t[0]),
        0.0,
        support=(float(t[0]), float(t[-1])),
        samples=(t, x),
    )


def mode_normalization(rates: CollectiveRates, which: str) -> float:
    """Overlap norm of the delocalized two-dipole photon profile.

    1 + gamma12/gamma for the symmetric pattern, 1 - gamma12/gamma for the
    antisymmetric one.
    """
    ratio = rates.gamma12 / rates.gamma
    if which == "symmetric":
        return 1.0 + ratio
    if which == "antisymmetric":
        return 1.0 - ratio
    raise DomainError(f"which = {which!r} must be 'symmetric' or 'antisymmetric'")


def frequency_profile(env: TemporalEnvelope, omega_grid) -> np.ndarray:
    """Amplitude spectrum f(detuning) = Int xi(t) e^{i*detuning*t} dt.

    Closed-form Lorentzian/sinc/gaussian spectra for the analytic kinds; a
    trapezoid transform of the samples otherwise.  Satisfies
    Int |f|^2 d(detuning) / (2 pi) = 1.
    """
    w = np.asarray(omega_grid, dtype=float)
    if w.size == 0:
        return np.zeros(0, dtype=complex)
    b = w + env.phase_rate
    if env.kind == RISING:
        g = env.bandwidth
        return math.sqrt(g) / (0.5 * g + 1j * b)
    if env.kind == DECAYING:
        g = env.bandwidth
        return math.sqrt(g) / (0.5 * g - 1j * b)
    if env.kind == SQUARE:
        T = 1.0 / env.bandwidth
        out = np.empty(w.shape, dtype=complex)
        small = np.abs(b) * T < 1e-8
        bb = np.where(small, 1.0, b)
        out = (1.0 - np.exp(-1j * bb * T)) / (1j * bb * math.sqrt(T))
        out[small] = math.sqrt(T)
        return out
    if env.kind == GAUSSIAN:
        wdt = 1.0 / env.bandwidth
        amp = (wdt * math.sqrt(math.pi)) ** -0.5
        return amp * math.sqrt(2 * math.pi) * wdt * np.exp(-0.5 * (wdt * b) ** 2) + 0j
    tg, xg = env.samples
    return np.array([trapezoid(xg * np.exp(1j * wi * tg), tg) for wi in w])


def envelope_to_csv_rows(env: TemporalEnvelope, times) -> list[tuple[float, float, float]]:
    """Rows (t, Re xi, Im xi) for envelope export."""
    vals = env.value(times)
    return [(float(t), float(v.real), float(v.imag)) for t, v in zip(times, vals)]
