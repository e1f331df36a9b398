"""Time-resolved populations of the atom pair."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError

TRAJ_HEADER = "t,P_gg,P_s,P_a,P_ee,P_atom1,P_atom2,re_coh_sa,im_coh_sa"


def per_atom_population(p_s, p_a, p_ee=0.0, coherence_sa=0j):
    """Excited-state probability of each atom from collective-basis data.

    |eg> = (|s> + |a>)/sqrt(2), so atom 1 collects the symmetric part of the
    s-a coherence and atom 2 the antisymmetric part; |ee> contributes to both.
    """
    half = 0.5 * (np.asarray(p_s) + np.asarray(p_a))
    cross = np.real(np.asarray(coherence_sa))
    return half + cross + np.asarray(p_ee), half - cross + np.asarray(p_ee)


@dataclass
class StateTrajectory:
    """Populations and the s-a coherence on a time grid (units of 1/gamma)."""

    times: np.ndarray
    P_gg: np.ndarray
    P_s: np.ndarray
    P_a: np.ndarray
    P_ee: np.ndarray
    P_atom1: np.ndarray
    P_atom2: np.ndarray
    coherence_sa: np.ndarray
    states: list | None = field(default=None, repr=False)

    @classmethod
    def from_populations(cls, times, p_gg, p_s, p_a, p_ee, coherence_sa, states=None):
        p1, p2 = per_atom_population(p_s, p_a, p_ee, coherence_sa)
        traj = cls(
            times=np.asarray(times, dtype=float),
            P_gg=np.asarray(p_gg, dtype=float),
            P_s=np.asarray(p_s, dtype=float),
            P_a=np.asarray(p_a, dtype=float),
            P_ee=np.asarray(p_ee, dtype=float),
            P_atom1=np.asarray(p1, dtype=float),
            P_atom2=np.asarray(p2, dtype=float),
            coherence_sa=np.asarray(coherence_sa, dtype=complex),
            states=states,
        )
        traj.validate()
        return traj

    def validate(self, sum_tol: float = 1e-7, range_tol: float = 1e-9):
        """Check population normalization and ranges; raises NumericalError."""
        total = self.P_gg + self.P_s + self.P_a + self.P_ee
        worst = float(np.max(np.abs(total - 1.0))) if total.size else 0.0
        if worst > sum_tol:
            raise NumericalError(f"population sum drifts from 1 by {worst:.2e}")
        for name in ("P_gg", "P_s", "P_a", "P_ee", "P_atom1", "P_atom2"):
            p = getattr(self, name)
            if p.size and (p.min() < -range_tol or p.max() > 1.0 + range_tol):
                raise NumericalError(
                    f"{name} leaves [0, 1]: range [{p.min():.3e}, {p.max():.3e}]"
                )

    def sample(self, i: int) -> dict:
        """One row as a plain dict (useful for spot checks)."""
        return {
            "t": float(self.times[i]),
            "P_gg": float(self.P_gg[i]),
            "P_s": float(self.P_s[i]),
            "P_a": float(self.P_a[i]),
            "P_ee": float(self.P_ee[i]),
            "P_atom1": float(self.P_atom1[i]),
            "P_atom2": float(self.P_atom2[i]),
            "coherence_sa": complex(self.coherence_sa[i]),
        }

    def to_csv_text(self) -> str:
        lines = [TRAJ_HEADER]
        for i in range(self.times.size):
            vals = (
                self.times[i], self.P_gg[i], self.P_s[i], self.P_a[i], self.P_ee[i],
                self.P_atom1[i], self.P_atom2[i],
                self.coherence_sa[i].real, self.coherence_sa[i].imag,
            )
            lines.append(",".join(f"{v:.12g}" for v in vals))
        return "\n".join(lines) + "\n"

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_csv_text())
