"""DDPM noise schedule and the closed-form forward / reverse steps.

Timesteps are 1-indexed: ``beta[t]``, ``alpha_bar[t]`` refer to step t in
1..T; index 0 holds the convention alpha_bar[0] = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RangeError, ShapeMismatch


@dataclass(frozen=True)
class NoiseSchedule:
    betas: np.ndarray  # shape (T,), step t at betas[t-1]

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=np.float64)
        if betas.ndim != 1 or len(betas) < 1:
            raise RangeError("schedule needs at least one step")
        if np.any(betas <= 0.0) or np.any(betas >= 1.0):
            raise RangeError("all betas must lie strictly in (0, 1)")
        object.__setattr__(self, "betas", betas)

    @property
    def T(self) -> int:
        return len(self.betas)

    @property
    def alphas(self) -> np.ndarray:
        return 1.0 - self.betas

    @property
    def alpha_bars(self) -> np.ndarray:
        """alpha_bar[t] for t in 0..T, with alpha_bar[0] = 1."""
        return np.concatenate([[1.0], np.cumprod(self.alphas)])

    def beta(self, t: int) -> float:
        self._check_t(t)
        return float(self.betas[t - 1])

    def alpha(self, t: int) -> float:
        return 1.0 - self.beta(t)

    def alpha_bar(self, t: int) -> float:
        if not 0 <= t <= self.T:
            raise RangeError(f"t must lie in 0..{self.T}, got {t}")
        return float(self.alpha_bars[t])

    def posterior_variance(self, t: int) -> float:
        """sigma_t^2 = beta_t * (1 - alpha_bar_{t-1}) / (1 - alpha_bar_t)."""
        self._check_t(t)
        return float(
            self.beta(t) * (1.0 - self.alpha_bar(t - 1)) / (1.0 - self.alpha_bar(t))
        )

    def _check_t(self, t: int):
        if not 1 <= t <= self.T:
            raise RangeError(f"t must lie in 1..{self.T}, got {t}")

    def to_dict(self) -> dict:
        return {"betas": self.betas.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseSchedule":
        return cls(np.asarray(data["betas"], dtype=np.float64))


def make_linear_schedule(
    T: int, beta_start: float = 1e-4, beta_end: float = 0.02
) -> NoiseSchedule:
    """Betas linear from beta_start to beta_end inclusive over T steps."""
    if T < 1:
        raise RangeError(f"T must be >= 1, got {T}")
    if not 0.0 < beta_start < beta_end < 1.0:
        raise RangeError(
            f"need 0 < beta_start < beta_end < 1, got ({beta_start}, {beta_end})"
        )
    if T == 1:
        betas = np.array([beta_start], dtype=np.float64)
    else:
        betas = np.linspace(beta_start, beta_end, T, dtype=np.float64)
    return NoiseSchedule(betas)


def q_sample(x0: np.ndarray, t: int, eps: np.ndarray, schedule: NoiseSchedule) -> np.ndarray:
    """Closed-form forward marginal: sqrt(ab_t) x0 + sqrt(1 - ab_t) eps."""
    x0 = np.asarray(x0, dtype=float)
    eps = np.asarray(eps, dtype=float)
    if x0.shape != eps.shape:
        raise ShapeMismatch(f"x0 {x0.shape} vs eps {eps.shape}")
    ab = schedule.alpha_bar(t)
    return np.sqrt(ab) * x0 + np.sqrt(1.0 - ab) * eps


def ddpm_step(
    x_t: np.ndarray,
    t: int,
    eps_tilde: np.ndarray,
    schedule: NoiseSchedule,
    rng: np.random.Generator,
) -> np.ndarray:
    """One reverse DDPM step; the t=1 step is deterministic."""
    x_t = np.asarray(x_t, dtype=float)
    eps_tilde = np.asarray(eps_tilde, dtype=float)
    if x_t.shape != eps_tilde.shape:
        raise ShapeMismatch(f"x_t {x_t.shape} vs eps_tilde {eps_tilde.shape}")
    beta = schedule.beta(t)
    alpha = schedule.alpha(t)
    ab_t = schedule.alpha_bar(t)
    mean = (x_t - beta / np.sqrt(1.0 - ab_t) * eps_tilde) / np.sqrt(alpha)
    if t == 1:
        return mean
    sigma = np.sqrt(schedule.posterior_variance(t))
    return mean + sigma * rng.standard_normal(x_t.shape)


def respace_schedule(schedule: NoiseSchedule, steps: int) -> tuple[np.ndarray, NoiseSchedule]:
    """Evenly select ``steps`` timesteps and build the effective schedule.

    Returns (timesteps, sub_schedule) where timesteps[i] is the original
    1-indexed step backing sub-schedule step i+1, and the sub-schedule's
    betas reproduce the original alpha_bar values at the kept steps.
    """
    if not 1 <= steps <= schedule.T:
        raise RangeError(f"steps must lie in 1..{schedule.T}, got {steps}")
    if steps == 1:
        timesteps = np.array([schedule.T])
    else:
        timesteps = np.unique(np.round(np.linspace(1, schedule.T, steps)).astype(int))
    ab = schedule.alpha_bars
    prev = np.concatenate([[1.0], ab[timesteps[:-1]]])
    betas = 1.0 - ab[timesteps] / prev
    return timesteps, NoiseSchedule(betas)
