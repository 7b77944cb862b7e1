"""Evolutionary inverse kinematics with a fixed per-frame budget.

The solver runs a (mu+lambda) strategy per call: rank the population by
weighted pose error, keep the elite fraction unchanged, refill the rest with
blend-crossover children of two rank-biased elites plus Gaussian mutation,
clamp everything to joint limits. One individual always carries the exact
seed, so warm-started solving across frames never regresses.

Two scales anneal with the current error rather than staying fixed: the
seed-centered init scatter (capped at init_sigma) and the mutation magnitude
(capped at mutation_sigma). Mutation directions are drawn from the empirical
spread of the top elites, which tracks the narrow valleys that appear near
wrist singularities; isotropic fixed-sigma mutation stalls there and cannot
polish residuals to millimeter / sub-degree tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import (
    KinematicChain,
    Pose,
    as_config,
    batch_tcp,
    forward_kinematics,
    pose_error,
)
from .transforms import quat_to_matrix

# error-proportional gains for the annealed scales (caps live in IkConfig)
_SIGMA_GAIN = 2.0
_INIT_GAIN = 3.0
# parent rank bias u^3 and the number of top elites shaping mutation steps
_RANK_POWER = 3.0
_COV_CORE = 8


@dataclass(frozen=True)
class IkConfig:
    """Solver budget and scales.

    The default rotation_weight makes one rotation tolerance (0.5 deg) cost
    as much as one position tolerance (1 mm), so neither residual can hide
    behind the other during ranking.
    """

    population_size: int = 120
    generations_per_frame: int = 3
    smoothing_alpha: float = 0.5
    position_tolerance: float = 0.001
    rotation_tolerance: float = 0.0087
    position_weight: float = 1.0
    rotation_weight: float = 0.115
    rng_seed: int = 0
    mutation_sigma: float = 0.05
    elite_fraction: float = 0.2
    init_sigma: float = 0.3

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.generations_per_frame < 1:
            raise ValueError("generations_per_frame must be >= 1")
        if not 0.0 <= self.smoothing_alpha <= 1.0:
            raise ValueError("smoothing_alpha must lie in [0, 1]")
        if self.position_tolerance <= 0 or self.rotation_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if not 0.0 < self.elite_fraction < 1.0:
            raise ValueError("elite_fraction must lie in (0, 1)")

    def to_dict(self) -> dict:
        return {
            "population_size": self.population_size,
            "generations_per_frame": self.generations_per_frame,
            "smoothing_alpha": self.smoothing_alpha,
            "position_tolerance": self.position_tolerance,
            "rotation_tolerance": self.rotation_tolerance,
            "position_weight": self.position_weight,
            "rotation_weight": self.rotation_weight,
            "rng_seed": self.rng_seed,
            "mutation_sigma": self.mutation_sigma,
            "elite_fraction": self.elite_fraction,
            "init_sigma": self.init_sigma,
        }

    @staticmethod
    def from_dict(d: dict) -> "IkConfig":
        return IkConfig(**d)


@dataclass(frozen=True)
class IkSolution:
    q: np.ndarray
    position_residual: float
    rotation_residual: float
    reachable: bool
    generations_used: int
    fitness_trace: tuple[float, ...] = ()


def fitness(chain: KinematicChain, q, target: Pose, cfg: IkConfig) -> float:
    """Weighted pose error of FK(q) against the target; zero iff exact hit."""
    pos, rot = pose_error(forward_kinematics(chain, q), target)
    return cfg.position_weight * pos + cfg.rotation_weight * rot


def smooth(previous, solved, alpha: float) -> np.ndarray:
    """Per-joint blend alpha*previous + (1-alpha)*solved."""
    previous = np.asarray(previous, dtype=float)
    solved = np.asarray(solved, dtype=float)
    if previous.shape != solved.shape:
        raise ValueError(f"config length mismatch: {previous.shape} vs {solved.shape}")
    return alpha * previous + (1.0 - alpha) * solved


class Solver:
    """Owns its RNG and scratch population; one instance per session."""

    def __init__(self, chain: KinematicChain, cfg: IkConfig | None = None):
        self.chain = chain
        self.cfg = cfg if cfg is not None else IkConfig()
        self.rng = np.random.default_rng(self.cfg.rng_seed)
        self._lo = chain.limits_lo
        self._hi = chain.limits_hi

    def _batch_fitness(self, pop, target_p, target_R) -> np.ndarray:
        pos, rot = batch_tcp(self.chain, pop)
        pos_err = np.linalg.norm(pos - target_p, axis=1)
        # angle of R_i^T * R_target via the trace identity
        cos = 0.5 * (np.einsum("nji,ji->n", rot, target_R) - 1.0)
        rot_err = np.arccos(np.clip(cos, -1.0, 1.0))
        return self.cfg.position_weight * pos_err + self.cfg.rotation_weight * rot_err

    def solve(self, target: Pose, seed) -> IkSolution:
        cfg = self.cfg
        rng = self.rng
        seed = np.clip(as_config(self.chain, seed), self._lo, self._hi)
        n = cfg.population_size
        nj = len(self.chain)
        n_elite = min(max(1, int(round(cfg.elite_fraction * n))), n - 1)

        target_p = target.position
        target_R = quat_to_matrix(target.orientation)

        seed_fit = float(self._batch_fitness(seed[None, :], target_p, target_R)[0])
        init_sigma = min(cfg.init_sigma, _INIT_GAIN * seed_fit)
        pop = seed + rng.normal(0.0, init_sigma, (n, nj))
        pop[0] = seed
        np.clip(pop, self._lo, self._hi, out=pop)

        trace = []
        for _ in range(cfg.generations_per_frame):
            fit = self._batch_fitness(pop, target_p, target_R)
            order = np.argsort(fit, kind="stable")
            pop = pop[order]
            best_f = float(fit[order[0]])
            trace.append(best_f)

            elites = pop[:n_elite]
            k = n - n_elite
            ia = np.floor(n_elite * rng.random(k) ** _RANK_POWER).astype(int)
            ib = np.floor(n_elite * rng.random(k) ** _RANK_POWER).astype(int)
            u = rng.random((k, 1))
            children = u * elites[ia] + (1.0 - u) * elites[ib]

            sigma = min(cfg.mutation_sigma, _SIGMA_GAIN * best_f)
            core = elites[: min(_COV_CORE, n_elite)]
            dev = core - core.mean(axis=0)
            w = rng.normal(0.0, 1.0, (k, core.shape[0])) / np.sqrt(core.shape[0])
            step = w @ dev
            iso = rng.normal(0.0, 1.0, (k, nj))
            norms = np.linalg.norm(step, axis=1, keepdims=True)
            degenerate = (norms < 1e-15).ravel()
            step[degenerate] = iso[degenerate]
            norms = np.linalg.norm(step, axis=1, keepdims=True)
            magnitude = np.linalg.norm(rng.normal(0.0, 1.0, (k, nj)), axis=1, keepdims=True)
            children += step / norms * magnitude * sigma

            np.clip(children, self._lo, self._hi, out=children)
            pop = np.vstack([elites, children])

        fit = self._batch_fitness(pop, target_p, target_R)
        best = int(np.argmin(fit))
        trace.append(float(fit[best]))
        q = pop[best].copy()

        pos_res, rot_res = pose_error(forward_kinematics(self.chain, q), target)
        reachable = (
            pos_res <= cfg.position_tolerance and rot_res <= cfg.rotation_tolerance
        )
        return IkSolution(
            q=q,
            position_residual=pos_res,
            rotation_residual=rot_res,
            reachable=reachable,
            generations_used=cfg.generations_per_frame,
            fitness_trace=tuple(trace),
        )


def solve(chain: KinematicChain, target: Pose, seed, cfg: IkConfig | None = None) -> IkSolution:
    """One solver call as a pure function of (chain, target, seed, cfg)."""
    return Solver(chain, cfg).solve(target, seed)
