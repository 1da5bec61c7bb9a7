"""Episodic control interface over the daily crop simulation.

An episode is one growing season: `reset()` returns the emergence-day
observation, `step(action)` applies one day of fertilizer and irrigation,
and the episode ends after a fixed number of days. The observation is a
fixed-order 14-vector of weather, plant and soil variables; the reward is
the day's yield gain minus the cost of the applied inputs.

Two modes: deterministic (a seed fully determines the season's weather, and
every reset replays it) and stochastic (each reset draws a freshly
perturbed season from the seeded stream, so repeated seasons vary but the
whole run is still reproducible from the seed).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields

import numpy as np

from .dynamics import (
    CropParams,
    CropState,
    SoilParams,
    SoilState,
    initial_states,
    step_dynamics,
)
from .weather import ClimateProfile, WeatherDay, generate_season, load_weather_csv, perturb

OBSERVATION_FIELDS = (
    "t_mean",
    "precip",
    "ref_et",
    "solar",
    "vapor",
    "e_a",
    "wb_cum",
    "rcn",
    "lai",
    "n_up",
    "dn",
    "n_strs",
    "t_strs",
    "w_strs",
)

OBSERVATION_SIZE = len(OBSERVATION_FIELDS)

LOG_COLUMNS = list(OBSERVATION_FIELDS) + ["fert", "irrig", "reward", "yld"]


class EpisodeFinished(RuntimeError):
    """Raised when step() is called after the episode has terminated."""


@dataclass(frozen=True)
class Action:
    """One day of management inputs: fertilizer (kg/ha) and irrigation (mm)."""

    fert: float
    irrig: float


@dataclass(frozen=True)
class RewardParams:
    """Cost coefficients: reward = yield gain - alpha * fert - beta * irrig."""

    alpha: float = 2.43
    beta: float = 0.16

    def __post_init__(self) -> None:
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("reward cost coefficients must be >= 0")


@dataclass(frozen=True)
class EpisodeConfig:
    """Everything needed to reproduce an episode."""

    duration: int = 120
    mode: str = "stochastic"            # "stochastic" | "deterministic"
    seed: int = 0
    climate: ClimateProfile = field(default_factory=ClimateProfile)
    weather_file: str | None = None     # overrides synthetic generation
    crop: CropParams = field(default_factory=CropParams)
    soil: SoilParams = field(default_factory=SoilParams)
    reward: RewardParams = field(default_factory=RewardParams)
    f_max: float = 50.0                 # per-day fertilizer bound, kg/ha
    i_max: float = 50.0                 # per-day irrigation bound, mm
    noise_scale: float = 0.1            # weather perturbation in stochastic mode
    log_path: str | None = None         # if set, each episode log is written here

    def __post_init__(self) -> None:
        if self.duration < 1:
            raise ValueError(f"duration must be >= 1, got {self.duration}")
        if self.mode not in ("stochastic", "deterministic"):
            raise ValueError(f"mode must be 'stochastic' or 'deterministic', got {self.mode!r}")
        if self.f_max < 0.0 or self.i_max < 0.0:
            raise ValueError("action bounds must be >= 0")
        if not 0.0 <= self.noise_scale <= 0.5:
            raise ValueError(f"noise_scale must be in [0, 0.5], got {self.noise_scale}")
        if self.weather_file is None and self.duration > 400:
            raise ValueError("synthetic weather supports at most 400 days; provide a weather file")


def reward(yld_delta: float, a: Action, rp: RewardParams) -> float:
    """Daily reward: yield gain minus input costs (may be negative)."""
    return yld_delta - rp.alpha * a.fert - rp.beta * a.irrig


def observe(crop: CropState, soil: SoilState, w: WeatherDay) -> np.ndarray:
    """Assemble the fixed-order observation vector."""
    return np.array(
        (
            w.t_mean,
            w.precip,
            w.ref_et,
            w.solar,
            w.vapor,
            crop.e_a,
            soil.wb_cum,
            soil.rcn,
            crop.lai,
            soil.n_up,
            soil.dn,
            crop.n_strs,
            crop.t_strs,
            crop.w_strs,
        ),
        dtype=np.float64,
    )


@dataclass
class LogRecord:
    day: int
    obs: np.ndarray
    fert: float
    irrig: float
    reward: float
    yld: float


class EpisodeLog:
    """Per-day trajectory record of one episode."""

    def __init__(self, cfg: EpisodeConfig):
        self.cfg = cfg
        self.records: list[LogRecord] = []

    def append(self, record: LogRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def header_lines(self) -> list[str]:
        lines = [f"# {k} = {v}" for k, v in sorted(flatten_config(self.cfg).items())]
        return lines

    def save(self, path: str | os.PathLike) -> None:
        """Write the log: '# key = value' header block, then one CSV row per day."""
        if not self.records:
            raise ValueError("cannot save an empty episode log")
        with open(path, "w", newline="") as fh:
            for line in self.header_lines():
                fh.write(line + "\n")
            fh.write("day," + ",".join(LOG_COLUMNS) + "\n")
            for r in self.records:
                values = [repr(float(v)) for v in r.obs]
                values += [repr(float(r.fert)), repr(float(r.irrig)), repr(float(r.reward)), repr(float(r.yld))]
                fh.write(f"{r.day}," + ",".join(values) + "\n")


def load_episode_log(path: str | os.PathLike) -> tuple[dict[str, str], list[dict[str, float]]]:
    """Read a saved episode log back into (header metadata, per-day rows)."""
    meta: dict[str, str] = {}
    rows: list[dict[str, float]] = []
    with open(path) as fh:
        header: list[str] | None = None
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = line.split(",")
                continue
            parts = line.split(",")
            rows.append({k: float(v) for k, v in zip(header, parts)})
    if header is None:
        raise ValueError(f"{path}: no column header found")
    return meta, rows


def flatten_config(cfg: EpisodeConfig) -> dict[str, object]:
    """Flat key = value view of a config (used in log headers)."""
    flat: dict[str, object] = {
        "duration": cfg.duration,
        "mode": cfg.mode,
        "seed": cfg.seed,
        "f_max": cfg.f_max,
        "i_max": cfg.i_max,
        "noise_scale": cfg.noise_scale,
    }
    if cfg.weather_file is not None:
        flat["weather_file"] = cfg.weather_file
    else:
        for f in fields(cfg.climate):
            flat[f"climate.{f.name}"] = getattr(cfg.climate, f.name)
    for f in fields(cfg.crop):
        flat[f"crop.{f.name}"] = getattr(cfg.crop, f.name)
    for f in fields(cfg.soil):
        flat[f"soil.{f.name}"] = getattr(cfg.soil, f.name)
    flat["reward.alpha"] = cfg.reward.alpha
    flat["reward.beta"] = cfg.reward.beta
    return flat


class CropEnv:
    """One growing season as an episodic decision process.

    Not safe for concurrent mutation; make one instance per parallel episode.
    """

    def __init__(self, cfg: EpisodeConfig):
        self.cfg = cfg
        self._file_days: list[WeatherDay] | None = None
        if cfg.weather_file is not None:
            days = load_weather_csv(cfg.weather_file)
            if len(days) < cfg.duration:
                raise ValueError(
                    f"weather file has {len(days)} days, episode needs {cfg.duration}"
                )
            self._file_days = days[: cfg.duration]
        self._episode_index = 0
        self._det_weather: list[WeatherDay] | None = None  # cache for deterministic mode
        self._weather: list[WeatherDay] = []
        self._crop: CropState | None = None
        self._soil: SoilState | None = None
        self._day = 0
        self._done = True
        self._started = False
        self.info: dict[str, object] = {}
        self.log: EpisodeLog | None = None

    def _season_weather(self) -> list[WeatherDay]:
        deterministic = self.cfg.mode == "deterministic"
        if deterministic and self._det_weather is not None:
            return self._det_weather
        # Stream key: deterministic mode always replays episode 0's season;
        # stochastic mode advances to a fresh season on every reset.
        episode_key = 0 if deterministic else self._episode_index
        rng = np.random.default_rng(np.random.SeedSequence([self.cfg.seed, episode_key]))
        if self._file_days is not None:
            if deterministic:
                season = list(self._file_days)
            else:
                season = [perturb(w, rng, self.cfg.noise_scale) for w in self._file_days]
        else:
            scale = 0.0 if deterministic else self.cfg.noise_scale
            season = generate_season(self.cfg.duration, self.cfg.climate, rng, scale)
        if deterministic:
            self._det_weather = season
        return season

    def reset(self) -> np.ndarray:
        """Start a new season and return the day-0 observation."""
        self._weather = self._season_weather()
        self._episode_index += 1
        self._crop, self._soil = initial_states(self.cfg.crop, self.cfg.soil)
        self._day = 0
        self._done = False
        self._started = True
        self.log = EpisodeLog(self.cfg)
        self.info = self._build_info(fert=0.0, irrig=0.0, fert_clamped=False,
                                     irrig_clamped=False, overflow=0.0)
        return observe(self._crop, self._soil, self._weather[0])

    def step(self, action: Action | tuple[float, float]) -> tuple[np.ndarray, float, bool, dict]:
        """Apply one day of inputs; returns (obs, reward, done, info).

        Out-of-range inputs are clamped to [0, f_max] x [0, i_max] and the
        clamping is flagged in info. Raises EpisodeFinished after the horizon.
        """
        if not self._started:
            raise RuntimeError("step() called before reset()")
        if self._done:
            raise EpisodeFinished(f"episode already finished after {self.cfg.duration} days")

        if isinstance(action, Action):
            fert_req, irrig_req = action.fert, action.irrig
        else:
            fert_req, irrig_req = float(action[0]), float(action[1])
        fert = min(max(fert_req, 0.0), self.cfg.f_max)
        irrig = min(max(irrig_req, 0.0), self.cfg.i_max)
        fert_clamped = fert != fert_req
        irrig_clamped = irrig != irrig_req

        w = self._weather[self._day]
        obs_before = observe(self._crop, self._soil, w)
        self._crop, self._soil, yld_delta, overflow = step_dynamics(
            self._crop, self._soil, w, fert, irrig, self.cfg.crop, self.cfg.soil
        )
        r = yld_delta - self.cfg.reward.alpha * fert - self.cfg.reward.beta * irrig

        self.log.append(LogRecord(self._day, obs_before, fert, irrig, r, self._crop.yld))
        self._day += 1
        self._done = self._day >= self.cfg.duration
        self.info = self._build_info(fert, irrig, fert_clamped, irrig_clamped, overflow)

        obs = observe(self._crop, self._soil, self._weather[min(self._day, self.cfg.duration - 1)])
        if self._done and self.cfg.log_path is not None:
            self.log.save(self.cfg.log_path)
        return obs, r, self._done, self.info

    def _build_info(self, fert: float, irrig: float, fert_clamped: bool,
                    irrig_clamped: bool, overflow: float) -> dict[str, object]:
        crop, soil = self._crop, self._soil
        return {
            "day": self._day,
            "yld": crop.yld,
            "biomass": crop.biomass,
            "fr_phu": crop.fr_phu,
            "fert_applied": fert,
            "irrig_applied": irrig,
            "fert_clamped": fert_clamped,
            "irrig_clamped": irrig_clamped,
            "overflow": overflow,
            "n_strs": crop.n_strs,
            "t_strs": crop.t_strs,
            "w_strs": crop.w_strs,
            "n_pool": soil.n_pool,
            "sw": soil.sw,
            "sw_capacity": self.cfg.soil.sw_capacity,
        }

    @property
    def done(self) -> bool:
        return self._done

    @property
    def day(self) -> int:
        return self._day

    def save_log(self, path: str | os.PathLike) -> None:
        """Write the current episode's log (requires at least one step)."""
        if self.log is None or len(self.log) == 0:
            raise ValueError("no steps recorded; nothing to save")
        self.log.save(path)


def run_episode(env: CropEnv, policy, collect_log: bool = False):
    """Roll one full episode with policy.act(obs, info); returns the return.

    The policy sees the observation plus the info diagnostics (day index,
    soil internals) exactly as emitted by the environment.
    """
    obs = env.reset()
    total = 0.0
    done = False
    while not done:
        action = policy.act(obs, env.info)
        obs, r, done, _ = env.step(action)
        total += r
    return total
