"""Daily weather inputs: synthetic generation, CSV ingestion, stochastic perturbation.

Weather is the exogenous driver of the simulation. A seeded generator
produces a sinusoidal annual temperature cycle with bounded noise, wet/dry
precipitation days with an exponential tail, a seasonal solar curve, and a
Hargreaves-style reference evapotranspiration derived from temperature and
radiation. Real data can be substituted through a small CSV format.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, fields

import numpy as np

WEATHER_CSV_HEADER = ["day", "t_mean", "precip", "ref_et", "solar", "vapor"]

# Day-of-year where the temperature and radiation sinusoids peak (late July
# in the northern hemisphere; the curve lags the solstice).
_PEAK_DOY = 201.0

# Latent heat of vaporization, MJ/kg: converts radiation to mm of water.
_LAMBDA_ET = 2.45


@dataclass(frozen=True)
class WeatherDay:
    """One day of climatic inputs.

    t_mean: mean air temperature (degC), precip: precipitation (mm),
    ref_et: reference evapotranspiration (mm), solar: daily solar
    radiation (MJ/m^2), vapor: mean vapor pressure (hPa).
    """

    t_mean: float
    precip: float
    ref_et: float
    solar: float
    vapor: float

    def validate(self) -> None:
        if not math.isfinite(self.t_mean) or not -60.0 <= self.t_mean <= 60.0:
            raise ValueError(f"t_mean must be finite and within [-60, 60] degC, got {self.t_mean}")
        for name in ("precip", "ref_et", "solar", "vapor"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class ClimateProfile:
    """Statistical description of a location's growing-season climate.

    The defaults give mean temperatures climbing from ~13 degC at season
    start to ~27 degC at midsummer, so a 120-day corn season spans roughly
    10-30 degC once noise is added.
    """

    t_mean_annual: float = 13.0     # degC, annual mean
    t_amplitude: float = 14.0       # degC, seasonal swing around the mean
    t_noise: float = 2.5            # degC, bound of daily uniform noise
    rain_prob: float = 0.25         # probability any day is wet
    rain_mm: float = 6.0            # mean precipitation on wet days, mm
    solar_peak: float = 13.5        # midsummer surface radiation, MJ/m^2
    vapor_base: float = 12.0        # baseline vapor pressure, hPa
    season_start_doy: int = 110     # day-of-year the season begins
    et_coeff: float = 2.0           # regional Hargreaves calibration multiplier

    def __post_init__(self) -> None:
        if not 0.0 <= self.rain_prob <= 1.0:
            raise ValueError(f"rain_prob must be in [0, 1], got {self.rain_prob}")
        if self.t_amplitude < 0.0:
            raise ValueError(f"t_amplitude must be >= 0, got {self.t_amplitude}")
        if self.t_noise < 0.0:
            raise ValueError(f"t_noise must be >= 0, got {self.t_noise}")
        for name in ("rain_mm", "solar_peak", "vapor_base", "et_coeff"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def seasonal_t_mean(self, day_index: int) -> float:
        """Noise-free sinusoidal temperature for a season day (the trend line)."""
        doy = (self.season_start_doy + day_index) % 365
        return self.t_mean_annual + self.t_amplitude * math.sin(
            2.0 * math.pi * (doy - (_PEAK_DOY - 365.0 / 4.0)) / 365.0
        )


def generate_weather(day_index: int, profile: ClimateProfile, rng: np.random.Generator) -> WeatherDay:
    """Draw one day of synthetic weather from a seeded stream.

    Identical (day_index, profile, stream state) gives identical output.
    Draw order is fixed: temperature noise, wet/dry flag, precipitation
    amount, cloud factor, vapor factor.
    """
    if day_index < 0 or day_index >= 400:
        raise ValueError(f"day_index must be in [0, 400), got {day_index}")

    doy = (profile.season_start_doy + day_index) % 365
    seasonal = math.sin(2.0 * math.pi * (doy - (_PEAK_DOY - 365.0 / 4.0)) / 365.0)

    t_mean = profile.t_mean_annual + profile.t_amplitude * seasonal
    t_mean += float(rng.uniform(-profile.t_noise, profile.t_noise))
    t_mean = min(60.0, max(-60.0, t_mean))

    wet = float(rng.random()) < profile.rain_prob
    precip = float(rng.exponential(profile.rain_mm)) if wet and profile.rain_mm > 0.0 else 0.0

    clear_sky = profile.solar_peak * (0.7 + 0.3 * seasonal)
    cloud = float(rng.uniform(0.4, 0.8)) if wet else float(rng.uniform(0.8, 1.0))
    solar = max(0.0, clear_sky * cloud)

    # Hargreaves-style reference ET from temperature and radiation; surface
    # radiation understates the extraterrestrial flux the original formula
    # uses, so a regional coefficient scales demand back up.
    ref_et = max(0.0, profile.et_coeff * 0.0135 * (t_mean + 17.8) * solar / _LAMBDA_ET)

    vapor = max(0.0, profile.vapor_base * float(rng.uniform(0.85, 1.15)))

    return WeatherDay(t_mean=t_mean, precip=precip, ref_et=ref_et, solar=solar, vapor=vapor)


def perturb(w: WeatherDay, rng: np.random.Generator, scale: float) -> WeatherDay:
    """Apply bounded random noise to one weather day.

    Non-negative fields get independent multiplicative factors uniform on
    [1 - scale, 1 + scale]; temperature is shifted additively by up to
    +/- scale * 10 degC. scale must lie in [0, 0.5].
    """
    if not 0.0 <= scale <= 0.5:
        raise ValueError(f"scale must be in [0, 0.5], got {scale}")
    t_mean = w.t_mean + float(rng.uniform(-scale * 10.0, scale * 10.0))
    t_mean = min(60.0, max(-60.0, t_mean))
    precip = max(0.0, w.precip * float(rng.uniform(1.0 - scale, 1.0 + scale)))
    ref_et = max(0.0, w.ref_et * float(rng.uniform(1.0 - scale, 1.0 + scale)))
    solar = max(0.0, w.solar * float(rng.uniform(1.0 - scale, 1.0 + scale)))
    vapor = max(0.0, w.vapor * float(rng.uniform(1.0 - scale, 1.0 + scale)))
    return WeatherDay(t_mean=t_mean, precip=precip, ref_et=ref_et, solar=solar, vapor=vapor)


def generate_season(
    duration: int,
    profile: ClimateProfile,
    rng: np.random.Generator,
    noise_scale: float = 0.0,
) -> list[WeatherDay]:
    """Generate a full season; noise_scale > 0 additionally perturbs each day."""
    days = []
    for i in range(duration):
        w = generate_weather(i, profile, rng)
        if noise_scale > 0.0:
            w = perturb(w, rng, noise_scale)
        days.append(w)
    return days


def load_weather_csv(path: str | os.PathLike) -> list[WeatherDay]:
    """Load a weather season from CSV (header: day,t_mean,precip,ref_et,solar,vapor).

    Rows must be numbered consecutively from day 0. Raises FileNotFoundError
    for a missing file and ValueError naming the offending row/field for
    malformed or invariant-violating rows.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected header {','.join(WEATHER_CSV_HEADER)}")
        if [h.strip() for h in header] != WEATHER_CSV_HEADER:
            raise ValueError(
                f"{path}: bad header {','.join(header)!r}, expected {','.join(WEATHER_CSV_HEADER)!r}"
            )
        days: list[WeatherDay] = []
        for row_num, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(WEATHER_CSV_HEADER):
                raise ValueError(f"{path}: row {row_num}: expected {len(WEATHER_CSV_HEADER)} fields, got {len(row)}")
            try:
                day = int(row[0])
                values = [float(v) for v in row[1:]]
            except ValueError as exc:
                raise ValueError(f"{path}: row {row_num}: malformed value ({exc})") from None
            if day != len(days):
                raise ValueError(f"{path}: row {row_num}: expected day {len(days)}, got {day}")
            w = WeatherDay(*values)
            try:
                w.validate()
            except ValueError as exc:
                raise ValueError(f"{path}: row {row_num}: {exc}") from None
            days.append(w)
    return days


def save_weather_csv(days: list[WeatherDay], path: str | os.PathLike) -> None:
    """Write a season to CSV with full float precision (round-trips exactly)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(WEATHER_CSV_HEADER)
        for i, w in enumerate(days):
            writer.writerow([i] + [repr(getattr(w, f.name)) for f in fields(w)])
