"""Daily crop and soil state transitions.

The day update chains, in fixed order: heat-unit phenology, curve-number
surface runoff, actual evapotranspiration, the soil water balance, the soil
nitrogen balance, stress factors, leaf-area development, radiation-driven
biomass accumulation, and the harvest-index yield estimate. Every operation
is a pure function of explicit inputs, so rollouts are reproducible and
safe to run in parallel.

Process forms follow the usual simplified field-scale treatment: phenology
as accumulated heat units above a base temperature, leaf growth along a
two-anchor logistic development curve with exponential damping near the
canopy ceiling, Beer's-law light interception, a fixed radiation-use
efficiency, an S-shaped harvest index, SCS curve-number runoff, and
first-order nitrogen uptake/denitrification. Percolation, lateral flow and
base flow are neglected; the soil profile is treated as homogeneous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .weather import WeatherDay

__all__ = [
    "CropParams",
    "SoilParams",
    "CropState",
    "SoilState",
    "initial_states",
    "heat_units",
    "fraction_phu",
    "fr_laimax",
    "lai_update",
    "light_interception",
    "potential_biomass_delta",
    "temperature_stress",
    "water_stress",
    "nitrogen_stress",
    "actual_growth",
    "harvest_index",
    "yield_estimate",
    "surface_runoff",
    "update_curve_number",
    "canopy_demand_et",
    "actual_et",
    "soil_water_update",
    "nitrogen_update",
    "step_dynamics",
]

# Exponent floor for bare-soil evaporation: even a bare field (zero leaf
# area) evaporates a small share of the reference demand.
_ET_SOIL_EPS = 0.1


@dataclass(frozen=True)
class CropParams:
    """Corn growth parameters.

    The leaf-development curve fr(x) = x / (x + exp(l1 - l2 * x)) is fitted
    through the two anchor points (fraction of maturity, fraction of max
    leaf area) at construction; a degenerate anchor pair raises ValueError.
    """

    t_base: float = 8.0          # degC, growth stops at or below
    t_opt: float = 25.0          # degC, no temperature stress here
    lai_max: float = 3.0         # canopy ceiling, dimensionless
    fr_phu_sen: float = 0.9      # maturity fraction where senescence starts
    phu_total: float = 1400.0    # degC*day to maturity
    rue: float = 39.0            # kg/ha biomass per MJ/m^2 intercepted
    k_l: float = 0.65            # light extinction coefficient
    hi_opt: float = 0.5          # potential harvest index at maturity
    lai_curve_pt1: tuple[float, float] = (0.15, 0.05)
    lai_curve_pt2: tuple[float, float] = (0.50, 0.95)

    def __post_init__(self) -> None:
        if self.t_opt <= self.t_base:
            raise ValueError(f"t_opt ({self.t_opt}) must exceed t_base ({self.t_base})")
        if self.lai_max <= 0.0:
            raise ValueError(f"lai_max must be > 0, got {self.lai_max}")
        if not 0.0 < self.fr_phu_sen <= 1.0:
            raise ValueError(f"fr_phu_sen must be in (0, 1], got {self.fr_phu_sen}")
        if self.phu_total <= 0.0:
            raise ValueError(f"phu_total must be > 0, got {self.phu_total}")
        if self.rue <= 0.0:
            raise ValueError(f"rue must be > 0, got {self.rue}")
        if self.k_l <= 0.0:
            raise ValueError(f"k_l must be > 0, got {self.k_l}")
        if not 0.0 < self.hi_opt <= 1.0:
            raise ValueError(f"hi_opt must be in (0, 1], got {self.hi_opt}")
        x1, y1 = self.lai_curve_pt1
        x2, y2 = self.lai_curve_pt2
        if not (x1 < x2 and y1 < y2):
            raise ValueError("leaf curve anchors must be strictly increasing in both coordinates")
        if not (0.0 < x1 and 0.0 < y1 < 1.0 and 0.0 < y2 < 1.0):
            raise ValueError("leaf curve anchors must have x > 0 and y in (0, 1)")
        # Two-point fit: y = x / (x + exp(l1 - l2*x))  =>  l1 - l2*x = ln(x*(1-y)/y)
        b1 = math.log(x1 * (1.0 - y1) / y1)
        b2 = math.log(x2 * (1.0 - y2) / y2)
        l2 = (b1 - b2) / (x2 - x1)
        l1 = b1 + l2 * x1
        object.__setattr__(self, "lai_shape_l1", l1)
        object.__setattr__(self, "lai_shape_l2", l2)

    lai_shape_l1: float = 0.0  # derived, set in __post_init__
    lai_shape_l2: float = 0.0  # derived, set in __post_init__


@dataclass(frozen=True)
class SoilParams:
    """Soil water and nitrogen parameters for a homogeneous profile."""

    sw_capacity: float = 100.0        # plant-available water capacity, mm
    sw_init: float = 50.0             # initial soil water, mm
    cn2: float = 78.0                 # moisture-condition-II curve number
    n_init: float = 50.0              # initial soil nitrate pool, kg/ha
    denit_rate: float = 0.02          # 1/day, first-order loss when wet
    denit_sw_threshold: float = 0.9   # fraction of capacity that activates denitrification
    n_uptake_coeff: float = 0.015     # kg N demanded per kg potential biomass growth

    def __post_init__(self) -> None:
        if self.sw_capacity <= 0.0:
            raise ValueError(f"sw_capacity must be > 0, got {self.sw_capacity}")
        if not 0.0 <= self.sw_init <= self.sw_capacity:
            raise ValueError(f"sw_init must be in [0, sw_capacity], got {self.sw_init}")
        if not 30.0 < self.cn2 <= 100.0:
            raise ValueError(f"cn2 must be in (30, 100], got {self.cn2}")
        if self.n_init < 0.0:
            raise ValueError(f"n_init must be >= 0, got {self.n_init}")
        # Rate above 1/day would drain more nitrate than is present.
        if not 0.0 <= self.denit_rate <= 1.0:
            raise ValueError(f"denit_rate must be in [0, 1], got {self.denit_rate}")
        if not 0.0 <= self.denit_sw_threshold <= 1.0:
            raise ValueError(f"denit_sw_threshold must be in [0, 1], got {self.denit_sw_threshold}")
        if self.n_uptake_coeff < 0.0:
            raise ValueError(f"n_uptake_coeff must be >= 0, got {self.n_uptake_coeff}")


@dataclass(frozen=True)
class CropState:
    """Plant state carried day to day."""

    hu_cum: float = 0.0    # accumulated heat units, degC*day
    fr_phu: float = 0.0    # fraction of heat units to maturity
    lai: float = 0.0       # leaf area index
    biomass: float = 0.0   # cumulative total biomass, kg/ha
    e_a: float = 0.0       # actual evapotranspiration on the day, mm
    n_strs: float = 0.0    # nitrogen stress, 0 = none
    w_strs: float = 0.0    # water stress, 0 = none
    t_strs: float = 0.0    # temperature stress, 0 = none
    yld: float = 0.0       # estimated yield to date, kg/ha


@dataclass(frozen=True)
class SoilState:
    """Soil state carried day to day (plus season nitrogen bookkeeping)."""

    sw: float                 # soil water content, mm
    rcn: float                # runoff curve number for the coming day
    dn: float = 0.0           # denitrification on the day, kg/ha
    n_up: float = 0.0         # nitrogen uptake on the day, kg/ha
    n_pool: float = 0.0       # soil nitrate pool, kg/ha
    wb_cum: float = 0.0       # cumulative water balance P + I - Q - Ea, mm
    n_up_cum: float = 0.0     # season uptake to date, kg/ha
    n_demand_cum: float = 0.0  # season optimal demand to date, kg/ha


def initial_states(cp: CropParams, sp: SoilParams) -> tuple[CropState, SoilState]:
    """Emergence-day states: zero leaf area and biomass, configured soil."""
    soil = SoilState(
        sw=sp.sw_init,
        rcn=update_curve_number(sp.cn2, sp.sw_init, sp.sw_capacity),
        n_pool=sp.n_init,
    )
    return CropState(), soil


def heat_units(t_mean: float, p: CropParams) -> float:
    """Daily heat-unit accumulation above the base temperature, floored at 0."""
    hu = t_mean - p.t_base
    return hu if hu > 0.0 else 0.0


def fraction_phu(hu_cum: float, p: CropParams) -> float:
    """Fraction of maturity heat units accumulated; may overshoot 1."""
    return hu_cum / p.phu_total


def fr_laimax(fr_phu: float, p: CropParams) -> float:
    """Fraction of maximum leaf area at a given development fraction.

    Logistic in fr_phu, through both anchor points, monotone, in [0, 1).
    """
    if fr_phu <= 0.0:
        return 0.0
    return fr_phu / (fr_phu + math.exp(p.lai_shape_l1 - p.lai_shape_l2 * fr_phu))


def lai_update(lai_prev: float, fr_phu_prev: float, fr_phu: float, p: CropParams) -> float:
    """Advance leaf area one day.

    Growth phase: the leaf-development increment is damped exponentially as
    the canopy approaches its ceiling. Senescence phase (past fr_phu_sen):
    leaf area declines linearly with remaining development so that
    lai = lai_attained * (1 - fr_phu) / (1 - fr_phu_sen), applied
    incrementally; it never increases and reaches 0 at fr_phu = 1.
    """
    if fr_phu <= p.fr_phu_sen:
        k_f = p.lai_max * (fr_laimax(fr_phu, p) - fr_laimax(fr_phu_prev, p))
        lai = lai_prev + k_f * (1.0 - math.exp(5.0 * (lai_prev - p.lai_max)))
        return min(p.lai_max, max(0.0, lai))
    denom = 1.0 - max(fr_phu_prev, p.fr_phu_sen)
    if denom <= 0.0 or fr_phu >= 1.0:
        return 0.0
    lai = lai_prev * (1.0 - fr_phu) / denom
    return min(lai_prev, max(0.0, lai))


def light_interception(solar: float, lai: float, p: CropParams) -> float:
    """Photosynthetically active radiation intercepted by the canopy (Beer's law)."""
    return 0.5 * solar * (1.0 - math.exp(-p.k_l * lai))


def potential_biomass_delta(h_phosyn: float, p: CropParams) -> float:
    """Unstressed daily biomass increase from intercepted radiation."""
    return p.rue * h_phosyn


def temperature_stress(t_mean: float, p: CropParams) -> float:
    """Temperature growth stress in [0, 1]; 0 at the optimum, 1 at the kill points.

    Below the optimum the stress rises toward 1 at the base temperature;
    above it the same curve is mirrored, with 2*t_opt - t_base as the upper
    kill point.
    """
    if t_mean <= p.t_base:
        return 1.0
    if t_mean > p.t_opt:
        t_mean = 2.0 * p.t_opt - t_mean  # mirror into the sub-optimal branch
        if t_mean <= p.t_base:
            return 1.0
    diff = p.t_opt - t_mean
    if diff == 0.0:
        return 0.0
    ratio = diff / (t_mean - p.t_base)
    stress = 1.0 - math.exp(-0.1054 * ratio * ratio)
    return min(1.0, max(0.0, stress))


def water_stress(e_a: float, e_ref: float) -> float:
    """Water stress from the evapotranspiration deficit, in [0, 1]."""
    if e_ref <= 0.0:
        return 0.0
    ratio = e_a / e_ref
    return 1.0 - (ratio if ratio < 1.0 else 1.0)


def nitrogen_stress(n_supplied: float, n_demand: float) -> float:
    """Nitrogen stress from the uptake shortfall, in [0, 1]."""
    if n_demand <= 0.0:
        return 0.0
    ratio = n_supplied / n_demand
    return 1.0 - (ratio if ratio < 1.0 else 1.0)


def actual_growth(delta_bio_potential: float, n_strs: float, w_strs: float, t_strs: float) -> float:
    """Potential growth limited by the most severe stress factor."""
    worst = n_strs
    if w_strs > worst:
        worst = w_strs
    if t_strs > worst:
        worst = t_strs
    return delta_bio_potential * (1.0 - worst)


def harvest_index(fr_phu: float, p: CropParams) -> float:
    """Potential harvest index for the day; S-shaped in development, < hi_opt."""
    if fr_phu <= 0.0:
        return 0.0
    x = 100.0 * fr_phu
    return p.hi_opt * x / (x + math.exp(11.1 - 10.0 * fr_phu))


def yield_estimate(bio: float, fr_phu: float, hi: float) -> float:
    """Yield from biomass and harvest index, splitting off the root fraction."""
    if hi <= 1.0:
        fr_root = 0.4 - 0.2 * fr_phu
        return (1.0 - fr_root) * bio * hi
    return bio * hi / (hi + 1.0)


def surface_runoff(water_in: float, rcn: float) -> float:
    """SCS curve-number runoff from the day's water input (rain + irrigation)."""
    s = 25.4 * (1000.0 / rcn - 10.0)
    ia = 0.2 * s
    if water_in <= ia:
        return 0.0
    excess = water_in - ia
    return excess * excess / (water_in + 0.8 * s)


def update_curve_number(cn2: float, sw: float, sw_capacity: float) -> float:
    """Moisture-adjusted daily curve number.

    Linear between a dry-soil value of cn2 - 15 and a saturated value of
    min(99, cn2 + 10); both ends kept inside (30, 100] so runoff stays
    defined for any valid cn2.
    """
    low = max(cn2 - 15.0, 31.0)
    high = min(cn2 + 10.0, 99.0)
    return low + (high - low) * (sw / sw_capacity)


def canopy_demand_et(ref_et: float, lai: float) -> float:
    """Canopy-adjusted potential evapotranspiration.

    The cover term 1 - exp(-(0.5 * lai + eps)) scales the reference demand
    to the plant's current leaf area, with a bare-soil evaporation floor.
    """
    if ref_et <= 0.0:
        return 0.0
    return ref_et * (1.0 - math.exp(-(0.5 * lai + _ET_SOIL_EPS)))


def actual_et(ref_et: float, lai: float, sw: float, sp: SoilParams) -> float:
    """Actual evapotranspiration: canopy cover and soil-moisture limited.

    The canopy demand is further throttled by water supply, which ramps
    linearly up to half of capacity. Never exceeds the reference demand or
    the water held in the soil.
    """
    if ref_et <= 0.0 or sw <= 0.0:
        return 0.0
    supply = sw / (0.5 * sp.sw_capacity)
    if supply > 1.0:
        supply = 1.0
    e_a = canopy_demand_et(ref_et, lai) * supply
    if e_a > ref_et:
        e_a = ref_et
    if e_a > sw:
        e_a = sw
    return e_a if e_a > 0.0 else 0.0


def soil_water_update(
    sw: float, precip: float, irrig: float, q: float, e_a: float, sp: SoilParams
) -> tuple[float, float]:
    """Daily water balance; returns (new soil water, overflow above capacity).

    Closure holds exactly: new_sw + overflow - sw = precip + irrig - q - e_a.
    Callers must compute q and e_a so the balance cannot go negative.
    """
    raw = sw + (precip + irrig - q - e_a)
    if raw < 0.0:
        raise ValueError(f"water balance went negative ({raw}); q/e_a ordering violated")
    if raw > sp.sw_capacity:
        return sp.sw_capacity, raw - sp.sw_capacity
    return raw, 0.0


def nitrogen_update(
    n_pool: float, fert: float, delta_bio: float, sw: float, sp: SoilParams
) -> tuple[float, float, float]:
    """Daily nitrogen balance; returns (new pool, uptake, denitrification).

    Demand is proportional to potential growth; uptake is capped by the
    available pool plus the day's fertilizer; denitrification removes a
    first-order share of what remains, but only in wet soil. Mass closure
    holds: new_pool + uptake + denitrification - n_pool = fert.
    """
    avail = n_pool + fert
    demand = sp.n_uptake_coeff * delta_bio
    n_up = demand if demand < avail else avail
    rest = avail - n_up
    dn = sp.denit_rate * rest if sw > sp.denit_sw_threshold * sp.sw_capacity else 0.0
    return rest - dn, n_up, dn


def step_dynamics(
    crop: CropState,
    soil: SoilState,
    w: WeatherDay,
    fert: float,
    irrig: float,
    cp: CropParams,
    sp: SoilParams,
) -> tuple[CropState, SoilState, float, float]:
    """Advance plant and soil one day under the given weather and inputs.

    Returns (crop', soil', yld_delta, overflow). The intra-day order is
    fixed: phenology, runoff (previous day's curve number), actual ET, the
    water balance, the nitrogen balance (demand from potential growth),
    stresses, leaf area, stressed biomass growth, harvest index and yield.
    yld_delta is the non-negative increase of the running yield estimate.
    """
    # Phenology
    hu_cum = crop.hu_cum + heat_units(w.t_mean, cp)
    fr_prev = crop.fr_phu
    fr = hu_cum / cp.phu_total

    # Hydrology: runoff from today's water input, then ET, then the balance
    water_in = w.precip + irrig
    q = surface_runoff(water_in, soil.rcn)
    e_a = actual_et(w.ref_et, crop.lai, soil.sw, sp)
    sw, overflow = soil_water_update(soil.sw, w.precip, irrig, q, e_a, sp)

    # Potential growth drives nitrogen demand
    h_phosyn = light_interception(w.solar, crop.lai, cp)
    dbio_pot = cp.rue * h_phosyn
    demand = sp.n_uptake_coeff * dbio_pot
    n_pool, n_up, dn = nitrogen_update(soil.n_pool, fert, dbio_pot, sw, sp)

    # Stress factors, then stressed growth. Water stress compares the
    # realized flux against the canopy's own demand, not the raw reference,
    # so a young plant in wet soil is not counted as stressed. Nitrogen
    # stress compares season totals (plant N content vs optimal content):
    # a briefly empty pool after a well-supplied history reads as mild
    # stress, not a dead stop.
    n_up_cum = soil.n_up_cum + n_up
    n_demand_cum = soil.n_demand_cum + demand
    t_strs = temperature_stress(w.t_mean, cp)
    w_strs = water_stress(e_a, canopy_demand_et(w.ref_et, crop.lai))
    n_strs = nitrogen_stress(n_up_cum, n_demand_cum)
    lai = lai_update(crop.lai, fr_prev, fr, cp)
    biomass = crop.biomass + actual_growth(dbio_pot, n_strs, w_strs, t_strs)

    # Yield estimate; the running value never decreases
    hi = harvest_index(fr, cp)
    yld_new = yield_estimate(biomass, fr, hi)
    yld_delta = yld_new - crop.yld
    if yld_delta < 0.0:
        yld_delta = 0.0

    new_crop = CropState(
        hu_cum=hu_cum,
        fr_phu=fr,
        lai=lai,
        biomass=biomass,
        e_a=e_a,
        n_strs=n_strs,
        w_strs=w_strs,
        t_strs=t_strs,
        yld=crop.yld + yld_delta,
    )
    new_soil = SoilState(
        sw=sw,
        rcn=update_curve_number(sp.cn2, sw, sp.sw_capacity),
        dn=dn,
        n_up=n_up,
        n_pool=n_pool,
        wb_cum=soil.wb_cum + (w.precip + irrig - q - e_a),
        n_up_cum=n_up_cum,
        n_demand_cum=n_demand_cum,
    )
    return new_crop, new_soil, yld_delta, overflow
