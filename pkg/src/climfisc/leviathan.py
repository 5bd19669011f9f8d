"""Per-country Leviathan taxes and the ranked revenue-replacement curve.

The short-run Leviathan tax is the carbon tax whose revenue at current
emissions equals all other tax revenue: T0 = revenue share / emission
intensity. The long-run variant lets emissions respond linearly to the
tax, so the revenue condition becomes T * (1 - eps * T) = T0. Revenue
along that curve peaks at 1/(4*eps); when T0 exceeds the peak, no tax
can replace the revenue and the result is infeasible. Infeasibility is
reported as such (math.inf, "INF" in CSV output), never silently capped.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError
from .wdi_store import CountryPanel, intensity_and_share

DEFAULT_EFFICACY = 0.0013  # fraction of emissions removed per US$/t

INFEASIBLE = math.inf


@dataclass(frozen=True)
class LeviathanRecord:
    country: str
    short_run_tax: float  # US$/tCO2eq
    long_run_tax: float  # US$/tCO2eq, inf when replacement is infeasible
    emission_share: float  # fraction of panel total
    cumulative_emission_share: float  # after ranking by short-run tax

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.long_run_tax)


def short_run_leviathan(revenue_share: float, intensity: float) -> float:
    """Revenue share of GDP divided by emission intensity (t per US$)."""
    if intensity <= 0.0:
        raise DataError(f"intensity {intensity} leaves no emissions to tax")
    if revenue_share < 0.0:
        raise DataError(f"negative revenue share {revenue_share}")
    return revenue_share / intensity


def long_run_leviathan(short_run: float, efficacy: float = DEFAULT_EFFICACY) -> float:
    """Smaller positive root of T * (1 - efficacy * T) = short_run.

    Uses the rationalized form 2*T0 / (1 + sqrt(1 - 4*eps*T0)), which is
    stable as efficacy -> 0 and reduces exactly to T0 at 0. Returns inf
    when 4*eps*T0 > 1 (required revenue above the revenue-curve peak).
    """
    if short_run <= 0.0:
        raise DataError(f"short-run tax {short_run} must be positive")
    if not 0.0 <= efficacy < 1.0:
        raise DataError(f"efficacy {efficacy} outside [0, 1)")
    if efficacy == 0.0:
        return short_run
    discriminant = 1.0 - 4.0 * efficacy * short_run
    if discriminant < 0.0:
        return INFEASIBLE
    return 2.0 * short_run / (1.0 + math.sqrt(discriminant))


def leviathan_curve(
    panel: CountryPanel, year: int, efficacy: float = DEFAULT_EFFICACY
) -> list[LeviathanRecord]:
    """All complete countries ranked ascending by short-run tax.

    Emission shares are fractions of the panel total; the cumulative
    share accumulates along the ranking, ending at 1.
    """
    countries = panel.countries(year)
    if not countries:
        raise DataError(f"panel has no complete records for {year}")
    total_emissions = sum(panel.records[(c, year)].ghg_emissions for c in countries)

    ranked = []
    for country in countries:
        intensity, share = intensity_and_share(panel, country, year)
        short_run = short_run_leviathan(share, intensity)
        ranked.append((short_run, country))
    ranked.sort()

    records = []
    cumulative = 0.0
    for short_run, country in ranked:
        emission_share = panel.records[(country, year)].ghg_emissions / total_emissions
        cumulative += emission_share
        records.append(
            LeviathanRecord(
                country=country,
                short_run_tax=short_run,
                long_run_tax=long_run_leviathan(short_run, efficacy),
                emission_share=emission_share,
                cumulative_emission_share=cumulative,
            )
        )
    return records


def write_curve_csv(
    records: list[LeviathanRecord], path: str | Path, manifest_hash: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        if manifest_hash:
            handle.write(f"# manifest={manifest_hash}\n")
        writer = csv.writer(handle)
        writer.writerow(
            ["country", "short_run_tax", "long_run_tax", "emission_share", "cumulative_share"]
        )
        for r in records:
            long_run = "INF" if not r.feasible else repr(r.long_run_tax)
            writer.writerow(
                [r.country, repr(r.short_run_tax), long_run, repr(r.emission_share), repr(r.cumulative_emission_share)]
            )
