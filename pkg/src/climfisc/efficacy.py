"""Carbon-tax efficacy per scenario, aggregated per model.

Efficacy of a scenario is the percent CO2 emission reduction from
baseline in a reference year divided by the carbon price in that year,
in % per (US$/tCO2). Per-model rows report the unweighted mean over
scenarios and the standard error of that mean.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean

from . import units
from .errors import DegenerateBaseline, MissingObservation, ObservationExcluded
from .pairing import PairedScenario, relative_reduction

DEFAULT_REFERENCE_YEAR = 2030
GLOBAL_REGION = "World"


@dataclass(frozen=True)
class EfficacyObservation:
    model: str
    scenario: str
    region: str
    year: int
    efficacy: float  # % per (US$/tCO2)


@dataclass(frozen=True)
class Exclusion:
    model: str
    scenario: str
    region: str
    reason: str


@dataclass(frozen=True)
class ModelEfficacy:
    model: str
    n: int
    mean: float
    standard_error: float
    zero_variance: bool = False  # n == 1, spread unknown


def scenario_efficacy(
    pair: PairedScenario, year: int = DEFAULT_REFERENCE_YEAR
) -> EfficacyObservation:
    """Efficacy of one paired scenario at ``year``.

    Raises ObservationExcluded with a reason when the price is missing or
    nonpositive, the emission data is incomplete, or the baseline is
    degenerate. Negative reductions are kept.
    """
    price = pair.policy_value(units.CARBON_PRICE, year)
    if price is None:
        raise ObservationExcluded(f"missing carbon price at {year}")
    if price <= 0.0:
        raise ObservationExcluded(f"nonpositive price {price} at {year}")
    try:
        reduction = relative_reduction(pair, units.GROSS_EMISSIONS, year)
    except MissingObservation as exc:
        raise ObservationExcluded(str(exc)) from None
    except DegenerateBaseline as exc:
        raise ObservationExcluded(str(exc)) from None
    value = reduction / price
    if not math.isfinite(value):
        raise ObservationExcluded(f"non-finite efficacy from reduction {reduction}, price {price}")
    return EfficacyObservation(
        model=pair.model,
        scenario=pair.policy,
        region=pair.region,
        year=year,
        efficacy=value,
    )


def collect_efficacy(
    pairs: list[PairedScenario],
    year: int = DEFAULT_REFERENCE_YEAR,
    region: str = GLOBAL_REGION,
) -> tuple[list[EfficacyObservation], list[Exclusion]]:
    """All observations for pairs in ``region``, plus the exclusion log."""
    observations = []
    exclusions = []
    for pair in pairs:
        if pair.region != region:
            continue
        try:
            observations.append(scenario_efficacy(pair, year))
        except ObservationExcluded as exc:
            exclusions.append(
                Exclusion(model=pair.model, scenario=pair.policy, region=pair.region, reason=exc.reason)
            )
    return observations, exclusions


def model_efficacy(observations: list[EfficacyObservation]) -> list[ModelEfficacy]:
    """Per-model count, mean, and standard error, sorted descending by mean.

    The standard error is the sample standard deviation over sqrt(n); a
    single observation yields 0 and carries the zero-variance flag.
    Values are aggregated in sorted order, so the result is exactly
    invariant to observation ordering.
    """
    grouped: dict[str, list[float]] = {}
    for obs in observations:
        grouped.setdefault(obs.model, []).append(obs.efficacy)
    rows = []
    for model, values in grouped.items():
        values.sort()
        n = len(values)
        mean = fmean(values)
        if n > 1:
            variance = sum((v - mean) ** 2 for v in values) / (n - 1)
            se = math.sqrt(variance / n)
            rows.append(ModelEfficacy(model=model, n=n, mean=mean, standard_error=se))
        else:
            rows.append(
                ModelEfficacy(model=model, n=1, mean=mean, standard_error=0.0, zero_variance=True)
            )
    rows.sort(key=lambda r: (-r.mean, r.model))
    return rows


def write_model_table_csv(
    rows: list[ModelEfficacy], path: str | Path, manifest_hash: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        if manifest_hash:
            handle.write(f"# manifest={manifest_hash}\n")
        writer = csv.writer(handle)
        writer.writerow(["model", "n", "mean_pct_per_usd", "se_pct_per_usd", "zero_variance"])
        for row in rows:
            writer.writerow(
                [row.model, row.n, repr(row.mean), repr(row.standard_error), int(row.zero_variance)]
            )


def load_model_table_csv(path: str | Path) -> list[ModelEfficacy]:
    """Read a per-model table back, e.g. to score it against pooled evidence."""
    rows = []
    with open(path, newline="", encoding="utf-8-sig") as handle:
        reader = csv.DictReader(line for line in handle if not line.startswith("#"))
        for record in reader:
            n = int(record.get("n", "1"))
            rows.append(
                ModelEfficacy(
                    model=record["model"],
                    n=n,
                    mean=float(record["mean_pct_per_usd"]),
                    standard_error=float(record["se_pct_per_usd"]),
                    zero_variance=n == 1,
                )
            )
    return rows


def write_exclusions_csv(
    exclusions: list[Exclusion], path: str | Path, manifest_hash: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        if manifest_hash:
            handle.write(f"# manifest={manifest_hash}\n")
        writer = csv.writer(handle)
        writer.writerow(["model", "scenario", "region", "reason"])
        for exc in exclusions:
            writer.writerow([exc.model, exc.scenario, exc.region, exc.reason])
