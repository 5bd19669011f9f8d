"""Carbon-tax revenue and sequestration-subsidy shares of GDP.

Revenue is price times gross emissions; the sequestration subsidy is
price times gross uptake, reported negative as a public outlay. Both are
expressed as percent of the policy scenario's own GDP. Built on top of
these are the stringent-scenario model table, the per-region panel, and
the stringency sweep.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean

from . import units
from .errors import DataError, DegenerateBaseline, MissingObservation
from .pairing import PairedScenario, relative_reduction
from .scenario_store import ScenarioStore, list_regions

GLOBAL_REGION = "World"
DEFAULT_TABLE_YEAR = 2050
DEFAULT_THRESHOLD = 95.0
DEFAULT_PANEL_YEARS = (2030, 2040, 2050)

# Shares beyond this magnitude are reported but flagged as suspect.
SHARE_SANITY_LIMIT = 100.0

FLAG_SHARE_EXCEEDS_LIMIT = "share-exceeds-100pct-gdp"
FLAG_NEGATIVE_REVENUE = "negative-revenue-gross-net-inconsistency"
FLAG_NO_SEQUESTRATION = "no-sequestration-series-treated-as-zero"


@dataclass(frozen=True)
class FiscalSummary:
    model: str
    scenario: str  # scenario name or "mean over scenarios"
    region: str
    year: int
    carbon_price: float  # US$2010/tCO2
    revenue_share: float  # % of GDP
    subsidy_share: float  # % of GDP, <= 0
    reduction_from_baseline: float | None  # % emissions cut, None if unknown
    n_scenarios: int = 1
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class SweepPoint:
    scenario: str
    reduction_from_baseline: float | None  # %
    carbon_price: float | None  # US$/t
    gdp_loss: float | None  # % from baseline
    gross_emissions: float | None  # MtCO2/yr
    sequestration: float | None  # MtCO2/yr


def revenue_share(price: float, gross_emissions: float, gdp: float) -> float:
    """Tax revenue as % of GDP.

    price * emissions is million US$ ($/t times Mt); GDP arrives in
    billion US$, hence the factor 1000 in the denominator.
    """
    if gdp <= 0.0:
        raise DataError(f"nonpositive GDP {gdp}")
    return 100.0 * (price * gross_emissions) / (gdp * 1000.0)


def subsidy_share(price: float, sequestration: float, gdp: float) -> float:
    """Sequestration subsidy as % of GDP, reported negative."""
    if gdp <= 0.0:
        raise DataError(f"nonpositive GDP {gdp}")
    if sequestration < 0.0:
        raise DataError(f"negative sequestration {sequestration}; gross uptake required")
    return -100.0 * (price * sequestration) / (gdp * 1000.0)


def _share_flags(revenue: float, subsidy: float) -> list[str]:
    flags = []
    if abs(revenue) > SHARE_SANITY_LIMIT or abs(subsidy) > SHARE_SANITY_LIMIT:
        flags.append(FLAG_SHARE_EXCEEDS_LIMIT)
    if revenue < 0.0:
        flags.append(FLAG_NEGATIVE_REVENUE)
    return flags


def _scenario_fiscal(
    pair: PairedScenario, year: int
) -> tuple[float, float, float, float, list[str]]:
    """(price, revenue %, subsidy %, reduction %) for one pair, with flags.

    Raises MissingObservation when price, emissions, or GDP is absent;
    a missing sequestration series is treated as zero uptake and flagged.
    """
    price = pair.policy_value(units.CARBON_PRICE, year)
    emissions = pair.policy_value(units.GROSS_EMISSIONS, year)
    gdp = pair.policy_value(units.GDP, year)
    if price is None or emissions is None or gdp is None:
        missing = [
            name
            for name, value in (("price", price), ("emissions", emissions), ("GDP", gdp))
            if value is None
        ]
        raise MissingObservation(
            f"{pair.model}/{pair.policy} [{pair.region}]: missing {', '.join(missing)} at {year}"
        )
    flags = []
    sequestration = pair.policy_value(units.SEQUESTRATION, year)
    if sequestration is None:
        sequestration = 0.0
        flags.append(FLAG_NO_SEQUESTRATION)
    reduction = relative_reduction(pair, units.GROSS_EMISSIONS, year)
    revenue = revenue_share(price, emissions, gdp)
    subsidy = subsidy_share(price, sequestration, gdp)
    flags.extend(_share_flags(revenue, subsidy))
    return price, revenue, subsidy, reduction, flags


def stringent_model_table(
    pairs: list[PairedScenario],
    year: int = DEFAULT_TABLE_YEAR,
    threshold: float = DEFAULT_THRESHOLD,
) -> tuple[list[FiscalSummary], list[str]]:
    """Per-model fiscal averages over scenarios cutting >= threshold % at ``year``.

    Only global (World) pairs qualify. Rows are sorted descending by
    subsidy share (smallest outlay first). An empty result is returned
    with a diagnostic, not raised.
    """
    per_model: dict[str, list[tuple[float, float, float, float, tuple[str, ...]]]] = {}
    diagnostics = []
    qualifying = 0
    for pair in pairs:
        if pair.region != GLOBAL_REGION:
            continue
        try:
            price, revenue, subsidy, reduction, flags = _scenario_fiscal(pair, year)
        except (MissingObservation, DegenerateBaseline) as exc:
            diagnostics.append(str(exc))
            continue
        if reduction < threshold:
            continue
        qualifying += 1
        per_model.setdefault(pair.model, []).append(
            (price, revenue, subsidy, reduction, tuple(flags))
        )
    if qualifying == 0:
        diagnostics.append(
            f"no scenario reaches a {threshold}% reduction in {year}; table is empty"
        )
        return [], diagnostics

    rows = []
    for model, stats in per_model.items():
        flags = sorted({f for *_, fs in stats for f in fs})
        rows.append(
            FiscalSummary(
                model=model,
                scenario="mean over scenarios",
                region=GLOBAL_REGION,
                year=year,
                carbon_price=fmean(s[0] for s in stats),
                revenue_share=fmean(s[1] for s in stats),
                subsidy_share=fmean(s[2] for s in stats),
                reduction_from_baseline=fmean(s[3] for s in stats),
                n_scenarios=len(stats),
                flags=tuple(flags),
            )
        )
    rows.sort(key=lambda r: (-r.subsidy_share, r.model))
    return rows, diagnostics


def regional_panel(
    store: ScenarioStore,
    model: str,
    scenario: str,
    baseline: str,
    years: tuple[int, ...] = DEFAULT_PANEL_YEARS,
    region_order: list[str] | None = None,
) -> tuple[list[FiscalSummary], list[str]]:
    """Revenue and subsidy shares per (region, year) for one scenario.

    Regions follow ``region_order`` when supplied (unlisted regions come
    after, lexicographically); the default is lexicographic. Regions with
    incomplete data at a year are skipped with a diagnostic.
    """
    regions = list_regions(store, model, scenario)
    if not regions:
        raise DataError(f"{model}/{scenario}: scenario not in store")
    if region_order:
        position = {name: i for i, name in enumerate(region_order)}
        regions.sort(key=lambda r: (position.get(r, len(position)), r))

    rows = []
    diagnostics = []
    for region in regions:
        pair = PairedScenario(
            store=store, model=model, region=region, policy=scenario, baseline=baseline
        )
        for year in years:
            try:
                price, revenue, subsidy, reduction, flags = _scenario_fiscal(pair, year)
            except (MissingObservation, DegenerateBaseline) as exc:
                diagnostics.append(str(exc))
                continue
            rows.append(
                FiscalSummary(
                    model=model,
                    scenario=scenario,
                    region=region,
                    year=year,
                    carbon_price=price,
                    revenue_share=revenue,
                    subsidy_share=subsidy,
                    reduction_from_baseline=reduction,
                    flags=tuple(flags),
                )
            )
    return rows, diagnostics


def stringency_sweep(
    pairs: list[PairedScenario],
    model: str,
    year: int = DEFAULT_TABLE_YEAR,
) -> tuple[list[SweepPoint], list[str]]:
    """One point per global policy scenario of ``model``, sorted by reduction.

    Scenarios with missing variables keep their point with absent fields
    and are reported; points without a reduction sort last.
    """
    model_pairs = [p for p in pairs if p.model == model and p.region == GLOBAL_REGION]
    if not model_pairs:
        raise DataError(f"no global pairs for model {model!r}")
    points = []
    diagnostics = []
    for pair in model_pairs:
        try:
            reduction = relative_reduction(pair, units.GROSS_EMISSIONS, year)
        except (MissingObservation, DegenerateBaseline) as exc:
            reduction = None
            diagnostics.append(str(exc))
        try:
            loss = relative_reduction(pair, units.GDP, year)
        except (MissingObservation, DegenerateBaseline) as exc:
            loss = None
            diagnostics.append(str(exc))
        price = pair.policy_value(units.CARBON_PRICE, year)
        emissions = pair.policy_value(units.GROSS_EMISSIONS, year)
        sequestration = pair.policy_value(units.SEQUESTRATION, year)
        for name, value in (("price", price), ("sequestration", sequestration)):
            if value is None:
                diagnostics.append(f"{model}/{pair.policy}: missing {name} at {year}")
        points.append(
            SweepPoint(
                scenario=pair.policy,
                reduction_from_baseline=reduction,
                carbon_price=price,
                gdp_loss=loss,
                gross_emissions=emissions,
                sequestration=sequestration,
            )
        )
    points.sort(
        key=lambda p: (
            p.reduction_from_baseline is None,
            p.reduction_from_baseline if p.reduction_from_baseline is not None else 0.0,
            p.scenario,
        )
    )
    return points, diagnostics


def _cell(value: float | None) -> str:
    return "" if value is None else repr(value)


def write_fiscal_table_csv(
    rows: list[FiscalSummary], path: str | Path, manifest_hash: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        if manifest_hash:
            handle.write(f"# manifest={manifest_hash}\n")
        writer = csv.writer(handle)
        writer.writerow(
            [
                "model",
                "scenario",
                "region",
                "year",
                "n_scenarios",
                "carbon_price",
                "subsidy_share_pct_gdp",
                "revenue_share_pct_gdp",
                "reduction_from_baseline_pct",
                "flags",
            ]
        )
        for r in rows:
            writer.writerow(
                [
                    r.model,
                    r.scenario,
                    r.region,
                    r.year,
                    r.n_scenarios,
                    repr(r.carbon_price),
                    repr(r.subsidy_share),
                    repr(r.revenue_share),
                    _cell(r.reduction_from_baseline),
                    ";".join(r.flags),
                ]
            )


def write_sweep_csv(
    points: list[SweepPoint], path: str | Path, manifest_hash: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        if manifest_hash:
            handle.write(f"# manifest={manifest_hash}\n")
        writer = csv.writer(handle)
        writer.writerow(
            [
                "scenario",
                "reduction_from_baseline_pct",
                "carbon_price",
                "gdp_loss_pct",
                "gross_emissions_mt",
                "sequestration_mt",
            ]
        )
        for p in points:
            writer.writerow(
                [
                    p.scenario,
                    _cell(p.reduction_from_baseline),
                    _cell(p.carbon_price),
                    _cell(p.gdp_loss),
                    _cell(p.gross_emissions),
                    _cell(p.sequestration),
                ]
            )
