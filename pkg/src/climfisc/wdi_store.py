"""Country indicator panels: tax revenue share, GHG emissions, GDP.

Input is one long-format CSV per indicator with columns for country code,
indicator code, year, and value (common header spellings are accepted).
A country enters the panel for a year only when all three indicators are
present and pass the range checks; everything else lands in the coverage
report.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError, MissingCountryError, ParseError

DEFAULT_TAX_SHARE_CODE = "GC.TAX.TOTL.GD.ZS"

_COLUMN_ALIASES = {
    "country": {"country", "country code", "country_code", "countryiso3code", "iso3", "economy"},
    "indicator": {"indicator", "indicator code", "indicator_code", "series", "series code"},
    "year": {"year", "time", "date"},
    "value": {"value", "obs_value"},
}


@dataclass(frozen=True)
class IndicatorCodes:
    """Indicator codes expected in each input file."""

    tax_share: str = DEFAULT_TAX_SHARE_CODE
    ghg_emissions: str = ""
    gdp: str = ""


@dataclass(frozen=True)
class CountryYearRecord:
    country: str
    year: int
    tax_revenue_share: float  # fraction of GDP in [0, 1)
    ghg_emissions: float  # ktCO2eq per year, > 0
    gdp: float  # current US$ per year, > 0


@dataclass
class CoverageReport:
    complete: list[str] = field(default_factory=list)
    incomplete: dict[str, list[str]] = field(default_factory=dict)
    rejected: list[str] = field(default_factory=list)
    rows_skipped: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "complete": list(self.complete),
            "incomplete": {k: list(v) for k, v in sorted(self.incomplete.items())},
            "rejected": list(self.rejected),
            "rows_skipped": list(self.rows_skipped),
        }


@dataclass(frozen=True)
class CountryPanel:
    """Immutable panel of complete (country, year) records."""

    records: dict[tuple[str, int], CountryYearRecord]
    coverage: CoverageReport

    def countries(self, year: int) -> list[str]:
        return sorted(c for c, y in self.records if y == year)


def _find_columns(header: list[str], path: str) -> dict[str, int]:
    normalized = [" ".join(h.split()).lower() for h in header]
    out = {}
    for role, aliases in _COLUMN_ALIASES.items():
        for i, name in enumerate(normalized):
            if name in aliases:
                out[role] = i
                break
        else:
            raise ParseError(f"{path}: no column recognized for {role!r} (header: {header})")
    return out


def _read_indicator(path: str | Path, code: str, report: CoverageReport) -> dict[tuple[str, int], float]:
    """Values keyed by (country, year) for one indicator code in one file."""
    path = Path(path)
    values: dict[tuple[str, int], float] = {}
    matched = 0
    with open(path, newline="", encoding="utf-8-sig") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: file is empty") from None
        cols = _find_columns(header, str(path))
        for lineno, row in enumerate(reader, 2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                country = row[cols["country"]].strip()
                indicator = row[cols["indicator"]].strip()
                year_text = row[cols["year"]].strip()
                value_text = row[cols["value"]].strip()
            except IndexError:
                report.rows_skipped.append(f"{path}:{lineno}: short row")
                continue
            if indicator != code:
                continue
            matched += 1
            if not value_text:
                report.rows_skipped.append(f"{path}:{lineno}: empty value")
                continue
            try:
                year = int(year_text)
                value = float(value_text)
            except ValueError:
                report.rows_skipped.append(
                    f"{path}:{lineno}: non-numeric year/value ({year_text!r}, {value_text!r})"
                )
                continue
            if not math.isfinite(value):
                report.rows_skipped.append(f"{path}:{lineno}: non-finite value {value_text!r}")
                continue
            values[(country, year)] = value
    if matched == 0:
        raise DataError(f"{path}: no rows carry indicator code {code!r}")
    return values


def load_indicator_panel(
    tax_path: str | Path,
    ghg_path: str | Path,
    gdp_path: str | Path,
    codes: IndicatorCodes,
    year: int = 2019,
) -> CountryPanel:
    """Build the snapshot panel for one year from three indicator files.

    Tax revenue share arrives in percent of GDP and is stored as a
    fraction. Countries failing the range checks (share outside [0, 1),
    nonpositive emissions or GDP) are rejected and reported, not kept.
    """
    if not codes.ghg_emissions or not codes.gdp:
        raise DataError("indicator codes for emissions and GDP must be supplied")
    report = CoverageReport()
    tax = _read_indicator(tax_path, codes.tax_share, report)
    ghg = _read_indicator(ghg_path, codes.ghg_emissions, report)
    gdp = _read_indicator(gdp_path, codes.gdp, report)

    countries = sorted(
        {c for c, y in tax if y == year}
        | {c for c, y in ghg if y == year}
        | {c for c, y in gdp if y == year}
    )
    records: dict[tuple[str, int], CountryYearRecord] = {}
    for country in countries:
        missing = []
        if (country, year) not in tax:
            missing.append("tax_share")
        if (country, year) not in ghg:
            missing.append("ghg_emissions")
        if (country, year) not in gdp:
            missing.append("gdp")
        if missing:
            report.incomplete[country] = missing
            continue
        share = tax[(country, year)] / 100.0
        emissions = ghg[(country, year)]
        output = gdp[(country, year)]
        problems = []
        if not 0.0 <= share < 1.0:
            problems.append(f"tax share {share} outside [0, 1)")
        if emissions <= 0.0:
            problems.append(f"nonpositive emissions {emissions}")
        if output <= 0.0:
            problems.append(f"nonpositive GDP {output}")
        if problems:
            report.rejected.append(f"{country} {year}: " + "; ".join(problems))
            continue
        records[(country, year)] = CountryYearRecord(
            country=country,
            year=year,
            tax_revenue_share=share,
            ghg_emissions=emissions,
            gdp=output,
        )
        report.complete.append(country)
    return CountryPanel(records=records, coverage=report)


def intensity_and_share(
    panel: CountryPanel, country: str, year: int
) -> tuple[float, float]:
    """Emission intensity (tCO2eq per US$) and tax revenue share of GDP.

    Emissions are stored in kt, so intensity = emissions * 1000 / GDP.
    """
    record = panel.records.get((country, year))
    if record is None:
        raise MissingCountryError(f"no complete record for {country} in {year}")
    intensity = record.ghg_emissions * 1000.0 / record.gdp
    return intensity, record.tax_revenue_share


def global_aggregate(panel: CountryPanel, year: int) -> tuple[float, float]:
    """Panel-wide intensity and revenue share over complete records only.

    Sums run over countries in sorted order, so the result is invariant
    to input ordering.
    """
    countries = panel.countries(year)
    if not countries:
        raise DataError(f"panel has no complete records for {year}")
    emissions = sum(panel.records[(c, year)].ghg_emissions for c in countries)
    gdp = sum(panel.records[(c, year)].gdp for c in countries)
    revenue = sum(
        panel.records[(c, year)].tax_revenue_share * panel.records[(c, year)].gdp
        for c in countries
    )
    return emissions * 1000.0 / gdp, revenue / gdp
