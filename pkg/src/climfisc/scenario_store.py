"""IAMC-style wide-format scenario tables: parsing, normalization, queries.

Input is a comma-delimited UTF-8 table with a header row

    Model,Scenario,Region,Variable,Unit,<year>,<year>,...

Quoted fields are allowed. A variable-mapping config selects which source
variables are kept and which canonical variable each one feeds; several
source variables may feed the same canonical variable, in which case their
values are summed year-wise. Empty cells are missing observations. After a
successful load the store is immutable and all queries are pure reads.
"""

from __future__ import annotations

import csv
import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import units
from .errors import ParseError, UnitError

REQUIRED_COLUMNS = ("Model", "Scenario", "Region", "Variable", "Unit")

DEFAULT_MAPPING_RESOURCE = "variable_mapping.txt"


@dataclass(frozen=True, order=True)
class ScenarioKey:
    """Identifies one model run in one region; "World" is the global aggregate."""

    model: str
    scenario: str
    region: str


@dataclass(frozen=True)
class VariableSeries:
    """Annual values of one canonical variable, in its canonical unit.

    Absent years are absent keys; no NaN is ever stored.
    """

    variable: str
    unit: str
    values: dict[int, float]

    def value(self, year: int) -> float | None:
        return self.values.get(year)

    def years(self) -> list[int]:
        return sorted(self.values)


@dataclass
class LoadReport:
    """Row-level accounting for one load.

    Every data row ends up in exactly one bucket, so
    stored_rows + skipped_rows + error_rows == data_rows.
    """

    source: str
    data_rows: int = 0
    stored_rows: int = 0
    skipped_rows: int = 0
    error_rows: int = 0
    skipped_variables: Counter = field(default_factory=Counter)
    errors: list[str] = field(default_factory=list)

    def conserved(self) -> bool:
        return self.stored_rows + self.skipped_rows + self.error_rows == self.data_rows

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "data_rows": self.data_rows,
            "stored_rows": self.stored_rows,
            "skipped_rows": self.skipped_rows,
            "error_rows": self.error_rows,
            "skipped_variables": dict(sorted(self.skipped_variables.items())),
            "errors": list(self.errors),
        }

    def to_text(self) -> str:
        lines = [
            f"load report for {self.source}",
            f"  data rows:    {self.data_rows}",
            f"  stored rows:  {self.stored_rows}",
            f"  skipped rows: {self.skipped_rows}",
            f"  error rows:   {self.error_rows}",
        ]
        if self.skipped_variables:
            lines.append("  skipped variables:")
            for name, count in sorted(self.skipped_variables.items()):
                lines.append(f"    {name}: {count}")
        if self.errors:
            lines.append("  errors:")
            lines.extend(f"    {msg}" for msg in self.errors)
        return "\n".join(lines)


@dataclass(frozen=True)
class VariableMapping:
    """Source-variable to canonical-variable mapping plus a content digest."""

    sources: dict[str, str]
    digest: str

    @classmethod
    def from_pairs(cls, pairs: list[tuple[str, str]]) -> "VariableMapping":
        sources: dict[str, str] = {}
        for source, canonical in pairs:
            if canonical not in units.CANONICAL_VARIABLES:
                raise ParseError(
                    f"mapping target {canonical!r} is not one of {units.CANONICAL_VARIABLES}"
                )
            if source in sources and sources[source] != canonical:
                raise ParseError(f"source variable mapped twice: {source!r}")
            sources[source] = canonical
        payload = "\n".join(f"{s} -> {c}" for s, c in sorted(sources.items()))
        digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
        return cls(sources=sources, digest=digest)

    def canonical_for(self, source_variable: str) -> str | None:
        """Canonical id for a source variable, or None if unmapped.

        Canonical ids always map to themselves so that exported stores
        reload under any mapping.
        """
        hit = self.sources.get(source_variable)
        if hit is not None:
            return hit
        if source_variable in units.CANONICAL_VARIABLES:
            return source_variable
        return None


def load_variable_mapping(path: str | Path) -> VariableMapping:
    """Parse a plain-text mapping file with lines ``source = Canonical``.

    Blank lines and lines starting with ``#`` are ignored.
    """
    pairs = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected 'source = Canonical', got {line!r}")
        source, _, canonical = line.partition("=")
        pairs.append((source.strip(), canonical.strip()))
    if not pairs:
        raise ParseError(f"{path}: mapping file defines no variables")
    return VariableMapping.from_pairs(pairs)


def default_variable_mapping() -> VariableMapping:
    ref = resources.files("climfisc").joinpath("data", DEFAULT_MAPPING_RESOURCE)
    with resources.as_file(ref) as path:
        return load_variable_mapping(path)


@dataclass(frozen=True)
class ScenarioStore:
    """Immutable container of normalized scenario time series."""

    entries: dict[ScenarioKey, dict[str, VariableSeries]]
    provenance: dict[str, str]
    report: LoadReport


def collapse_model_name(name: str) -> str:
    """Strip version suffixes: cut at the first space or '/'.

    "AIM/Hub-Global 2.0" and "AIM 1.1" both collapse to "AIM". Returns
    the input unchanged if the cut would leave nothing.
    """
    cuts = [i for i in (name.find(" "), name.find("/")) if i > 0]
    if not cuts:
        return name
    return name[: min(cuts)]


def _header_indices(header: list[str], source: str) -> tuple[dict[str, int], dict[int, int]]:
    positions = {name: i for i, name in enumerate(header)}
    required = {}
    for name in REQUIRED_COLUMNS:
        if name not in positions:
            raise ParseError(f"{source}: missing required column: {name}")
        required[name] = positions[name]
    year_cols = {}
    for i, name in enumerate(header):
        if name in REQUIRED_COLUMNS:
            continue
        try:
            year_cols[i] = int(name.strip())
        except ValueError:
            raise ParseError(
                f"{source}: header column {name!r} is neither required nor a year"
            ) from None
    return required, year_cols


def load_scenario_database(
    path: str | Path,
    mapping: VariableMapping | None = None,
    collapse_model_versions: bool = False,
) -> ScenarioStore:
    """Load, validate, and normalize a wide-format scenario table.

    Rows whose variable is not in the mapping are skipped and counted.
    Rows with an unconvertible unit or an unparseable cell are collected
    as row-level errors. Conflicting duplicate observations for the same
    (model, scenario, region, source variable, year) abort the load.
    """
    path = Path(path)
    if mapping is None:
        mapping = default_variable_mapping()
    source = str(path)
    report = LoadReport(source=source)

    # (key, source variable, year) -> normalized value, for duplicate detection
    seen: dict[tuple[ScenarioKey, str, int], float] = {}
    acc: dict[ScenarioKey, dict[str, dict[int, float]]] = {}

    with open(path, newline="", encoding="utf-8-sig") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{source}: file is empty") from None
        required, year_cols = _header_indices([h.strip() for h in header], source)

        for lineno, row in enumerate(reader, 2):
            if not row or all(not cell.strip() for cell in row):
                continue
            report.data_rows += 1
            if len(row) > len(header):
                report.error_rows += 1
                report.errors.append(f"line {lineno}: more cells than header columns")
                continue
            row = row + [""] * (len(header) - len(row))

            model = row[required["Model"]].strip()
            scenario = row[required["Scenario"]].strip()
            region = row[required["Region"]].strip()
            variable = row[required["Variable"]].strip()
            unit = row[required["Unit"]].strip()
            if not (model and scenario and region):
                report.error_rows += 1
                report.errors.append(f"line {lineno}: empty model/scenario/region field")
                continue
            if collapse_model_versions:
                model = collapse_model_name(model)

            canonical = mapping.canonical_for(variable)
            if canonical is None:
                report.skipped_rows += 1
                report.skipped_variables[variable] += 1
                continue

            try:
                factor = units.conversion_factor(canonical, unit)
            except UnitError as exc:
                report.error_rows += 1
                report.errors.append(f"line {lineno}: {exc}")
                continue

            cells: list[tuple[int, float]] = []
            bad_cell = None
            for col, year in year_cols.items():
                text = row[col].strip()
                if not text:
                    continue
                try:
                    parsed = float(text)
                except ValueError:
                    bad_cell = f"line {lineno}: unparseable value {text!r} in column {year}"
                    break
                if not math.isfinite(parsed):
                    bad_cell = f"line {lineno}: non-finite value {text!r} in column {year}"
                    break
                cells.append((year, parsed))
            if bad_cell:
                report.error_rows += 1
                report.errors.append(bad_cell)
                continue

            key = ScenarioKey(model=model, scenario=scenario, region=region)
            for year, raw in cells:
                value = raw * factor
                prior = seen.get((key, variable, year))
                if prior is None:
                    seen[(key, variable, year)] = value
                    per_var = acc.setdefault(key, {}).setdefault(canonical, {})
                    per_var[year] = per_var.get(year, 0.0) + value
                elif prior != value:
                    raise ParseError(
                        f"{source}:{lineno}: conflicting duplicate for "
                        f"{key} {variable} {year}: {prior} vs {value}"
                    )
            report.stored_rows += 1

    entries: dict[ScenarioKey, dict[str, VariableSeries]] = {}
    for key, variables in acc.items():
        series = {}
        for canonical, values in variables.items():
            if values:
                series[canonical] = VariableSeries(
                    variable=canonical,
                    unit=units.CANONICAL_UNITS[canonical],
                    values=dict(sorted(values.items())),
                )
        if series:
            entries[key] = series

    provenance = {
        "source": source,
        "source_sha256": hashlib.sha256(path.read_bytes()).hexdigest(),
        "mapping_digest": mapping.digest,
    }
    return ScenarioStore(entries=entries, provenance=provenance, report=report)


def query_series(store: ScenarioStore, key: ScenarioKey, variable: str) -> VariableSeries | None:
    """The normalized series, or None when the key or variable is absent."""
    return store.entries.get(key, {}).get(variable)


def query_value(
    store: ScenarioStore, key: ScenarioKey, variable: str, year: int
) -> float | None:
    series = query_series(store, key, variable)
    if series is None:
        return None
    return series.value(year)


def list_models(store: ScenarioStore) -> list[str]:
    return sorted({key.model for key in store.entries})


def list_scenarios(store: ScenarioStore, model: str) -> list[str]:
    return sorted({key.scenario for key in store.entries if key.model == model})


def list_regions(store: ScenarioStore, model: str, scenario: str) -> list[str]:
    return sorted(
        {
            key.region
            for key in store.entries
            if key.model == model and key.scenario == scenario
        }
    )


def dump_scenario_database(store: ScenarioStore, path: str | Path) -> None:
    """Export to the canonical wide format; reloading round-trips bit-equal.

    Values are written with repr() so floats survive the text round trip
    exactly.
    """
    years = sorted(
        {
            year
            for variables in store.entries.values()
            for series in variables.values()
            for year in series.values
        }
    )
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(list(REQUIRED_COLUMNS) + [str(y) for y in years])
        for key in sorted(store.entries):
            for variable in sorted(store.entries[key]):
                series = store.entries[key][variable]
                cells = [
                    repr(series.values[y]) if y in series.values else "" for y in years
                ]
                writer.writerow(
                    [key.model, key.scenario, key.region, variable, series.unit] + cells
                )
