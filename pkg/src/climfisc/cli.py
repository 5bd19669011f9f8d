"""Command-line front end: ingest -> pair -> efficacy -> skill -> leviathan
-> fiscal tables, with a reproducible run manifest per invocation.

Every subcommand writes its artifacts into --out plus a manifest.json
recording the config, input content hashes, and tool version. All
artifacts embed the manifest hash; reruns on identical inputs and config
are byte-identical except for the manifest timestamp.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, efficacy, fiscal, leviathan, pairing, skill
from .errors import ClimfiscError, ConfigError, DataError
from .manifest import build_manifest, write_manifest
from .scenario_store import (
    ScenarioStore,
    default_variable_mapping,
    list_models,
    list_scenarios,
    load_scenario_database,
    load_variable_mapping,
)
from .wdi_store import IndicatorCodes, load_indicator_panel

CONFIG_DIR_ENV = "CLIMFISC_CONFIG_DIR"

_CONFIG_DIR_FILES = {
    "mapping": "variable_mapping.txt",
    "estimates": "external_estimates.csv",
    "pair_map": "pair_map.csv",
}


def _config_dir_fallback(kind: str) -> Path | None:
    """Path inside $CLIMFISC_CONFIG_DIR for a default-able input, if present."""
    base = os.environ.get(CONFIG_DIR_ENV)
    if not base:
        return None
    candidate = Path(base) / _CONFIG_DIR_FILES[kind]
    return candidate if candidate.is_file() else None


def _require_file(path: str | None, flag: str) -> Path:
    if path is None:
        raise ConfigError(f"{flag} is required for this command")
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"{flag}: no such file: {p}")
    return p


def _check_range(value: float, low: float, high: float, flag: str, *, low_open=False, high_open=False) -> float:
    ok_low = value > low if low_open else value >= low
    ok_high = value < high if high_open else value <= high
    if not (ok_low and ok_high):
        raise ConfigError(f"{flag}={value} outside the documented range")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="climfisc",
        description=(
            "Fiscal accounting of stringent climate policy: carbon-tax efficacy "
            "per model, pooled ex-post evidence and model skill scores, Leviathan "
            "taxes per country, and revenue/subsidy shares of GDP."
        ),
        epilog=(
            f"Set ${CONFIG_DIR_ENV} to a directory holding variable_mapping.txt, "
            "external_estimates.csv, and/or pair_map.csv to override the bundled "
            "defaults without passing flags."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="out", help="output directory (default: ./out)")

    scen = argparse.ArgumentParser(add_help=False)
    scen.add_argument("--scenario-db", help="wide-format scenario CSV")
    scen.add_argument("--mapping", help="variable-mapping config (default: bundled)")
    scen.add_argument(
        "--collapse-model-versions",
        action="store_true",
        help="aggregate model versions under the family name",
    )

    pairf = argparse.ArgumentParser(add_help=False)
    pairf.add_argument("--pair-map", help="policy-to-baseline map CSV (default: bundled)")

    wdi = argparse.ArgumentParser(add_help=False)
    wdi.add_argument("--wdi-tax", help="tax revenue share indicator CSV")
    wdi.add_argument("--wdi-ghg", help="GHG emissions indicator CSV (ktCO2eq)")
    wdi.add_argument("--wdi-gdp", help="GDP indicator CSV (current US$)")
    wdi.add_argument("--wdi-tax-code", default=IndicatorCodes.tax_share)
    wdi.add_argument("--wdi-ghg-code", help="indicator code for emissions")
    wdi.add_argument("--wdi-gdp-code", help="indicator code for GDP")
    wdi.add_argument(
        "--efficacy",
        type=float,
        default=leviathan.DEFAULT_EFFICACY,
        help="emission reduction per US$/t as a fraction (default: 0.0013)",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common, scen], help="load and validate the scenario database")
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("pair-suggest", parents=[common, scen], help="advisory baseline suggestions")
    p.set_defaults(handler=cmd_pair_suggest)

    p = sub.add_parser("efficacy", parents=[common, scen, pairf], help="per-model tax efficacy table")
    p.add_argument("--year", type=int, default=efficacy.DEFAULT_REFERENCE_YEAR)
    p.set_defaults(handler=cmd_efficacy)

    p = sub.add_parser("skill", parents=[common], help="pool ex-post estimates, score models")
    p.add_argument("--estimates", help="external estimates CSV (default: bundled)")
    p.add_argument("--model-table", help="per-model efficacy CSV to score (optional)")
    p.add_argument(
        "--convention",
        choices=[skill.CONVENTION_POOLED_DENSITY, skill.CONVENTION_CONVOLVED],
        default=skill.CONVENTION_POOLED_DENSITY,
        help="likelihood convention for the posterior",
    )
    p.set_defaults(handler=cmd_skill)

    p = sub.add_parser("leviathan", parents=[common, wdi], help="per-country Leviathan tax curve")
    p.add_argument("--year", type=int, default=2019, help="snapshot year (default: 2019)")
    p.set_defaults(handler=cmd_leviathan)

    p = sub.add_parser("fiscal-table", parents=[common, scen, pairf], help="stringent-scenario fiscal table")
    p.add_argument("--year", type=int, default=fiscal.DEFAULT_TABLE_YEAR)
    p.add_argument("--threshold", type=float, default=fiscal.DEFAULT_THRESHOLD)
    p.set_defaults(handler=cmd_fiscal_table)

    p = sub.add_parser("regional-panel", parents=[common, scen, pairf], help="per-region revenue and subsidy shares")
    p.add_argument("--model", required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--baseline", help="baseline scenario (default: resolve from pair map)")
    p.add_argument("--years", default="2030,2040,2050", help="comma-separated years")
    p.add_argument("--region-order", help="file with one region per line")
    p.set_defaults(handler=cmd_regional_panel)

    p = sub.add_parser("sweep", parents=[common, scen, pairf], help="stringency sweep for one model")
    p.add_argument("--model", required=True)
    p.add_argument("--year", type=int, default=fiscal.DEFAULT_TABLE_YEAR)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("all", parents=[common, scen, pairf, wdi], help="run the whole pipeline")
    p.add_argument("--year", type=int, default=efficacy.DEFAULT_REFERENCE_YEAR, help="efficacy reference year")
    p.add_argument("--table-year", type=int, default=fiscal.DEFAULT_TABLE_YEAR)
    p.add_argument("--threshold", type=float, default=fiscal.DEFAULT_THRESHOLD)
    p.add_argument("--wdi-year", type=int, default=2019)
    p.add_argument("--estimates", help="external estimates CSV (default: bundled)")
    p.add_argument("--model", help="model for the regional panel and sweep (optional)")
    p.add_argument("--scenario", help="scenario for the regional panel (optional)")
    p.add_argument("--baseline", help="baseline for the regional panel (optional)")
    p.set_defaults(handler=cmd_all)

    return parser


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_store(args) -> tuple[ScenarioStore, list[Path]]:
    db_path = _require_file(args.scenario_db, "--scenario-db")
    inputs = [db_path]
    mapping_path = args.mapping or _config_dir_fallback("mapping")
    if mapping_path is not None:
        mapping_path = _require_file(str(mapping_path), "--mapping")
        mapping = load_variable_mapping(mapping_path)
        inputs.append(mapping_path)
    else:
        mapping = default_variable_mapping()
    store = load_scenario_database(
        db_path, mapping=mapping, collapse_model_versions=args.collapse_model_versions
    )
    return store, inputs


def _resolve_pair_map(args) -> Path:
    path = getattr(args, "pair_map", None) or _config_dir_fallback("pair_map")
    if path is None:
        from importlib import resources

        ref = resources.files("climfisc").joinpath("data", "pair_map.csv")
        with resources.as_file(ref) as bundled:
            return Path(bundled)
    return _require_file(str(path), "--pair-map")


def _resolve_estimates(args) -> Path | None:
    path = getattr(args, "estimates", None) or _config_dir_fallback("estimates")
    if path is None:
        return None  # bundled default
    return _require_file(str(path), "--estimates")


def _write_load_report(store: ScenarioStore, out: Path, digest: str) -> None:
    report = store.report
    out.joinpath("load_report.txt").write_text(
        f"# manifest={digest}\n" + report.to_text() + "\n", encoding="utf-8"
    )
    payload = report.to_dict()
    payload["manifest_hash"] = digest
    payload["provenance"] = store.provenance
    out.joinpath("load_report.json").write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    print(f"load report: {out / 'load_report.txt'}")


def _write_lines(path: Path, lines: list[str], digest: str) -> None:
    body = "\n".join(lines)
    path.write_text(f"# manifest={digest}\n" + body + ("\n" if body else ""), encoding="utf-8")


def cmd_ingest(args) -> int:
    out = _out_dir(args)
    store, inputs = _load_store(args)
    manifest = build_manifest("ingest", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")
    _write_load_report(store, out, digest)
    summary = {
        "manifest_hash": digest,
        "models": list_models(store),
        "scenarios": {m: list_scenarios(store, m) for m in list_models(store)},
        "provenance": store.provenance,
    }
    out.joinpath("store_summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    print(f"stored {store.report.stored_rows} rows from {store.report.data_rows}")
    return 0


def cmd_pair_suggest(args) -> int:
    out = _out_dir(args)
    store, inputs = _load_store(args)
    manifest = build_manifest("pair-suggest", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")
    _write_load_report(store, out, digest)
    suggestions, problems = pairing.suggest_pairs(store)
    pairing.write_suggestions_csv(suggestions, out / "pair_suggestions.csv", digest)
    _write_lines(out / "pair_suggestions_report.txt", problems, digest)
    print(f"{len(suggestions)} suggestions, {len(problems)} models reported")
    return 0


def cmd_efficacy(args) -> int:
    out = _out_dir(args)
    store, inputs = _load_store(args)
    map_path = _resolve_pair_map(args)
    inputs.append(map_path)
    manifest = build_manifest("efficacy", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")
    _write_load_report(store, out, digest)
    pair_map = pairing.load_pair_map(map_path)
    pairs, issues = pairing.apply_pair_map(store, pair_map)
    observations, exclusions = efficacy.collect_efficacy(pairs, year=args.year)
    rows = efficacy.model_efficacy(observations)
    efficacy.write_model_table_csv(rows, out / "efficacy_by_model.csv", digest)
    efficacy.write_exclusions_csv(exclusions, out / "efficacy_exclusions.csv", digest)
    _write_lines(out / "pairing_report.txt", issues, digest)
    print(f"{len(rows)} model rows from {len(observations)} observations")
    return 0


def cmd_skill(args) -> int:
    out = _out_dir(args)
    estimates_path = _resolve_estimates(args)
    inputs = [estimates_path] if estimates_path else []
    model_table = getattr(args, "model_table", None)
    if model_table:
        model_table = _require_file(model_table, "--model-table")
        inputs.append(model_table)
    manifest = build_manifest("skill", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")

    estimates = skill.load_external_estimates(estimates_path)
    pooled = skill.pool_estimates(estimates)
    summary = {
        "manifest_hash": digest,
        "pooled": {
            "mean_pct_per_usd": pooled.mean,
            "se_pct_per_usd": pooled.standard_error,
            "weights": pooled.weights,
        },
        "full_decarbonization_tax_usd_per_tco2": skill.full_decarbonization_tax(pooled),
        "convention": args.convention,
        "n_estimates": len(estimates),
    }
    if model_table:
        models = efficacy.load_model_table_csv(model_table)
        posterior = skill.posterior_model_probabilities(models, pooled, args.convention)
        skill.write_posterior_csv(posterior, out / "model_posterior.csv", digest)
        summary["posterior"] = dict(sorted(posterior.probabilities.items()))
    out.joinpath("skill_summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    print(f"pooled mean {pooled.mean:.4f} %/$ (se {pooled.standard_error:.4f})")
    return 0


def _load_panel(args):
    tax = _require_file(args.wdi_tax, "--wdi-tax")
    ghg = _require_file(args.wdi_ghg, "--wdi-ghg")
    gdp = _require_file(args.wdi_gdp, "--wdi-gdp")
    if not args.wdi_ghg_code or not args.wdi_gdp_code:
        raise ConfigError("--wdi-ghg-code and --wdi-gdp-code are required")
    codes = IndicatorCodes(
        tax_share=args.wdi_tax_code,
        ghg_emissions=args.wdi_ghg_code,
        gdp=args.wdi_gdp_code,
    )
    year = getattr(args, "wdi_year", None) or args.year
    panel = load_indicator_panel(tax, ghg, gdp, codes, year=year)
    return panel, [tax, ghg, gdp], year


def cmd_leviathan(args) -> int:
    out = _out_dir(args)
    _check_range(args.efficacy, 0.0, 1.0, "--efficacy", high_open=True)
    panel, inputs, year = _load_panel(args)
    manifest = build_manifest("leviathan", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")
    records = leviathan.leviathan_curve(panel, year, args.efficacy)
    leviathan.write_curve_csv(records, out / "leviathan_curve.csv", digest)
    coverage = panel.coverage.to_dict()
    coverage["manifest_hash"] = digest
    out.joinpath("wdi_coverage.json").write_text(
        json.dumps(coverage, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    print(f"{len(records)} countries in curve")
    return 0


def cmd_fiscal_table(args) -> int:
    out = _out_dir(args)
    _check_range(args.threshold, 0.0, 100.0, "--threshold", low_open=True)
    store, inputs = _load_store(args)
    map_path = _resolve_pair_map(args)
    inputs.append(map_path)
    manifest = build_manifest("fiscal-table", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")
    _write_load_report(store, out, digest)
    pair_map = pairing.load_pair_map(map_path)
    pairs, issues = pairing.apply_pair_map(store, pair_map)
    rows, diagnostics = fiscal.stringent_model_table(pairs, args.year, args.threshold)
    fiscal.write_fiscal_table_csv(rows, out / "fiscal_table.csv", digest)
    _write_lines(out / "fiscal_table_diagnostics.txt", issues + diagnostics, digest)
    print(f"{len(rows)} model rows (threshold {args.threshold}% in {args.year})")
    return 0


def cmd_regional_panel(args) -> int:
    out = _out_dir(args)
    store, inputs = _load_store(args)
    baseline = args.baseline
    if baseline is None:
        map_path = _resolve_pair_map(args)
        inputs.append(map_path)
        pair_map = pairing.load_pair_map(map_path)
        matches = [
            e.baseline
            for e in pair_map.entries
            if e.model == args.model and e.policy == args.scenario
        ]
        if not matches:
            raise ConfigError(
                f"no --baseline given and the pair map has no entry for "
                f"{args.model}/{args.scenario}"
            )
        baseline = matches[0]
    try:
        years = tuple(int(y) for y in str(args.years).split(",") if y.strip())
    except ValueError:
        raise ConfigError(f"--years must be comma-separated integers, got {args.years!r}") from None
    if not years:
        raise ConfigError("--years is empty")
    region_order = None
    if args.region_order:
        order_path = _require_file(args.region_order, "--region-order")
        inputs.append(order_path)
        region_order = [
            line.strip()
            for line in order_path.read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.startswith("#")
        ]
    manifest = build_manifest("regional-panel", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")
    _write_load_report(store, out, digest)
    rows, diagnostics = fiscal.regional_panel(
        store, args.model, args.scenario, baseline, years, region_order
    )
    fiscal.write_fiscal_table_csv(rows, out / "regional_panel.csv", digest)
    _write_lines(out / "regional_panel_diagnostics.txt", diagnostics, digest)
    print(f"{len(rows)} (region, year) rows")
    return 0


def cmd_sweep(args) -> int:
    out = _out_dir(args)
    store, inputs = _load_store(args)
    map_path = _resolve_pair_map(args)
    inputs.append(map_path)
    manifest = build_manifest("sweep", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")
    _write_load_report(store, out, digest)
    pair_map = pairing.load_pair_map(map_path)
    pairs, _ = pairing.apply_pair_map(store, pair_map)
    points, diagnostics = fiscal.stringency_sweep(pairs, args.model, args.year)
    fiscal.write_sweep_csv(points, out / "sweep_points.csv", digest)
    _write_lines(out / "sweep_diagnostics.txt", diagnostics, digest)
    print(f"{len(points)} sweep points for {args.model}")
    return 0


def cmd_all(args) -> int:
    out = _out_dir(args)
    _check_range(args.threshold, 0.0, 100.0, "--threshold", low_open=True)
    _check_range(args.efficacy, 0.0, 1.0, "--efficacy", high_open=True)
    store, inputs = _load_store(args)
    map_path = _resolve_pair_map(args)
    inputs.append(map_path)
    estimates_path = _resolve_estimates(args)
    if estimates_path:
        inputs.append(estimates_path)
    wdi_given = args.wdi_tax and args.wdi_ghg and args.wdi_gdp
    panel = None
    if wdi_given:
        panel, wdi_inputs, wdi_year = _load_panel(args)
        inputs.extend(wdi_inputs)
    manifest = build_manifest("all", _config_echo(args), inputs, __version__)
    digest = write_manifest(manifest, out / "manifest.json")

    _write_load_report(store, out, digest)
    suggestions, problems = pairing.suggest_pairs(store)
    pairing.write_suggestions_csv(suggestions, out / "pair_suggestions.csv", digest)
    _write_lines(out / "pair_suggestions_report.txt", problems, digest)

    pair_map = pairing.load_pair_map(map_path)
    pairs, issues = pairing.apply_pair_map(store, pair_map)
    _write_lines(out / "pairing_report.txt", issues, digest)

    observations, exclusions = efficacy.collect_efficacy(pairs, year=args.year)
    rows = efficacy.model_efficacy(observations)
    efficacy.write_model_table_csv(rows, out / "efficacy_by_model.csv", digest)
    efficacy.write_exclusions_csv(exclusions, out / "efficacy_exclusions.csv", digest)

    estimates = skill.load_external_estimates(estimates_path)
    pooled = skill.pool_estimates(estimates)
    posterior = skill.posterior_model_probabilities(rows, pooled) if len(rows) >= 1 else None
    summary = {
        "manifest_hash": digest,
        "pooled": {
            "mean_pct_per_usd": pooled.mean,
            "se_pct_per_usd": pooled.standard_error,
            "weights": pooled.weights,
        },
        "full_decarbonization_tax_usd_per_tco2": skill.full_decarbonization_tax(pooled),
        "convention": skill.CONVENTION_POOLED_DENSITY,
        "n_estimates": len(estimates),
    }
    if posterior:
        skill.write_posterior_csv(posterior, out / "model_posterior.csv", digest)
        summary["posterior"] = dict(sorted(posterior.probabilities.items()))
    out.joinpath("skill_summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )

    table_rows, diagnostics = fiscal.stringent_model_table(pairs, args.table_year, args.threshold)
    fiscal.write_fiscal_table_csv(table_rows, out / "fiscal_table.csv", digest)
    _write_lines(out / "fiscal_table_diagnostics.txt", issues + diagnostics, digest)

    if panel is not None:
        records = leviathan.leviathan_curve(panel, wdi_year, args.efficacy)
        leviathan.write_curve_csv(records, out / "leviathan_curve.csv", digest)
        coverage = panel.coverage.to_dict()
        coverage["manifest_hash"] = digest
        out.joinpath("wdi_coverage.json").write_text(
            json.dumps(coverage, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )

    if args.model and args.scenario:
        baseline = args.baseline
        if baseline is None:
            matches = [
                e.baseline
                for e in pair_map.entries
                if e.model == args.model and e.policy == args.scenario
            ]
            if not matches:
                raise ConfigError(
                    f"no baseline known for {args.model}/{args.scenario}; pass --baseline"
                )
            baseline = matches[0]
        panel_rows, panel_diag = fiscal.regional_panel(
            store, args.model, args.scenario, baseline, fiscal.DEFAULT_PANEL_YEARS
        )
        fiscal.write_fiscal_table_csv(panel_rows, out / "regional_panel.csv", digest)
        _write_lines(out / "regional_panel_diagnostics.txt", panel_diag, digest)
    if args.model:
        points, sweep_diag = fiscal.stringency_sweep(pairs, args.model, args.table_year)
        fiscal.write_sweep_csv(points, out / "sweep_points.csv", digest)
        _write_lines(out / "sweep_diagnostics.txt", sweep_diag, digest)

    print(f"pipeline complete; artifacts in {out}")
    return 0


def _config_echo(args) -> dict:
    """Flag values for the manifest, skipping internals."""
    skip = {"handler", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except ClimfiscError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
