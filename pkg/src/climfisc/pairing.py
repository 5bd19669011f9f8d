"""Bind policy scenarios to their baselines and compute reductions.

The authoritative mechanism is an explicit pair-map file; the heuristic
suggester only produces advisory output for human review. Suggestions are
written in the same CSV format as the map (plus a confidence column), so a
reviewed suggestion file can be fed straight back in as a map.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from . import units
from .errors import DegenerateBaseline, MissingObservation, NoPairsError, ParseError
from .scenario_store import ScenarioKey, ScenarioStore, list_regions, query_value

# Case-insensitive substrings marking a scenario as a baseline candidate.
BASELINE_MARKERS = ("baseline", "base", "ref", "nopolicy", "npi")


@dataclass(frozen=True)
class PairEntry:
    model: str
    policy: str
    baseline: str


@dataclass(frozen=True)
class PairMap:
    entries: tuple[PairEntry, ...]
    source: str


@dataclass(frozen=True)
class PairSuggestion:
    model: str
    policy: str
    baseline: str
    confidence: float
    low_confidence: bool = False


@dataclass(frozen=True)
class PairedScenario:
    """A policy scenario bound to its baseline for one (model, region)."""

    store: ScenarioStore
    model: str
    region: str
    policy: str
    baseline: str

    def policy_value(self, variable: str, year: int) -> float | None:
        key = ScenarioKey(self.model, self.policy, self.region)
        return query_value(self.store, key, variable, year)

    def baseline_value(self, variable: str, year: int) -> float | None:
        key = ScenarioKey(self.model, self.baseline, self.region)
        return query_value(self.store, key, variable, year)


def build_pair_map(entries: list[tuple[str, str, str]], source: str = "<memory>") -> PairMap:
    """Validate entries; a policy scenario may appear once per model."""
    seen = set()
    out = []
    for model, policy, baseline in entries:
        if (model, policy) in seen:
            raise ParseError(f"{source}: policy scenario listed twice: {model!r} / {policy!r}")
        seen.add((model, policy))
        out.append(PairEntry(model=model, policy=policy, baseline=baseline))
    return PairMap(entries=tuple(out), source=source)


def load_pair_map(path: str | Path) -> PairMap:
    """Read ``model,policy_scenario,baseline_scenario`` CSV.

    Lines starting with ``#`` are comments. A header row and any extra
    trailing columns (such as the suggester's confidence column) are
    tolerated.
    """
    path = Path(path)
    entries = []
    with open(path, newline="", encoding="utf-8-sig") as handle:
        for row in csv.reader(line for line in handle if not line.lstrip().startswith("#")):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 3:
                raise ParseError(f"{path}: expected at least 3 columns, got {row!r}")
            model, policy, baseline = (cell.strip() for cell in row[:3])
            if model.lower() == "model" and policy.lower() == "policy_scenario":
                continue
            entries.append((model, policy, baseline))
    if not entries:
        raise ParseError(f"{path}: pair map has no entries")
    return build_pair_map(entries, source=str(path))


def is_baseline_candidate(scenario: str) -> bool:
    lowered = scenario.lower()
    return any(marker in lowered for marker in BASELINE_MARKERS)


def _shared_prefix_len(a: str, b: str) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def suggest_pairs(store: ScenarioStore) -> tuple[list[PairSuggestion], list[str]]:
    """Advisory baseline suggestions per model, plus a problem report.

    Each policy scenario is matched to the baseline candidate with the
    longest shared name prefix; confidence is that length divided by the
    policy name length. Prefix ties break lexicographically and flag the
    suggestion as low-confidence.
    """
    by_model: dict[str, set[str]] = {}
    for key in store.entries:
        by_model.setdefault(key.model, set()).add(key.scenario)

    suggestions = []
    problems = []
    for model in sorted(by_model):
        scenarios = sorted(by_model[model])
        candidates = [s for s in scenarios if is_baseline_candidate(s)]
        policies = [s for s in scenarios if s not in candidates]
        if not candidates:
            problems.append(f"{model}: no baseline candidate among {len(scenarios)} scenarios")
            continue
        if not policies:
            problems.append(f"{model}: no policy scenarios to pair")
            continue
        for policy in policies:
            scored = sorted(
                candidates,
                key=lambda c: (-_shared_prefix_len(policy, c), c),
            )
            best = scored[0]
            prefix = _shared_prefix_len(policy, best)
            tied = (
                len(scored) > 1
                and _shared_prefix_len(policy, scored[1]) == prefix
            )
            suggestions.append(
                PairSuggestion(
                    model=model,
                    policy=policy,
                    baseline=best,
                    confidence=prefix / len(policy),
                    low_confidence=tied,
                )
            )
    return suggestions, problems


def write_suggestions_csv(
    suggestions: list[PairSuggestion], path: str | Path, manifest_hash: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        if manifest_hash:
            handle.write(f"# manifest={manifest_hash}\n")
        writer = csv.writer(handle)
        writer.writerow(["model", "policy_scenario", "baseline_scenario", "confidence", "low_confidence"])
        for s in suggestions:
            writer.writerow([s.model, s.policy, s.baseline, repr(s.confidence), int(s.low_confidence)])


def apply_pair_map(
    store: ScenarioStore, pair_map: PairMap
) -> tuple[list[PairedScenario], list[str]]:
    """One PairedScenario per map entry and region present on both sides.

    Dangling scenario names and regions missing on the baseline side are
    reported per entry; only an entirely empty result is a hard error.
    """
    pairs = []
    issues = []
    for entry in pair_map.entries:
        policy_regions = list_regions(store, entry.model, entry.policy)
        baseline_regions = set(list_regions(store, entry.model, entry.baseline))
        if not policy_regions:
            issues.append(f"{entry.model}/{entry.policy}: policy scenario not in store")
            continue
        if not baseline_regions:
            issues.append(f"{entry.model}/{entry.baseline}: baseline scenario not in store")
            continue
        for region in policy_regions:
            if region not in baseline_regions:
                issues.append(
                    f"{entry.model}/{entry.policy}: baseline {entry.baseline!r} "
                    f"missing region {region!r}, pair dropped for that region"
                )
                continue
            pairs.append(
                PairedScenario(
                    store=store,
                    model=entry.model,
                    region=region,
                    policy=entry.policy,
                    baseline=entry.baseline,
                )
            )
    pairs.sort(key=lambda p: (p.model, p.policy, p.region))
    if not pairs:
        raise NoPairsError(f"{pair_map.source}: no pairs resolved against the store")
    return pairs, issues


def relative_reduction(pair: PairedScenario, variable: str, year: int) -> float:
    """Percent reduction from baseline: 100 * (baseline - policy) / baseline.

    Positive means reduction; negative values (policy above baseline) are
    legitimate and retained.
    """
    baseline = pair.baseline_value(variable, year)
    policy = pair.policy_value(variable, year)
    if baseline is None or policy is None:
        side = "baseline" if baseline is None else "policy"
        raise MissingObservation(
            f"{pair.model}/{pair.policy} [{pair.region}]: missing {variable} "
            f"at {year} on the {side} side"
        )
    if baseline == 0.0:
        raise DegenerateBaseline(
            f"{pair.model}/{pair.policy} [{pair.region}]: baseline {variable} is 0 at {year}"
        )
    return 100.0 * (baseline - policy) / baseline


def gdp_loss(pair: PairedScenario, year: int) -> float:
    return relative_reduction(pair, units.GDP, year)
