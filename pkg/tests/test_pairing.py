import pytest

from climfisc import units
from climfisc.errors import (
    DegenerateBaseline,
    MissingObservation,
    NoPairsError,
    ParseError,
)
from climfisc.pairing import (
    PairedScenario,
    apply_pair_map,
    build_pair_map,
    is_baseline_candidate,
    load_pair_map,
    relative_reduction,
    suggest_pairs,
    write_suggestions_csv,
)
from climfisc.scenario_store import load_scenario_database


def _mini_store(tmp_path, rows):
    text = "Model,Scenario,Region,Variable,Unit,2030\n" + "".join(r + "\n" for r in rows)
    path = tmp_path / "mini.csv"
    path.write_text(text, encoding="utf-8")
    return load_scenario_database(path)


def test_baseline_markers():
    assert is_baseline_candidate("ADVANCE/Baseline")
    assert is_baseline_candidate("EN_NPi2020")
    assert is_baseline_candidate("Reference")
    assert is_baseline_candidate("NoPolicy-2C")
    assert not is_baseline_candidate("ADVANCE/2030/WB2C")


def test_suggestion_confidence_is_shared_prefix_fraction(tmp_path):
    store = _mini_store(
        tmp_path,
        [
            "M,ADVANCE/2030/WB2C,World,Emissions|CO2,Mt CO2/yr,10",
            "M,ADVANCE/Baseline,World,Emissions|CO2,Mt CO2/yr,12",
        ],
    )
    suggestions, problems = suggest_pairs(store)
    assert problems == []
    (s,) = suggestions
    assert (s.model, s.policy, s.baseline) == ("M", "ADVANCE/2030/WB2C", "ADVANCE/Baseline")
    assert s.confidence == 8 / 17  # shared prefix "ADVANCE/"
    assert not s.low_confidence


def test_single_scenario_model_reports(tmp_path):
    store = _mini_store(tmp_path, ["S,OnlyOne,World,Emissions|CO2,Mt CO2/yr,10"])
    suggestions, problems = suggest_pairs(store)
    assert suggestions == []
    assert len(problems) == 1 and problems[0].startswith("S:")


def test_prefix_tie_breaks_lexicographically_and_flags(tmp_path):
    store = _mini_store(
        tmp_path,
        [
            "T,polA,World,Emissions|CO2,Mt CO2/yr,10",
            "T,ref2,World,Emissions|CO2,Mt CO2/yr,11",
            "T,ref1,World,Emissions|CO2,Mt CO2/yr,12",
        ],
    )
    suggestions, _ = suggest_pairs(store)
    (s,) = suggestions
    assert s.baseline == "ref1"
    assert s.confidence == 0.0
    assert s.low_confidence


def test_suggestions_round_trip_as_pair_map(tmp_path, store):
    suggestions, _ = suggest_pairs(store)
    path = tmp_path / "suggested.csv"
    write_suggestions_csv(suggestions, path)
    reloaded = load_pair_map(path)
    assert {(e.model, e.policy) for e in reloaded.entries} == {
        (s.model, s.policy) for s in suggestions
    }


def test_apply_pair_map_one_pair_per_region(store, pairs):
    assert len(pairs) == 12  # 6 entries x 2 regions
    assert [(p.model, p.policy, p.region) for p in pairs[:2]] == [
        ("AlphaMod", "High", "Freedonia"),
        ("AlphaMod", "High", "World"),
    ]


def test_apply_pair_map_reports_dangling_and_missing_regions(tmp_path, store):
    pm = build_pair_map(
        [
            ("AlphaMod", "Low", "Base"),
            ("AlphaMod", "NoSuchScenario", "Base"),
            ("NoSuchModel", "Low", "Base"),
        ]
    )
    resolved, issues = apply_pair_map(store, pm)
    assert len(resolved) == 2
    assert len(issues) == 2
    assert any("NoSuchScenario" in msg for msg in issues)


def test_region_missing_on_baseline_side_drops_that_region(tmp_path):
    store = _mini_store(
        tmp_path,
        [
            "M,Pol,World,Emissions|CO2,Mt CO2/yr,10",
            "M,Pol,Arcadia,Emissions|CO2,Mt CO2/yr,4",
            "M,Base,World,Emissions|CO2,Mt CO2/yr,12",
        ],
    )
    resolved, issues = apply_pair_map(store, build_pair_map([("M", "Pol", "Base")]))
    assert [p.region for p in resolved] == ["World"]
    assert any("Arcadia" in msg for msg in issues)


def test_empty_result_is_hard_error(store):
    pm = build_pair_map([("NoSuchModel", "a", "b")])
    with pytest.raises(NoPairsError):
        apply_pair_map(store, pm)


def test_result_count_independent_of_entry_order(store, pair_map_path):
    pm = load_pair_map(pair_map_path)
    reversed_pm = build_pair_map(
        [(e.model, e.policy, e.baseline) for e in reversed(pm.entries)]
    )
    a, _ = apply_pair_map(store, pm)
    b, _ = apply_pair_map(store, reversed_pm)
    assert a == b


def test_duplicate_policy_entry_rejected():
    with pytest.raises(ParseError, match="twice"):
        build_pair_map([("M", "Pol", "Base1"), ("M", "Pol", "Base2")])


def test_pair_map_file_comments_and_header(tmp_path):
    path = tmp_path / "pm.csv"
    path.write_text(
        "# comment line\nmodel,policy_scenario,baseline_scenario\nM,Pol,Base\n",
        encoding="utf-8",
    )
    pm = load_pair_map(path)
    assert len(pm.entries) == 1


def test_relative_reduction_basic(store, pairs):
    low_world = next(p for p in pairs if (p.model, p.policy, p.region) == ("AlphaMod", "Low", "World"))
    assert relative_reduction(low_world, units.GROSS_EMISSIONS, 2030) == 100.0 * (1000 - 800) / 1000


def test_relative_reduction_threshold_scale(tmp_path):
    store = _mini_store(
        tmp_path,
        [
            "M,Pol,World,Emissions|CO2,Mt CO2/yr,1750",
            "M,Base,World,Emissions|CO2,Mt CO2/yr,35000",
        ],
    )
    (pair,), _ = apply_pair_map(store, build_pair_map([("M", "Pol", "Base")]))
    assert relative_reduction(pair, units.GROSS_EMISSIONS, 2030) == 95.0


def test_negative_reduction_is_kept(tmp_path):
    store = _mini_store(
        tmp_path,
        [
            "M,Pol,World,Emissions|CO2,Mt CO2/yr,36000",
            "M,Base,World,Emissions|CO2,Mt CO2/yr,35000",
        ],
    )
    (pair,), _ = apply_pair_map(store, build_pair_map([("M", "Pol", "Base")]))
    value = relative_reduction(pair, units.GROSS_EMISSIONS, 2030)
    assert value == pytest.approx(-2.857142857142857)


def test_identical_sides_give_zero(store):
    pair = PairedScenario(store=store, model="AlphaMod", region="World", policy="Base", baseline="Base")
    assert relative_reduction(pair, units.GROSS_EMISSIONS, 2030) == 0.0


def test_common_scaling_leaves_reduction_unchanged(tmp_path):
    rows = [
        "M,Pol,World,Emissions|CO2,Mt CO2/yr,80",
        "M,Base,World,Emissions|CO2,Mt CO2/yr,100",
        "N,Pol,World,Emissions|CO2,Gt CO2/yr,0.08",
        "N,Base,World,Emissions|CO2,Gt CO2/yr,0.1",
    ]
    store = _mini_store(tmp_path, rows)
    resolved, _ = apply_pair_map(
        store, build_pair_map([("M", "Pol", "Base"), ("N", "Pol", "Base")])
    )
    values = {p.model: relative_reduction(p, units.GROSS_EMISSIONS, 2030) for p in resolved}
    assert values["M"] == values["N"] == pytest.approx(20.0)


def test_missing_side_raises(store, pairs):
    pair = next(p for p in pairs if (p.model, p.policy, p.region) == ("AlphaMod", "Low", "World"))
    with pytest.raises(MissingObservation):
        relative_reduction(pair, units.SEQUESTRATION, 2050)  # baseline has none
    with pytest.raises(MissingObservation):
        relative_reduction(pair, units.GROSS_EMISSIONS, 2040)


def test_degenerate_baseline(tmp_path):
    store = _mini_store(
        tmp_path,
        [
            "M,Pol,World,Emissions|CO2,Mt CO2/yr,5",
            "M,Base,World,Emissions|CO2,Mt CO2/yr,0",
        ],
    )
    (pair,), _ = apply_pair_map(store, build_pair_map([("M", "Pol", "Base")]))
    with pytest.raises(DegenerateBaseline):
        relative_reduction(pair, units.GROSS_EMISSIONS, 2030)
