"""Fiscal accounting of stringent climate policy from scenario databases.

Core pieces: an IAMC-style scenario store with unit normalization, a
country indicator panel, policy-to-baseline pairing, carbon-tax efficacy
statistics, inverse-variance pooling with Bayesian model scores,
Leviathan taxes, and revenue/subsidy shares of GDP.
"""

__version__ = "0.1.0"

from .efficacy import EfficacyObservation, ModelEfficacy, model_efficacy, scenario_efficacy
from .errors import (
    ClimfiscError,
    ConfigError,
    DataError,
    DegenerateBaseline,
    MissingCountryError,
    MissingObservation,
    NoPairsError,
    ObservationExcluded,
    ParseError,
    UnitError,
)
from .fiscal import (
    FiscalSummary,
    SweepPoint,
    regional_panel,
    revenue_share,
    stringency_sweep,
    stringent_model_table,
    subsidy_share,
)
from .leviathan import (
    LeviathanRecord,
    leviathan_curve,
    long_run_leviathan,
    short_run_leviathan,
)
from .pairing import (
    PairedScenario,
    PairMap,
    apply_pair_map,
    load_pair_map,
    relative_reduction,
    suggest_pairs,
)
from .scenario_store import (
    ScenarioKey,
    ScenarioStore,
    VariableSeries,
    dump_scenario_database,
    list_models,
    list_scenarios,
    load_scenario_database,
    query_series,
)
from .skill import (
    ExternalEstimate,
    ModelPosterior,
    PooledEstimate,
    full_decarbonization_tax,
    pool_estimates,
    posterior_model_probabilities,
)
from .wdi_store import (
    CountryPanel,
    CountryYearRecord,
    IndicatorCodes,
    global_aggregate,
    intensity_and_share,
    load_indicator_panel,
)
