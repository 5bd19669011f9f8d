"""Shared fixtures: a hand-built scenario database (3 models x 3 scenarios
x 2 regions, mixed units), a matching pair map, and a small country panel.

All oracle values asserted in the tests were computed by hand from these
numbers; change them only together with the tests.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from climfisc.pairing import apply_pair_map, load_pair_map
from climfisc.scenario_store import load_scenario_database
from climfisc.wdi_store import IndicatorCodes, load_indicator_panel

SCENARIO_CSV = """\
Model,Scenario,Region,Variable,Unit,2030,2050
AlphaMod,Base,World,Emissions|CO2,Mt CO2/yr,1000,1000
AlphaMod,Base,World,GDP|MER,billion US$2010/yr,100,120
AlphaMod,Base,Freedonia,Emissions|CO2,Mt CO2/yr,400,400
AlphaMod,Base,Freedonia,GDP|MER,billion US$2010/yr,40,48
AlphaMod,Low,World,Price|Carbon,US$2010/t CO2,50,100
AlphaMod,Low,World,Emissions|CO2,Mt CO2/yr,800,400
AlphaMod,Low,World,GDP|MER,billion US$2010/yr,98,118
AlphaMod,Low,World,Carbon Sequestration|CCS,Mt CO2/yr,,50
AlphaMod,Low,World,Carbon Sequestration|Land Use,Mt CO2/yr,,10
AlphaMod,Low,Freedonia,Price|Carbon,US$2010/t CO2,50,100
AlphaMod,Low,Freedonia,Emissions|CO2,Mt CO2/yr,320,160
AlphaMod,Low,Freedonia,GDP|MER,billion US$2010/yr,39,47
AlphaMod,High,World,Price|Carbon,US$2010/t CO2,100,200
AlphaMod,High,World,Emissions|CO2,Mt CO2/yr,500,40
AlphaMod,High,World,GDP|MER,billion US$2010/yr,95,110
AlphaMod,High,World,Carbon Sequestration|CCS,Mt CO2/yr,,100
AlphaMod,High,World,Carbon Sequestration|Land Use,Mt CO2/yr,,20
AlphaMod,High,Freedonia,Price|Carbon,US$2010/t CO2,100,200
AlphaMod,High,Freedonia,Emissions|CO2,Mt CO2/yr,200,16
AlphaMod,High,Freedonia,GDP|MER,billion US$2010/yr,38,44
AlphaMod,High,Freedonia,Carbon Sequestration|CCS,Mt CO2/yr,,40
AlphaMod,High,Freedonia,Carbon Sequestration|Land Use,Mt CO2/yr,,8
BetaMod,Base,World,Emissions|CO2,Gt CO2/yr,2,2
BetaMod,Base,World,GDP|MER,trillion US$2010/yr,0.2,0.24
BetaMod,Base,Freedonia,Emissions|CO2,Gt CO2/yr,0.5,0.5
BetaMod,Base,Freedonia,GDP|MER,trillion US$2010/yr,0.05,0.06
BetaMod,Low,World,Price|Carbon,US$2010/t CO2,40,80
BetaMod,Low,World,Emissions|CO2,Gt CO2/yr,1.8,1.0
BetaMod,Low,World,GDP|MER,trillion US$2010/yr,0.199,0.236
BetaMod,Low,World,Carbon Sequestration|CCS,Mt CO2/yr,,100
BetaMod,Low,Freedonia,Price|Carbon,US$2010/t CO2,40,80
BetaMod,Low,Freedonia,Emissions|CO2,Gt CO2/yr,0.45,0.25
BetaMod,Low,Freedonia,GDP|MER,trillion US$2010/yr,0.0497,0.059
BetaMod,High,World,Price|Carbon,US$2010/t CO2,50,400
BetaMod,High,World,Emissions|CO2,Gt CO2/yr,1.2,0.08
BetaMod,High,World,GDP|MER,trillion US$2010/yr,0.19,0.2
BetaMod,High,World,Carbon Sequestration|CCS,Mt CO2/yr,,200
BetaMod,High,World,Carbon Sequestration|Land Use,Mt CO2/yr,,40
BetaMod,High,Freedonia,Price|Carbon,US$2010/t CO2,50,400
BetaMod,High,Freedonia,Emissions|CO2,Gt CO2/yr,0.3,0.02
BetaMod,High,Freedonia,GDP|MER,trillion US$2010/yr,0.0475,0.05
GammaMod,Base,World,Emissions|CO2,Mt CO2/yr,500,500
GammaMod,Base,World,GDP|MER,billion US$2010/yr,50,60
GammaMod,Base,Freedonia,Emissions|CO2,Mt CO2/yr,100,100
GammaMod,Base,Freedonia,GDP|MER,billion US$2010/yr,10,12
GammaMod,Low,World,Price|Carbon,US$2010/t CO2,10,20
GammaMod,Low,World,Emissions|CO2,Mt CO2/yr,510,450
GammaMod,Low,World,GDP|MER,billion US$2010/yr,50,59
GammaMod,Low,Freedonia,Price|Carbon,US$2010/t CO2,10,20
GammaMod,Low,Freedonia,Emissions|CO2,Mt CO2/yr,102,90
GammaMod,Low,Freedonia,GDP|MER,billion US$2010/yr,10,11.8
GammaMod,High,World,Price|Carbon,US$2010/t CO2,,30
GammaMod,High,World,Emissions|CO2,Mt CO2/yr,450,480
GammaMod,High,World,GDP|MER,billion US$2010/yr,49.5,58
GammaMod,High,Freedonia,Price|Carbon,US$2010/t CO2,,30
GammaMod,High,Freedonia,Emissions|CO2,Mt CO2/yr,90,96
GammaMod,High,Freedonia,GDP|MER,billion US$2010/yr,9.9,11.6
AlphaMod,Base,World,Final Energy,EJ/yr,400,410
GammaMod,Base,World,Emissions|CH4,Mt CH4/yr,300,250
BetaMod,Base,World,Emissions|CO2,bananas/yr,1,1
"""

PAIR_MAP_CSV = """\
# fixture pair map
model,policy_scenario,baseline_scenario
AlphaMod,Low,Base
AlphaMod,High,Base
BetaMod,Low,Base
BetaMod,High,Base
GammaMod,Low,Base
GammaMod,High,Base
"""

WDI_TAX_CSV = """\
country,indicator,year,value
AAA,TAX.SHARE,2019,20
BBB,TAX.SHARE,2019,10
EEE,TAX.SHARE,2019,30
DDD,TAX.SHARE,2019,15
AAA,OTHER.IND,2019,5
"""

WDI_GHG_CSV = """\
country,indicator,year,value
AAA,GHG.KT,2019,1000000
BBB,GHG.KT,2019,50000
CCC,GHG.KT,2019,70000
DDD,GHG.KT,2019,5000
EEE,GHG.KT,2019,200000
FFF,GHG.KT,2019,notanumber
"""

WDI_GDP_CSV = """\
country,indicator,year,value
AAA,GDP.USD,2019,1000000000000
BBB,GDP.USD,2019,500000000000
CCC,GDP.USD,2019,100000000000
DDD,GDP.USD,2019,0
EEE,GDP.USD,2019,100000000000
"""

WDI_CODES = IndicatorCodes(tax_share="TAX.SHARE", ghg_emissions="GHG.KT", gdp="GDP.USD")


@pytest.fixture(scope="session")
def scenario_csv_path(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("db") / "scenarios.csv"
    path.write_text(SCENARIO_CSV, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def store(scenario_csv_path):
    return load_scenario_database(scenario_csv_path)


@pytest.fixture(scope="session")
def pair_map_path(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("pairs") / "pair_map.csv"
    path.write_text(PAIR_MAP_CSV, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def pairs(store, pair_map_path):
    resolved, _ = apply_pair_map(store, load_pair_map(pair_map_path))
    return resolved


@pytest.fixture(scope="session")
def wdi_paths(tmp_path_factory) -> dict[str, Path]:
    root = tmp_path_factory.mktemp("wdi")
    paths = {
        "tax": root / "tax.csv",
        "ghg": root / "ghg.csv",
        "gdp": root / "gdp.csv",
    }
    paths["tax"].write_text(WDI_TAX_CSV, encoding="utf-8")
    paths["ghg"].write_text(WDI_GHG_CSV, encoding="utf-8")
    paths["gdp"].write_text(WDI_GDP_CSV, encoding="utf-8")
    return paths


@pytest.fixture(scope="session")
def panel(wdi_paths):
    return load_indicator_panel(
        wdi_paths["tax"], wdi_paths["ghg"], wdi_paths["gdp"], WDI_CODES, year=2019
    )


@pytest.fixture(scope="session")
def reference_model_table() -> Path:
    return Path(__file__).parent / "data" / "reference_model_efficacy.csv"
