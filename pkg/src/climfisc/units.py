"""Canonical variables and multiplicative unit normalization.

Every stored series uses one canonical unit per variable:

* carbon price        US$2010 per tCO2
* emissions / uptake  MtCO2 per year
* GDP                 billion US$2010 per year

Only multiplicative conversions are supported (Gt to Mt, trillion to
billion, per-tC to per-tCO2 via the 44/12 molecular weight ratio).
Currency re-basing needs deflator data and is rejected as unconvertible.
"""

from __future__ import annotations

from .errors import UnitError

CARBON_PRICE = "CarbonPrice"
GROSS_EMISSIONS = "GrossCO2Emissions"
SEQUESTRATION = "CO2Sequestration"
GDP = "GDP"

CANONICAL_VARIABLES = (CARBON_PRICE, GROSS_EMISSIONS, SEQUESTRATION, GDP)

CANONICAL_UNITS = {
    CARBON_PRICE: "US$2010/t CO2",
    GROSS_EMISSIONS: "Mt CO2/yr",
    SEQUESTRATION: "Mt CO2/yr",
    GDP: "billion US$2010/yr",
}

# tonnes of CO2 released per tonne of carbon burned
CO2_PER_C = 44.0 / 12.0


def _key(unit: str) -> str:
    return " ".join(unit.split()).lower()


_PRICE_FACTORS = {
    _key("US$2010/t CO2"): 1.0,
    _key("US$2010/tCO2"): 1.0,
    _key("US$2010/t C"): 1.0 / CO2_PER_C,
    _key("US$2010/tC"): 1.0 / CO2_PER_C,
}

_MASS_FLOW_FACTORS = {
    _key("Mt CO2/yr"): 1.0,
    _key("Gt CO2/yr"): 1000.0,
    _key("kt CO2/yr"): 1e-3,
    _key("t CO2/yr"): 1e-6,
    _key("Mt C/yr"): CO2_PER_C,
    _key("Gt C/yr"): 1000.0 * CO2_PER_C,
    _key("kt C/yr"): 1e-3 * CO2_PER_C,
}

_GDP_FACTORS = {
    _key("billion US$2010/yr"): 1.0,
    _key("trillion US$2010/yr"): 1000.0,
    _key("million US$2010/yr"): 1e-3,
}

_FACTORS = {
    CARBON_PRICE: _PRICE_FACTORS,
    GROSS_EMISSIONS: _MASS_FLOW_FACTORS,
    SEQUESTRATION: _MASS_FLOW_FACTORS,
    GDP: _GDP_FACTORS,
}


def conversion_factor(variable: str, unit: str) -> float:
    """Multiplier taking a value in ``unit`` to the canonical unit of ``variable``.

    Raises UnitError for unknown variables or unconvertible unit strings.
    """
    try:
        table = _FACTORS[variable]
    except KeyError:
        raise UnitError(f"unknown canonical variable: {variable!r}") from None
    try:
        return table[_key(unit)]
    except KeyError:
        raise UnitError(
            f"cannot convert unit {unit!r} to {CANONICAL_UNITS[variable]!r} "
            f"for {variable}"
        ) from None


def normalize(variable: str, unit: str, value: float) -> float:
    """Convert ``value`` from ``unit`` to the canonical unit of ``variable``."""
    return value * conversion_factor(variable, unit)


def is_canonical(variable: str, unit: str) -> bool:
    return _key(unit) == _key(CANONICAL_UNITS[variable])
