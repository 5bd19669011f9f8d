"""Pool ex-post efficacy estimates and score ex-ante models against them.

Pooling is the classic inverse-variance (precision-weighted) combination.
Model scoring starts from a uniform prior; the likelihood of a model is
the Gaussian density of its mean efficacy under the pooled distribution.
An alternative likelihood that also convolves the model's own standard
error into the variance is available behind a flag; the convention used
is recorded on the result.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import DataError, InvariantError
from .efficacy import ModelEfficacy

DEFAULT_ESTIMATES_RESOURCE = "external_estimates.csv"

CONVENTION_POOLED_DENSITY = "density-at-model-mean"
CONVENTION_CONVOLVED = "convolved-variances"


@dataclass(frozen=True)
class ExternalEstimate:
    """One published ex-post estimate of tax efficacy, in % per (US$/t)."""

    label: str
    mean: float
    standard_error: float


@dataclass(frozen=True)
class PooledEstimate:
    mean: float
    standard_error: float
    weights: dict[str, float]  # label -> normalized weight, sums to 1


@dataclass(frozen=True)
class ModelPosterior:
    probabilities: dict[str, float]  # model -> posterior probability
    convention: str


def load_external_estimates(path: str | Path | None = None) -> list[ExternalEstimate]:
    """Read ``label,mean_pct_per_usd,se_pct_per_usd`` CSV (bundled by default)."""
    if path is None:
        ref = resources.files("climfisc").joinpath("data", DEFAULT_ESTIMATES_RESOURCE)
        with resources.as_file(ref) as bundled:
            return load_external_estimates(bundled)
    estimates = []
    with open(path, newline="", encoding="utf-8-sig") as handle:
        reader = csv.DictReader(line for line in handle if not line.startswith("#"))
        for record in reader:
            estimates.append(
                ExternalEstimate(
                    label=record["label"].strip(),
                    mean=float(record["mean_pct_per_usd"]),
                    standard_error=float(record["se_pct_per_usd"]),
                )
            )
    if not estimates:
        raise DataError(f"{path}: no estimates found")
    return estimates


def pool_estimates(estimates: list[ExternalEstimate]) -> PooledEstimate:
    """Inverse-variance pooling: weights proportional to 1/se^2.

    The pooled standard error is (sum of precisions)^(-1/2), so adding
    any estimate strictly tightens it. Summation runs in a sorted order,
    making the result exactly invariant to estimate ordering.
    """
    if not estimates:
        raise DataError("cannot pool an empty estimate list")
    for est in estimates:
        if est.standard_error <= 0.0:
            raise DataError(f"estimate {est.label!r} has nonpositive standard error")
    ordered = sorted(estimates, key=lambda e: (e.label, e.mean, e.standard_error))
    precisions = [1.0 / est.standard_error**2 for est in ordered]
    total = sum(precisions)
    mean = sum(p * est.mean for p, est in zip(precisions, ordered)) / total
    weights = {est.label: p / total for p, est in zip(precisions, ordered)}
    return PooledEstimate(mean=mean, standard_error=total**-0.5, weights=weights)


def posterior_model_probabilities(
    models: list[ModelEfficacy],
    pooled: PooledEstimate,
    convention: str = CONVENTION_POOLED_DENSITY,
) -> ModelPosterior:
    """Posterior probability per model under a uniform prior.

    Computed in log space with the maximum subtracted before
    exponentiation, so scaling all likelihoods by a positive constant
    cannot change the result and underflow cannot zero them all out.
    """
    if not models:
        raise DataError("no models to score")
    if pooled.standard_error <= 0.0:
        raise DataError("pooled estimate has nonpositive standard error")

    log_likelihoods = []
    for model in models:
        delta = model.mean - pooled.mean
        if convention == CONVENTION_POOLED_DENSITY:
            variance = pooled.standard_error**2
        elif convention == CONVENTION_CONVOLVED:
            variance = pooled.standard_error**2 + model.standard_error**2
        else:
            raise DataError(f"unknown likelihood convention {convention!r}")
        log_likelihoods.append(-0.5 * delta**2 / variance - 0.5 * math.log(variance))

    peak = max(log_likelihoods)
    if not math.isfinite(peak):
        raise InvariantError("posterior underflow: no finite likelihood")
    scaled = [math.exp(ll - peak) for ll in log_likelihoods]
    total = sum(scaled)
    probabilities = {
        model.model: s / total for model, s in zip(models, scaled)
    }
    return ModelPosterior(probabilities=probabilities, convention=convention)


def full_decarbonization_tax(pooled: PooledEstimate) -> float:
    """Tax (US$/tCO2) removing 100% of emissions under linear efficacy."""
    if pooled.mean <= 0.0:
        raise DataError(f"pooled mean {pooled.mean} is nonpositive; no finite tax")
    return 100.0 / pooled.mean


def write_posterior_csv(
    posterior: ModelPosterior, path: str | Path, manifest_hash: str | None = None
) -> None:
    """Probabilities sorted descending, ties broken by model name."""
    ordered = sorted(posterior.probabilities.items(), key=lambda kv: (-kv[1], kv[0]))
    with open(path, "w", newline="", encoding="utf-8") as handle:
        if manifest_hash:
            handle.write(f"# manifest={manifest_hash}\n")
        writer = csv.writer(handle)
        writer.writerow(["model", "posterior_probability", "convention"])
        for model, prob in ordered:
            writer.writerow([model, repr(prob), posterior.convention])
