"""Longitudinal aggregation of resolved author genders into trend series.

Two estimators are provided because counting conventions differ and the
choice matters: WeightedMean averages per-author female probabilities with
unidentified authors contributing a fixed unknown value (default 0.5),
while ClassifiedShare counts only threshold-classified authors (female
divided by female-plus-male). An optional display encoding maps classified
mentions to 0.95/0.05/0.5 before averaging, for plot-style series. The
bias report contrasts cohort-shifted lookups against a predictor pinned to
one reference year, which is how present-day name tables misread history.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Sequence

from .corpus import AuthorMention, CorpusRecord
from .model import (Gender, GenderEstimate, ModelConfig, Thresholds, classify,
                    p_female, shifted_lookup)
from .ssa import NameYearTable

__all__ = [
    "BiasPoint", "BiasReport", "DisplayEncoding", "Estimator", "EstimatorConfig",
    "TrendPoint", "annual_share", "emit_series", "parse_series_json",
    "present_bias_report",
]


class Estimator(enum.Enum):
    WEIGHTED_MEAN = "weighted-mean"
    CLASSIFIED_SHARE = "classified-share"


@dataclass(frozen=True, slots=True)
class DisplayEncoding:
    """Plot-style values for classified mentions."""

    female: float = 0.95
    male: float = 0.05
    unknown: float = 0.5


@dataclass(frozen=True, slots=True)
class EstimatorConfig:
    estimator: Estimator = Estimator.WEIGHTED_MEAN
    unknown_value: float = 0.5
    display_encoding: DisplayEncoding | None = None
    bin_width: int = 1
    group_by_venue: bool = False

    def __post_init__(self):
        if not (0 <= self.unknown_value <= 1):
            raise ValueError("unknown_value must be in [0, 1]")
        if self.bin_width < 1:
            raise ValueError("bin_width must be >= 1")


@dataclass(frozen=True, slots=True)
class TrendPoint:
    """One bin of the participation series.

    bin is the bin's start year, or "venue:year" when grouped by venue.
    share_female is None only for a ClassifiedShare bin in which nothing
    was classified (flagged rather than faked). n_identified counts
    mentions that contributed a definite value under the estimator in
    force; n_identified + n_unidentified = n_authors always.
    """

    bin: int | str
    share_female: float | None
    n_authors: int
    n_identified: int
    n_unidentified: int
    estimator: Estimator


@dataclass(frozen=True, slots=True)
class BiasPoint:
    bin: int
    temporal_share: float
    static_share: float
    gap: float  # static_share - temporal_share


@dataclass(frozen=True, slots=True)
class BiasReport:
    """Per-bin comparison of cohort-shifted vs reference-year-pinned shares."""

    reference_year: int
    points: tuple[BiasPoint, ...]
    mean_gap: float
    max_gap: float  # gap of largest magnitude, sign preserved


def _mention_class(mention: AuthorMention, estimate: GenderEstimate | None,
                   thresholds: Thresholds) -> Gender:
    if mention.override_gender is not None:
        return mention.override_gender
    if estimate is None:
        return Gender.UNIDENTIFIED
    return classify(estimate, thresholds)


def _mention_estimate(mention: AuthorMention, record: CorpusRecord,
                      table: NameYearTable, model_config: ModelConfig) -> GenderEstimate | None:
    if mention.first_name is None:
        return None
    return shifted_lookup(table, mention.first_name, record.publication_year, model_config)


def _weighted_value(mention: AuthorMention, estimate: GenderEstimate | None,
                    unknown_value: float) -> tuple[float, bool]:
    """(contribution, identified) for the WeightedMean estimator."""
    if mention.override_gender is Gender.FEMALE:
        return 1.0, True
    if mention.override_gender is Gender.MALE:
        return 0.0, True
    if mention.override_gender is Gender.UNIDENTIFIED:
        return unknown_value, False
    if estimate is not None and estimate.known:
        return estimate.p_female, True
    return unknown_value, False


def _bin_key(record: CorpusRecord, config: EstimatorConfig) -> tuple[str, int]:
    start = (record.publication_year // config.bin_width) * config.bin_width
    return (record.venue if config.group_by_venue else "", start)


def _bin_label(key: tuple[str, int], config: EstimatorConfig) -> int | str:
    venue, start = key
    return f"{venue}:{start}" if config.group_by_venue else start


def annual_share(records: Sequence[CorpusRecord], table: NameYearTable,
                 model_config: ModelConfig = ModelConfig(),
                 thresholds: Thresholds = Thresholds(),
                 config: EstimatorConfig = EstimatorConfig()) -> list[TrendPoint]:
    """Aggregate author mentions into a per-bin women's-share series.

    Records should already carry any qualitative overrides; an override
    outranks the table estimate for its mention. Bins with no records are
    omitted, never zero-filled.
    """
    bins: dict[tuple[str, int], list[tuple[AuthorMention, GenderEstimate | None]]] = {}
    for record in records:
        resolved = [(m, _mention_estimate(m, record, table, model_config))
                    for m in record.authors]
        bins.setdefault(_bin_key(record, config), []).extend(resolved)

    points = []
    for key in sorted(bins):
        mentions = bins[key]
        n_authors = len(mentions)
        if config.estimator is Estimator.WEIGHTED_MEAN:
            if config.display_encoding is not None:
                encoding = config.display_encoding
                values = []
                identified = 0
                for mention, estimate in mentions:
                    cls = _mention_class(mention, estimate, thresholds)
                    if cls is Gender.FEMALE:
                        values.append(encoding.female)
                        identified += 1
                    elif cls is Gender.MALE:
                        values.append(encoding.male)
                        identified += 1
                    else:
                        values.append(encoding.unknown)
                share = math.fsum(values) / n_authors
            else:
                values = []
                identified = 0
                for mention, estimate in mentions:
                    value, known = _weighted_value(mention, estimate, config.unknown_value)
                    values.append(value)
                    identified += known
                # fsum keeps the mean exactly permutation-invariant
                share = math.fsum(values) / n_authors
        else:
            females = males = 0
            for mention, estimate in mentions:
                cls = _mention_class(mention, estimate, thresholds)
                if cls is Gender.FEMALE:
                    females += 1
                elif cls is Gender.MALE:
                    males += 1
            identified = females + males
            share = females / identified if identified else None
        points.append(TrendPoint(
            bin=_bin_label(key, config),
            share_female=share,
            n_authors=n_authors,
            n_identified=identified,
            n_unidentified=n_authors - identified,
            estimator=config.estimator,
        ))
    return points


def present_bias_report(records: Sequence[CorpusRecord], table: NameYearTable,
                        model_config: ModelConfig = ModelConfig(),
                        reference_year: int = 2000) -> BiasReport:
    """Per-year gap between cohort-shifted shares and a static predictor.

    The temporal arm resolves each mention through the cohort shift; the
    static arm pins every lookup to reference_year, mimicking software
    built from present-day tables. Both arms use the weighted-mean
    convention with unknown = 0.5, and overrides apply identically, so any
    gap comes purely from the lookup year.
    """
    bins: dict[int, list[tuple[float, float]]] = {}
    for record in records:
        for mention in record.authors:
            temporal_est = _mention_estimate(mention, record, table, model_config)
            static_est = None
            if mention.first_name is not None:
                static_est = p_female(table, mention.first_name, reference_year,
                                      model_config.max_fallback_distance)
            temporal, _ = _weighted_value(mention, temporal_est, 0.5)
            static, _ = _weighted_value(mention, static_est, 0.5)
            bins.setdefault(record.publication_year, []).append((temporal, static))

    points = []
    for year in sorted(bins):
        pairs = bins[year]
        temporal_share = math.fsum(t for t, _ in pairs) / len(pairs)
        static_share = math.fsum(s for _, s in pairs) / len(pairs)
        points.append(BiasPoint(bin=year, temporal_share=temporal_share,
                                static_share=static_share,
                                gap=static_share - temporal_share))
    gaps = [p.gap for p in points]
    mean_gap = math.fsum(gaps) / len(gaps) if gaps else 0.0
    max_gap = max(gaps, key=abs) if gaps else 0.0
    return BiasReport(reference_year=reference_year, points=tuple(points),
                      mean_gap=mean_gap, max_gap=max_gap)


_POINT_COLUMNS = "bin,share_female,n_authors,n_identified,n_unidentified,estimator"
_BIAS_COLUMNS = "bin,temporal_share,static_share,gap"


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


def emit_series(obj: Sequence[TrendPoint] | BiasReport, fmt: str = "csv") -> bytes:
    """Serialize a trend series or bias report deterministically.

    Rows are sorted by bin label; CSV carries one row per bin (bias-report
    summary statistics appear only in the JSON form).
    """
    if isinstance(obj, BiasReport):
        rows = sorted(obj.points, key=lambda p: p.bin)
    else:
        rows = sorted(obj, key=lambda p: str(p.bin))
    if fmt == "csv":
        if isinstance(obj, BiasReport):
            lines = [_BIAS_COLUMNS] + [
                f"{p.bin},{_fmt(p.temporal_share)},{_fmt(p.static_share)},{_fmt(p.gap)}"
                for p in rows
            ]
        else:
            lines = [_POINT_COLUMNS] + [
                f"{p.bin},{_fmt(p.share_female)},{p.n_authors},{p.n_identified},"
                f"{p.n_unidentified},{p.estimator.value}"
                for p in rows
            ]
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "json":
        if isinstance(obj, BiasReport):
            payload = {
                "reference_year": obj.reference_year,
                "mean_gap": obj.mean_gap,
                "max_gap": obj.max_gap,
                "bins": [{"bin": p.bin, "temporal_share": p.temporal_share,
                          "static_share": p.static_share, "gap": p.gap}
                         for p in rows],
            }
        else:
            payload = [{"bin": p.bin, "share_female": p.share_female,
                        "n_authors": p.n_authors, "n_identified": p.n_identified,
                        "n_unidentified": p.n_unidentified,
                        "estimator": p.estimator.value}
                       for p in rows]
        return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r} (expected csv or json)")


def parse_series_json(data: bytes | str) -> list[TrendPoint]:
    """Parse a JSON series emitted by :func:`emit_series` back into points."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return [
        TrendPoint(bin=item["bin"], share_female=item["share_female"],
                   n_authors=item["n_authors"], n_identified=item["n_identified"],
                   n_unidentified=item["n_unidentified"],
                   estimator=Estimator(item["estimator"]))
        for item in json.loads(data)
    ]
