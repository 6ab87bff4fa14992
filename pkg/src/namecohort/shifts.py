"""Temporal gender-instability analytics over the name-year table.

A name's gender association can drift across decades; these operations
quantify that drift per name (delta of p(F) between two years), detect
unstable names across a grid of sample years, rank the largest movers, and
aggregate a birth-weighted net shift for a set of names.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import DEFAULT_MAX_FALLBACK, p_female
from .names import normalize_name
from .ssa import NameYearTable

DEFAULT_SAMPLE_YEARS = (1900, 1925, 1950, 1975, 2000)


class EndpointMissingError(ValueError):
    """A shift endpoint had no usable counts even after fallback."""

    def __init__(self, name: str, year: int):
        self.name = name
        self.year = year
        super().__init__(f"no usable counts for {name!r} at year {year}")


@dataclass(frozen=True, slots=True)
class ShiftRecord:
    """One name's p(F) movement between two years, with a births-based weight."""

    name: str
    p_start: float
    p_end: float
    delta: float
    weight: float


@dataclass(frozen=True, slots=True)
class InstabilityConfig:
    """Detection rule knobs: the year grid, the p(F) range cutoff, and a floor
    on total births so vanishingly rare names do not dominate."""

    sample_years: tuple[int, ...] = DEFAULT_SAMPLE_YEARS
    range_threshold: float = 0.3
    min_total_births: int = 500

    def __post_init__(self):
        if list(self.sample_years) != sorted(set(self.sample_years)):
            raise ValueError("sample_years must be strictly increasing")
        if not (0 < self.range_threshold <= 1):
            raise ValueError("range_threshold must be in (0, 1]")
        if self.min_total_births < 0:
            raise ValueError("min_total_births must be >= 0")


def gender_shift(table: NameYearTable, name: str, y1: int, y2: int,
                 max_fallback_distance: int = DEFAULT_MAX_FALLBACK) -> ShiftRecord:
    """Shift record for one name between years y1 < y2.

    The weight is the mean of the total births actually used at the two
    endpoints, which avoids favoring either endpoint when ranking by size.
    Raises EndpointMissingError naming the year that had no data.
    """
    if y1 >= y2:
        raise ValueError("require y1 < y2")
    start = p_female(table, name, y1, max_fallback_distance)
    if not start.known:
        raise EndpointMissingError(name, y1)
    end = p_female(table, name, y2, max_fallback_distance)
    if not end.known:
        raise EndpointMissingError(name, y2)
    return ShiftRecord(
        name=normalize_name(name),
        p_start=start.p_female,
        p_end=end.p_female,
        delta=end.p_female - start.p_female,
        weight=(start.total + end.total) / 2,
    )


def _sample_profile(table: NameYearTable, name: str,
                    config: InstabilityConfig) -> tuple[list[float], int]:
    """Known p(F) values at the sample years, plus total births used."""
    ps = []
    births = 0
    for year in config.sample_years:
        estimate = p_female(table, name, year)
        if estimate.known:
            ps.append(estimate.p_female)
            births += estimate.total
    return ps, births


def find_unstable(table: NameYearTable, config: InstabilityConfig = InstabilityConfig()) -> list[str]:
    """Names whose p(F) range across the sample years meets the threshold.

    A name qualifies when it has known p(F) at two or more sample years
    (after fallback), its total births across those years reach
    min_total_births, and max p(F) minus min p(F) reaches range_threshold.
    Output is sorted by descending range, ties broken lexicographically.
    """
    qualifying = []
    for name in table.names():
        ps, births = _sample_profile(table, name, config)
        if len(ps) < 2 or births < config.min_total_births:
            continue
        p_range = max(ps) - min(ps)
        if p_range >= config.range_threshold:
            qualifying.append((p_range, name))
    qualifying.sort(key=lambda item: (-item[0], item[1]))
    return [name for _, name in qualifying]


def top_shift_names(table: NameYearTable, y1: int, y2: int, k: int,
                    weighted: bool = False) -> list[ShiftRecord]:
    """The k largest movers between y1 and y2, descending.

    Unweighted ranks by |delta|; weighted ranks by |delta| * weight. Names
    unresolvable at either endpoint are simply ineligible, and fewer than k
    eligible names yields a shorter list. Ties break lexicographically.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    records = []
    for name in table.names():
        try:
            records.append(gender_shift(table, name, y1, y2))
        except EndpointMissingError:
            continue
    if weighted:
        records.sort(key=lambda r: (-(abs(r.delta) * r.weight), r.name))
    else:
        records.sort(key=lambda r: (-abs(r.delta), r.name))
    return records[:k]


def net_female_shift(table: NameYearTable, names: list[str], y1: int, y2: int) -> float:
    """Weight-normalized mean delta over the given names; positive means the
    set moved toward female association between y1 and y2.

    Every name must resolve at both years. The normalization keeps the
    result in [-1, 1] and invariant under uniform scaling of the weights.
    """
    if not names:
        raise ValueError("names must be non-empty")
    records = [gender_shift(table, name, y1, y2) for name in names]
    total_weight = sum(r.weight for r in records)
    return sum(r.delta * r.weight for r in records) / total_weight
