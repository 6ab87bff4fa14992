"""Shared fixtures: the bundled table and deterministic synthetic corpora."""

from __future__ import annotations

import pytest

import namecohort as nc
from namecohort.corpus import make_mention

# The names the bundled table flags as unstable, most to least unstable.
FIXTURE_UNSTABLE = ["madison", "leslie", "addison", "kendall", "jan",
                    "morgan", "sidney", "johnnie"]


@pytest.fixture(scope="session")
def fixture_table() -> nc.NameYearTable:
    return nc.load_fixture()


def build_workflow_corpus() -> list[nc.CorpusRecord]:
    """480 publications whose author strings dedup to exactly 660 names.

    Records carry one primary author each (480 distinct), the first 180
    carry a second author (180 more), and the last 180 repeat an earlier
    author as a case/spacing variant that normalization must collapse.
    """
    names = [f"Given{i:03d} Surname{i:03d}" for i in range(660)]
    records = []
    for i in range(480):
        authors = [names[i]]
        if i < 180:
            authors.append(names[480 + i])
        if i >= 300:
            authors.append(names[i - 300].upper().replace(" ", "  "))
        records.append(nc.CorpusRecord(
            record_id=f"rec{i:04d}", venue="DBLP1980", publication_year=1980,
            authors=tuple(make_mention(a) for a in authors),
        ))
    return records


def build_bias_corpus(years=range(1950, 1960)) -> list[nc.CorpusRecord]:
    """One publication per year, authored by every fixture-unstable name."""
    records = []
    for year in years:
        authors = tuple(make_mention(f"{name.title()} Author")
                        for name in FIXTURE_UNSTABLE)
        records.append(nc.CorpusRecord(
            record_id=f"bias{year}", venue="HIST", publication_year=year,
            authors=authors,
        ))
    return records


@pytest.fixture()
def workflow_corpus() -> list[nc.CorpusRecord]:
    return build_workflow_corpus()


@pytest.fixture()
def bias_corpus() -> list[nc.CorpusRecord]:
    return build_bias_corpus()
