"""namecohort: year-aware name-gender estimation for bibliographic corpora.

A first name's gender association is not fixed: many names drifted from
male to female (or back) over the twentieth century, so applying today's
name tables to historical authors systematically misreads the past. This
package looks names up in per-birth-year count tables, shifts publication
years back to the author's likely birth cohort, quantifies per-name drift,
sizes and draws reproducible samples of large author populations, and
aggregates longitudinal participation series.
"""

__version__ = "0.1.0"

from .corpus import (
    AuthorMention,
    CorpusParseResult,
    CorpusRecord,
    OverrideEntry,
    OverrideLedger,
    apply_overrides,
    extract_first_name,
    parse_corpus_csv,
    parse_dblp_subset,
    read_override_ledger,
    serialize_corpus_csv,
)
from .model import (
    Gender,
    GenderEstimate,
    ModelConfig,
    Thresholds,
    classify,
    p_female,
    shifted_lookup,
)
from .names import normalize_full_name, normalize_name
from .sampling import (
    SampleSpec,
    Tier,
    TierRecommendation,
    dedup_authors,
    draw_sample,
    sample_size,
    tier_recommendation,
)
from .shifts import (
    InstabilityConfig,
    ShiftRecord,
    find_unstable,
    gender_shift,
    net_female_shift,
    top_shift_names,
)
from .ssa import (
    NameCountRecord,
    NameYearTable,
    build_table,
    load_directory,
    load_fixture,
    parse_year_file,
    read_snapshot,
    serialize_table,
    write_snapshot,
)
from .trend import (
    BiasPoint,
    BiasReport,
    DisplayEncoding,
    Estimator,
    EstimatorConfig,
    TrendPoint,
    annual_share,
    emit_series,
    parse_series_json,
    present_bias_report,
)
