"""Browser fingerprintability measurement service and analyzer."""

from .analyzer import (
    DeviceRegistry,
    ObservationLog,
    analyze,
    build_timeline,
    load_log,
    load_registry,
    score_session,
)
from .canonical import canonicalize_report, fingerprint_hash
from .ipclass import IpClass, classify_ip
from .ranking import (
    AttributeAssessment,
    FingerprintabilityScore,
    Mitigation,
    MitigationId,
    rank_canvas,
    rank_device_id,
    rank_fonts,
    rank_local_ip,
    rank_user_agent,
    rank_webgl,
    score,
    suggest_mitigations,
)
from .rubric import RankingRubric, default_rubric, lint_rubric, load_rubric
from .tables import ComparisonTable, compare_browsers, render_csv, render_text
from .timeline import (
    CanvasComparison,
    DeviceIdTimeline,
    PersistenceClass,
    assess_persistence,
    classify_persistence,
    compare_canvas,
    load_timeline,
)
from .types import (
    AttributeKind,
    BrowserProfile,
    EventKind,
    FingerprintReport,
    NavigationEvent,
    PlatformClass,
    Rank,
    ValidationError,
    report_from_dict,
    report_to_dict,
    validate_report,
)
from .useragent import parse_user_agent

__version__ = "0.1.0"
