from .settings import RunConfig, settings, default_config
from .cache import OracleCache, configure_cache, default_cache
from .reports import (
    CLOSED_FORM,
    ORACLE,
    ROUTES,
    SPECTRAL,
    Report,
    ReportRow,
    format_csv,
    write_csv,
    write_reports,
    write_summary,
)
