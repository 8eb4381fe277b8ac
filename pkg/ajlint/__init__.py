"""ajlint: invasiveness classification for AspectJ-like programs."""

__version__ = "1.0.0"

# Version of the JSON report schema; bump on any schema change.
REPORT_SCHEMA_VERSION = 1
