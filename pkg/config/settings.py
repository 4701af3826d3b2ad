"""
Configuration Management for foldlab
Handles environment-based configuration with sensible defaults
"""

import os

try:
    from dotenv import load_dotenv

    load_dotenv()
except Exception:
    pass

# ============================================
# Determinism
# ============================================
SEED = int(os.getenv("FOLDLAB_SEED", "20240917"))
SAMPLE_RANGE = int(os.getenv("FOLDLAB_SAMPLE_RANGE", "9"))  # integer samples in [-R, R]
MAX_RESAMPLES = int(os.getenv("FOLDLAB_MAX_RESAMPLES", "25"))

# ============================================
# Computation Limits
# ============================================
TRUNCATION_ORDER = int(os.getenv("FOLDLAB_TRUNCATION_ORDER", "8"))
DIMENSION_CAP = int(os.getenv("FOLDLAB_DIMENSION_CAP", "400"))
EIGEN_TOLERANCE_EXP = int(os.getenv("FOLDLAB_EIGEN_TOLERANCE_EXP", "20"))  # intervals of width 10^-k
GAUGE_SAMPLES = int(os.getenv("FOLDLAB_GAUGE_SAMPLES", "50"))  # random connections per normal-form check

# ============================================
# Cache Configuration
# ============================================
CACHE_DIR = os.getenv("FOLDLAB_CACHE", os.path.abspath("./.foldlab_cache"))
CACHE_ENABLED = os.getenv("FOLDLAB_CACHE_ENABLED", "true").lower() == "true"
CACHE_BACKEND = os.getenv("FOLDLAB_CACHE_BACKEND", "file")  # "file" | "redis"
REDIS_URL = os.getenv("REDIS_URL", "redis://localhost:6379/0")

# Cache TTL settings (in seconds, redis backend only)
CACHE_TTL = {
    "fold": int(os.getenv("CACHE_TTL_FOLD", "86400")),
    "module": int(os.getenv("CACHE_TTL_MODULE", "86400")),
    "twining": int(os.getenv("CACHE_TTL_TWINING", "86400")),
    "spectrum": int(os.getenv("CACHE_TTL_SPECTRUM", "86400")),
}

# ============================================
# Output & Logging
# ============================================
OUTPUT_FORMAT = os.getenv("FOLDLAB_OUTPUT", "json")  # "json" | "pretty"
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
LOG_FORMAT = os.getenv("LOG_FORMAT", "json")  # "json" | "text"

# ============================================
# Data Files
# ============================================
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
DATA_DIR = os.getenv("FOLDLAB_DATA_DIR", os.path.join(PROJECT_ROOT, "data"))
SCHEMA_DIR = os.path.join(PROJECT_ROOT, "schemas")

# ============================================
# Feature Flags
# ============================================
FEATURES = {
    "cache": CACHE_ENABLED,
    "redis_cache": CACHE_ENABLED and CACHE_BACKEND == "redis",
    "pretty_output": OUTPUT_FORMAT == "pretty",
    "json_logs": LOG_FORMAT == "json",
}

# ============================================
# Helper Functions
# ============================================
def get_feature(name: str) -> bool:
    """Check if a feature is enabled"""
    return FEATURES.get(name, False)


def uses_redis() -> bool:
    return get_feature("redis_cache")


def sample_bounds() -> tuple:
    return -SAMPLE_RANGE, SAMPLE_RANGE


# ============================================
# Validation
# ============================================
def validate_config():
    """Validate configuration on startup"""
    errors = []

    if TRUNCATION_ORDER < 2:
        errors.append("FOLDLAB_TRUNCATION_ORDER must be at least 2")
    if DIMENSION_CAP < 1:
        errors.append("FOLDLAB_DIMENSION_CAP must be positive")
    if SAMPLE_RANGE < 1:
        errors.append("FOLDLAB_SAMPLE_RANGE must be positive")
    if MAX_RESAMPLES < 1:
        errors.append("FOLDLAB_MAX_RESAMPLES must be positive")
    if EIGEN_TOLERANCE_EXP < 1:
        errors.append("FOLDLAB_EIGEN_TOLERANCE_EXP must be positive")
    if GAUGE_SAMPLES < 1:
        errors.append("FOLDLAB_GAUGE_SAMPLES must be positive")
    if CACHE_BACKEND not in ("file", "redis"):
        errors.append(f"Unknown FOLDLAB_CACHE_BACKEND '{CACHE_BACKEND}'")
    if uses_redis() and not REDIS_URL:
        errors.append("FOLDLAB_CACHE_BACKEND is redis but REDIS_URL is not set")
    if OUTPUT_FORMAT not in ("json", "pretty"):
        errors.append(f"Unknown FOLDLAB_OUTPUT '{OUTPUT_FORMAT}'")
    if LOG_FORMAT not in ("json", "text"):
        errors.append(f"Unknown LOG_FORMAT '{LOG_FORMAT}'")

    if errors:
        raise ValueError("Configuration validation failed:\n" + "\n".join(f"- {e}" for e in errors))


# Run validation on import (optional, can be disabled)
if os.getenv("VALIDATE_CONFIG_ON_IMPORT", "true").lower() == "true":
    try:
        validate_config()
    except ValueError as e:
        import warnings

        warnings.warn(f"Configuration validation warning: {e}")
