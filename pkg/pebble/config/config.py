import os

# Determine environment
ENV = os.environ.get("PEBBLE_ENV", "dev")

LOG_LEVEL = os.environ.get("PEBBLE_LOG_LEVEL", "WARNING")

# Small-scope search
SEARCH_CONFIG = {
    "enumeration_ceiling": int(os.environ.get("PEBBLE_SEARCH_CEILING", "5000000")),
    "workers": int(os.environ.get("PEBBLE_WORKERS", "1")),
    "element_prefix": "u",
    "default_domain": 2,
    "default_prefix": 2,
    "default_period": 2,
}

# Minsky certification
CERTIFY_CONFIG = {
    "default_horizon": 20,
    "non_halting_horizon": 50,
    "workers": int(os.environ.get("PEBBLE_WORKERS", "4")),
    "node_prefix": "node",
    "slot_prefix": "slot",
}

# Report output
OUTPUT_CONFIG = {
    "default_format": os.environ.get("PEBBLE_OUTPUT_FORMAT", "plain"),
    "formats": ["plain", "json"],
}

# Sizes used by the acceptance sweeps under tests/e2e
ACCEPTANCE_CONFIG = {
    "max_domain": 3,
    "max_prefix": 3,
    "max_period": 2,
    "formula_depth": 4,
    "formula_count": 400,
    "pebble_pairs": 1000,
    "roundtrip_formulas": 10000,
    "sweep_formulas": 16,
}

# Environment-specific overrides
if ENV == "ci":
    SEARCH_CONFIG["enumeration_ceiling"] = int(
        os.environ.get("PEBBLE_SEARCH_CEILING", "500000")
    )
    ACCEPTANCE_CONFIG["formula_count"] = 120
    ACCEPTANCE_CONFIG["pebble_pairs"] = 1000
    ACCEPTANCE_CONFIG["roundtrip_formulas"] = 2000
    ACCEPTANCE_CONFIG["sweep_formulas"] = 6
