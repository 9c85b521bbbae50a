"""
Constants used across the CStar verifier.
"""

# Exit codes of `cstar verify`
EXIT_VERIFIED = 0
EXIT_FAILURE = 1
EXIT_SYMEXEC_ERROR = 2
EXIT_PARSE_ERROR = 3

# Environment variables (all optional, may come from a .env file)
ENV_INCLUDE_PATH = "CSTAR_INCLUDE_PATH"
ENV_CACHE_DIR = "CSTAR_CACHE_DIR"
ENV_LOG_LEVEL = "CSTAR_LOG_LEVEL"

DEFAULT_CACHE_DIR = ".cstar_cache"
DEFAULT_LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Rewriting with a rule list stops after this many passes.
MAX_REWRITE_PASSES = 10000

# Bound on backtracking when matching conjuncts.
MAX_MATCH_ATTEMPTS = 2000

# Solver timeout per arithmetic query
ARITH_TIMEOUT_MS = 5000
