import os

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    return int(raw)


DATABASE_URL = os.getenv("PRISMEXT_DATABASE_URL", "sqlite+aiosqlite:///./reports.db")
LOG_LEVEL = os.getenv("PRISMEXT_LOG_LEVEL", "INFO")

# Harness
DEFAULT_SEED = _int_env("PRISMEXT_SEED", 42)
DEFAULT_SAMPLE_COUNT = _int_env("PRISMEXT_SAMPLE_COUNT", 10_000)
EXHAUSTIVE_CAP = _int_env("PRISMEXT_EXHAUSTIVE_CAP", 10**7)
FAILURE_WITNESS_LIMIT = _int_env("PRISMEXT_FAILURE_WITNESSES", 10)
HUNT_PROGRESS_EVERY = _int_env("PRISMEXT_HUNT_PROGRESS_EVERY", 100)
CHUNK_SIZE = _int_env("PRISMEXT_CHUNK_SIZE", 4096)

# Oracle
TIME_CHECK_INTERVAL = 1024
SAMPLE_ATTEMPT_FACTOR = _int_env("PRISMEXT_SAMPLE_ATTEMPT_FACTOR", 50)

# Extenders
MATCHING_ATTEMPTS = _int_env("PRISMEXT_MATCHING_ATTEMPTS", 64)

# Exit codes
EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3
