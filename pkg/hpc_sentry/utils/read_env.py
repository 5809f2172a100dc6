import os
from typing import Optional

LOG_LEVEL_KEY = "HPC_SENTRY_LOG_LEVEL"
CONFIG_PATH_KEY = "HPC_SENTRY_CONFIG"


def read_environment(key: str, default: Optional[str] = None) -> Optional[str]:
    """
    Read an environment variable, returning `default` when it is unset or empty.
    """

    value = os.environ.get(key)
    if value is None or value.strip() == "":
        return default
    return value.strip()
