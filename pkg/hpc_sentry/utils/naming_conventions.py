from typing import Tuple

import regex as re

_SEPARATORS = re.compile(r"[\s\-\.]+")
_FEATURE_LABEL = re.compile(r"^(?P<stat>[a-z]+)_(?P<counter>[A-Z0-9_]+)$")


def normalize_counter_name(name: str) -> str:
    """
    Apply the SCREAMING_SNAKE_CASE convention used for counter names.

    "L1-ICM", "l1 icm" and "L1_ICM" all map to "L1_ICM".
    """

    assert len(name.strip()) > 0, "No counter name provided!"

    return _SEPARATORS.sub("_", name.strip()).upper()


def feature_label(stat: str, counter: str) -> str:
    """
    Build a feature column label of the form <stat>_<COUNTER>.
    """

    return f"{stat.lower()}_{normalize_counter_name(counter)}"


def parse_feature_label(label: str) -> Tuple[str, str]:
    """
    Split a feature column label into its statistic and counter name.

    Raises
    ------
    ValueError
        If the label does not follow the <stat>_<COUNTER> convention.
    """

    match = _FEATURE_LABEL.match(label.strip())
    if match is None:
        raise ValueError(f"Invalid feature label: {label}")
    return match.group("stat"), match.group("counter")

