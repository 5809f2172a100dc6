from typing import List

from pydantic import BaseModel, ConfigDict, model_validator


def _is_power_of_two(x: int) -> bool:
    return x > 0 and (x & (x - 1)) == 0


class CacheConfig(BaseModel):
    """
    Geometry of a set-associative cache.

    Attributes
    ----------
    size_bytes : int
        Total capacity in bytes.
    ways : int
        Associativity.
    line_bytes : int
        Line size in bytes. Must be a power of two.
    """

    model_config = ConfigDict(frozen=True)

    size_bytes: int
    ways: int
    line_bytes: int = 64

    @model_validator(mode="after")
    def validate_geometry(self) -> "CacheConfig":
        if not _is_power_of_two(self.line_bytes):
            raise ValueError("line_bytes must be a power of two.")
        if self.ways < 1:
            raise ValueError("ways must be at least 1.")
        if self.size_bytes % (self.ways * self.line_bytes) != 0:
            raise ValueError("size_bytes must be a multiple of ways * line_bytes.")
        if not _is_power_of_two(self.sets):
            raise ValueError("The number of sets must be a power of two.")
        return self

    @property
    def sets(self) -> int:
        return self.size_bytes // (self.ways * self.line_bytes)


class CacheModel:
    """
    Set-associative cache with LRU replacement. Each set holds its tags ordered
    from least to most recently used.
    """

    __slots__ = ("config", "_line_shift", "_set_mask", "_ways", "_sets")

    def __init__(self, config: CacheConfig) -> None:
        self.config = config
        self._line_shift = config.line_bytes.bit_length() - 1
        self._set_mask = config.sets - 1
        self._ways = config.ways
        self._sets: List[List[int]] = [[] for _ in range(config.sets)]

    def access(self, address: int) -> bool:
        """
        Probe the cache with a byte address.

        Returns
        -------
        bool
            True on a hit. A hit moves the line to the most recently used
            position, a miss fills it and evicts the least recently used line
            when the set is full.
        """

        line = address >> self._line_shift
        ways = self._sets[line & self._set_mask]
        if line in ways:
            if ways[-1] != line:
                ways.remove(line)
                ways.append(line)
            return True
        if len(ways) >= self._ways:
            del ways[0]
        ways.append(line)
        return False
