from typing import Dict

PREDICTOR_INITIAL_STATE = 1
_TAKEN_THRESHOLD = 2
_MAX_STATE = 3


class BranchPredictor:
    """
    Per-site 2-bit saturating counters. States run 0..3, a site predicts taken
    iff its state is at least 2, and unseen sites start weakly not-taken.
    """

    __slots__ = ("_table", "_initial")

    def __init__(self, initial_state: int = PREDICTOR_INITIAL_STATE) -> None:
        if not 0 <= initial_state <= _MAX_STATE:
            raise ValueError("initial_state must be within 0..3")
        self._table: Dict[int, int] = {}
        self._initial = initial_state

    def update(self, site: int, taken: bool) -> bool:
        """
        Consult and train the counter of `site`. Returns True on a misprediction.
        """

        state = self._table.get(site, self._initial)
        mispredicted = (state >= _TAKEN_THRESHOLD) != taken
        if taken:
            if state < _MAX_STATE:
                state += 1
        elif state > 0:
            state -= 1
        self._table[site] = state
        return mispredicted

    def state(self, site: int) -> int:
        return self._table.get(site, self._initial)

    def reset(self) -> None:
        self._table.clear()
