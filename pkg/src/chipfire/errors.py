"""Exception hierarchy shared by every chipfire module."""


class ChipFiringError(Exception):
    """Base class for all errors raised by chipfire."""


class NotFireable(ChipFiringError):
    def __init__(self, site, reason="not enough chips"):
        super().__init__(f"site {site} cannot fire: {reason}")
        self.site = site


class IllegalAt(ChipFiringError):
    """A replayed sequence hit a site that could not fire.

    ``index`` is the zero-based position in the sequence.
    """

    def __init__(self, index, site):
        super().__init__(f"firing sequence illegal at index {index} (site {site})")
        self.index = index
        self.site = site


class StepCapExceeded(ChipFiringError):
    def __init__(self, cap):
        super().__init__(f"no stable configuration after {cap} firings")
        self.cap = cap


class NonTerminating(StepCapExceeded):
    """Raised by poset builders when the stabilize pre-pass hits its cap."""


class Unreachable(ChipFiringError):
    pass


class StateCapExceeded(ChipFiringError):
    def __init__(self, cap):
        super().__init__(f"configuration poset exceeds {cap} states")
        self.cap = cap


class IndexTooLarge(ChipFiringError):
    pass


class SeqCapExceeded(ChipFiringError):
    def __init__(self, cap):
        super().__init__(f"more than {cap} complete firing sequences")
        self.cap = cap


class NotALattice(ChipFiringError):
    def __init__(self, pair=None):
        msg = "poset is not a lattice"
        if pair is not None:
            msg += f" (no meet or join for {pair[0]!r}, {pair[1]!r})"
        super().__init__(msg)
        self.pair = pair


class NoLowerBound(ChipFiringError):
    pass


class NoUpperBound(ChipFiringError):
    pass


class SizeCapExceeded(ChipFiringError):
    def __init__(self, cap):
        super().__init__(f"more than {cap} order ideals")
        self.cap = cap


class CapExceeded(ChipFiringError):
    def __init__(self, cap):
        super().__init__(f"more than {cap} linear extensions")
        self.cap = cap


class NotBijective(ChipFiringError):
    pass


class ConfigNotFound(ChipFiringError):
    pass


class OddN(ChipFiringError, ValueError):
    def __init__(self, n):
        super().__init__(f"n must be even, got {n}")
        self.n = n


class ParseError(ChipFiringError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
