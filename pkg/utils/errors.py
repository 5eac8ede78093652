"""
Exception hierarchy shared by the numerics, bound pipelines, simulator and CLI
"""
from typing import Any, Iterable, List, Optional


class NodalBoundsError(Exception):
    """Base class for every error raised by this project"""


class EnvelopeError(NodalBoundsError, ValueError):
    """Input outside the documented accuracy envelope or supported range"""


class NoSignChangeError(NodalBoundsError, ValueError):
    """Bracket endpoints do not straddle a root"""

    def __init__(self, lo: float, hi: float, f_lo: float, f_hi: float):
        self.lo = lo
        self.hi = hi
        super().__init__(f"No sign change on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}")


class BandUnboundedError(NodalBoundsError, ValueError):
    """Level set component merges with its neighbour because eps is too large"""


class HypothesisError(NodalBoundsError):
    """One or more hypothesis checks failed; carries the failing check names"""

    def __init__(self, failed: Iterable[str], message: str = "", checklist: Optional[Any] = None):
        self.failed: List[str] = list(failed)
        self.checklist = checklist
        detail = message or "hypothesis checks failed"
        super().__init__(f"{detail}: {', '.join(self.failed)}")


class DegenerateError(NodalBoundsError, ValueError):
    """Formula is undefined at this input (e.g. |J0(r)| = 1)"""


class NoSolutionError(NodalBoundsError):
    """Equation has no zero inside the search bracket"""


class UsageError(NodalBoundsError):
    """Operator error on the command line or in a config file"""
