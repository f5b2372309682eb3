"""Exception hierarchy.

Everything raised on purpose by this package derives from PsfexpError, so
callers (and the CLI) can separate domain errors from genuine bugs.
"""


class PsfexpError(Exception):
    """Base class for all domain errors."""


class AddressSyntaxError(PsfexpError):
    """Address text does not match the grammar."""


class AddressLimitError(PsfexpError):
    """Entry magnitude or word length exceeds the sanity caps."""


class ConstantPivotError(PsfexpError):
    """A constant sequence was used as a partition pivot."""


class BoundaryError(PsfexpError):
    """Pullback target sits on a partition boundary."""


class UndefinedItineraryError(PsfexpError):
    """Some shift of the input hits the pivot, leaving the itinerary undefined."""


class PeriodicAddressError(PsfexpError):
    """Strictly preperiodic input required."""


class FirstEntryNonzeroError(PsfexpError):
    """Operation requires an address starting with entry 0."""


class ConsistencyError(PsfexpError):
    """Reconstructed or cross-checked data contradicts itself."""


class ClassSizeViolationError(ConsistencyError):
    """Enumerated class size contradicts the k/k' law; indicates a bug."""


class SearchLimitError(PsfexpError):
    """An enumeration would exceed its resource cap."""


class FormatError(PsfexpError):
    """Unsupported export format or malformed serialized data."""


class EvalOverflowError(PsfexpError):
    """exp() argument beyond double range (Re z > 700)."""


class RayCollisionError(PsfexpError):
    """A ray pullback hit the omitted value 0."""


class NonConvergenceError(PsfexpError):
    """An iterative solver ran out of iterations."""


class SpuriousRootError(PsfexpError):
    """Newton converged to a parameter with the wrong orbit portrait."""


class ContinuationError(PsfexpError):
    """Parameter-ray continuation diverged even after step halving."""


class PipelineError(PsfexpError):
    """A find_lambda stage failed; carries the stage tag."""

    def __init__(self, stage, message):
        super().__init__("[%s] %s" % (stage, message))
        self.stage = stage
