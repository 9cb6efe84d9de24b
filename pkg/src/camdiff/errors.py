"""Exception types shared across the toolkit."""


class CamdiffError(Exception):
    """Base class for all toolkit errors."""


class ZeroVector(CamdiffError):
    """Vector too close to the origin to convert to spherical coordinates."""


class Unreachable(CamdiffError):
    """No roll-free orientation can place the target at the requested screen position."""


class Degenerate(CamdiffError):
    """Camera coincides (or nearly coincides) with the look-at target."""


class InfeasibleConstraint(CamdiffError):
    """Sampling constraints name an incompatible combination of classes."""


class InvalidSpec(CamdiffError):
    """A property spec violates the requirements of the requested movement."""


class TooLong(CamdiffError):
    """Trajectory is already longer than the requested padding target."""


class IOFailure(CamdiffError):
    """Dataset or artifact files could not be written."""


class MissingEmbedding(CamdiffError):
    """File-backed embedding provider has no entry for the prompt."""


class EmptyPrompt(CamdiffError):
    """Prompt contains no embeddable tokens."""


class BadFile(CamdiffError):
    """Embedding file is malformed."""


class EmptyFile(CamdiffError):
    """Embedding file holds no frames."""


class RangeError(CamdiffError):
    """Numeric argument outside its permitted range."""


class ShapeMismatch(CamdiffError):
    """Array arguments have incompatible shapes."""


class LengthMismatch(CamdiffError):
    """Sequence length does not match the trained model length."""


class NonFiniteLoss(CamdiffError):
    """Training loss became NaN or infinite."""


class MaskShapeMismatch(CamdiffError):
    """Inpainting mask shape does not match the sequence."""


class TooFewSamples(CamdiffError):
    """Not enough feature samples for a stable covariance estimate."""


class EmptySet(CamdiffError):
    """Metric invoked on an empty collection."""


class DegenerateDataset(CamdiffError):
    """Classifier dataset is missing at least one movement class."""


class PlanInfeasible(CamdiffError):
    """A sequence plan asks for segments the model cannot produce."""
