"""Exception types shared across the toolkit."""


class ReplaykitError(Exception):
    """Base class for all toolkit-specific errors."""


class WavFormatError(ReplaykitError):
    """The file is not a well-formed RIFF/WAVE container."""


class UnsupportedWavError(WavFormatError):
    """The WAV encoding is readable but not one we accept (16-bit PCM / 32-bit float)."""


class InfeasibleGeometryError(ReplaykitError):
    """Room/position sampling could not satisfy the distance constraints."""


class InsufficientDecayError(ReplaykitError):
    """Impulse response does not decay far enough for a T60 estimate."""


class DeviceSynthesisError(ReplaykitError):
    """Could not synthesize a device meeting the requested quality class."""


class DegenerateCostError(ReplaykitError):
    """Tandem-DCF cost coefficients are non-positive for the given ASV rates."""


class ValidationError(ReplaykitError):
    """Input data (manifest, scores, embeddings) failed consistency checks."""
