"""Exception types raised by the library."""


class LSECError(Exception):
    """Base class for library errors."""


class FormatError(LSECError, ValueError):
    """A data or label file does not parse under its declared format."""


class ParamError(LSECError, ValueError):
    """An argument is outside its allowed range."""


class DimMismatch(LSECError, ValueError):
    """Array shapes are inconsistent."""


class LengthMismatch(LSECError, ValueError):
    """Two label vectors have different lengths."""


class DegenerateGraph(LSECError, ValueError):
    """A bipartite graph has a vertex on the point side with no edges."""


class ConvergenceError(LSECError, RuntimeError):
    """An eigensolver did not reach the required residual."""


class MalformedEnsemble(LSECError, ValueError):
    """Base clusterings are missing, mis-sized or not contiguously labelled."""
