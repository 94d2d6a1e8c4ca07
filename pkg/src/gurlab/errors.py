"""Exception hierarchy shared by all gurlab modules."""


class GurlabError(Exception):
    """Base class for every error raised by gurlab."""


class DimMismatch(GurlabError, ValueError):
    pass


class NonHermitian(GurlabError, ValueError):
    pass


class NoConvergence(GurlabError, RuntimeError):
    pass


class DomainError(GurlabError, ValueError):
    """A scalar function was undefined on part of a spectrum."""


class NotNormal(GurlabError, ValueError):
    pass


class NotUnitary(GurlabError, ValueError):
    pass


class NotNormalized(GurlabError, ValueError):
    pass


class RangeError(GurlabError, ValueError):
    pass


class EdgeSupport(GurlabError, ValueError):
    """A truncated-model state carries too much weight near the cutoff."""


class MixedParity(GurlabError, ValueError):
    pass


class NonPeriodic(GurlabError, ValueError):
    pass


class SchemeMismatch(GurlabError, ValueError):
    pass


class ConfigError(GurlabError):
    """Invalid campaign configuration; ``str()`` carries the location."""

    def __init__(self, message, *, line=None, field=None):
        self.message = message
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
