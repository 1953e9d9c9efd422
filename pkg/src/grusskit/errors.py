"""Exception types raised by :mod:`grusskit`."""


class GrussError(Exception):
    """Base class for every error raised by the toolkit."""


class DimensionError(GrussError, ValueError):
    """Matrices or vectors have incompatible or invalid shapes."""


class PreconditionError(GrussError, ValueError):
    """An input violates a mathematical precondition.

    ``predicate`` names the violated condition and ``residual`` carries the
    measured quantity that exceeded its threshold (``None`` when not
    applicable).
    """

    def __init__(self, predicate, residual=None, detail=""):
        self.predicate = predicate
        self.residual = residual
        msg = predicate if residual is None else f"{predicate} {float(f'{residual:.6g}')!r}"
        if detail:
            msg = f"{msg} ({detail})"
        super().__init__(msg)


class NotHermitianError(PreconditionError):
    """Raised by the Hermitian eigensolver; ``residual`` is ``||H - H*||``."""

    def __init__(self, residual):
        super().__init__("hermitian residual", residual)


class ConvergenceError(GrussError, RuntimeError):
    """An iterative method exhausted its iteration budget."""


class UnknownFixtureError(GrussError, KeyError):
    """Requested fixture name is not registered."""
