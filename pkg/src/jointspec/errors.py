"""Exception hierarchy shared by all modules."""


class JointSpecError(Exception):
    """Base class for errors raised by jointspec."""


class ShapeError(JointSpecError, ValueError):
    """Dimension or schema mismatch in the inputs."""


class ConvergenceError(JointSpecError):
    """An iterative routine exhausted its budget."""


class NotCommutingError(JointSpecError, ValueError):
    """A tuple failed its commutativity certificate."""


class CertificationError(JointSpecError, ValueError):
    """Structural input check failed (projection, unitary, product law, ...)."""


class InconclusiveError(JointSpecError):
    """A numerical decision fell inside its declared ambiguity band."""


class DegreeOverflowError(JointSpecError):
    """A polynomial degree bound exceeded the configured cap."""
