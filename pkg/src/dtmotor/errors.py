"""Exception types shared across the package."""


class DtMotorError(Exception):
    """Base class for all dtmotor errors."""


class SingularSeriesError(DtMotorError):
    """Division-by-recurrence hit a near-zero leading denominator coefficient."""

    def __init__(self, leading: float, message: str = ""):
        self.leading = leading
        super().__init__(message or f"singular series division: |D(0)| = {abs(leading):.3e}")


class CouplingSingularError(DtMotorError):
    """The 2x2 source/injection coupling system is singular or ill-conditioned."""


class NoEquilibriumError(DtMotorError):
    """No torque-balance root was found in the slip search bracket."""


class EventInWindowError(DtMotorError):
    """A source event falls strictly inside an interval that must be event-free."""


class ScenarioError(DtMotorError):
    """Scenario file failed to parse or validate."""


class SimulationError(DtMotorError):
    """A simulation run aborted; carries the partial trajectory when available.

    Attributes
    ----------
    partial : Trajectory | None
        Samples produced before the failure.
    window_index, order : int | None
        Where the failure occurred, when known.
    """

    def __init__(self, message, partial=None, window_index=None, order=None):
        super().__init__(message)
        self.partial = partial
        self.window_index = window_index
        self.order = order
