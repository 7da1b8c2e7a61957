"""
Frontlab - Exceptions
Error hierarchy shared by the theory, geometry, simulation and barrier packages.
"""


class FrontlabError(Exception):
    """Base class for all frontlab errors."""


class SearchFailed(FrontlabError):
    """No admissible (delta, mu, sigma) triple was found for the nonlinearity."""


class NoConvergence(FrontlabError):
    """A profile shooting or boundary value solve did not converge."""


class DeltaTooLarge(FrontlabError):
    """The forcing level admits no stable zero b with positive primitive."""


class TimeOutOfRange(FrontlabError):
    """A sub/supersolution was evaluated after its time horizon T."""


class BracketFailed(FrontlabError):
    """No bubble exists up to the radius cap."""


class TooCloseToObstacle(FrontlabError):
    """A bubble center lies closer to the obstacle than the bubble radius."""


class InvalidObstacle(FrontlabError):
    """An obstacle description is malformed or violates its shape contract."""


class DisconnectedComplement(FrontlabError):
    """The fluid cells of a rasterized domain are not one connected component."""


class ObstacleOutsideSlab(FrontlabError):
    """A solid cell lies outside the wall slab 0 <= x1 <= M."""


class CFLViolation(FrontlabError):
    """The time step breaks the monotonicity bound of the explicit scheme."""


class HorizonReached(FrontlabError):
    """A run hit t_max before reaching a steady state."""


class FrontTooClose(FrontlabError):
    """The initial front of the entire solution starts too close to the wall."""


class PathTooClose(FrontlabError):
    """A sliding path vertex lies closer to the obstacle than the bubble radius."""


class NotConverged(FrontlabError):
    """Barrier minimization hit its iteration cap."""


class Infeasible(FrontlabError):
    """A barrier certificate was requested for a geometry that fails its a-priori bound."""


class EmptySupport(FrontlabError):
    """A field with empty support was passed to a support-normalized functional."""


class ScenarioError(FrontlabError):
    """A scenario file could not be loaded or validated."""

    def __init__(self, message: str, path: str = None, line: int = None):
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line
