"""Exception types raised across the package."""


class StarworldsError(Exception):
    """Base class for all package errors."""


class MalformedInput(StarworldsError, ValueError):
    pass


class DegenerateHull(StarworldsError, ValueError):
    pass


class NotFreeExterior(StarworldsError, ValueError):
    pass


class PointInsideShape(StarworldsError, ValueError):
    pass


class OriginOutsideKernel(StarworldsError, ValueError):
    pass


class EmptyKernel(StarworldsError):
    pass


class RobotInsideObstacle(StarworldsError):
    pass


class GoalInsideObstacle(StarworldsError):
    pass


class IterationLimit(StarworldsError):
    pass


class InsideObstacle(StarworldsError):
    pass


class StalledTrajectory(StarworldsError):
    pass


class ParseError(StarworldsError, ValueError):
    """Scenario file could not be parsed; message carries line/field context."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class SchemaVersionError(ParseError):
    pass


class PlacementFailure(StarworldsError):
    pass
