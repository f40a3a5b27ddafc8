from typing import Optional, Sequence


class CurlkitError(Exception):
    pass


def _format_point(point: Optional[Sequence[float]]) -> str:
    if point is None:
        return "unknown point"
    return "(" + ", ".join(f"{float(coordinate):.6g}" for coordinate in point) + ")"


class SingularPointError(CurlkitError, ZeroDivisionError):
    def __init__(self, message: str, point: Optional[Sequence[float]] = None):
        self.point = None if point is None else tuple(float(coordinate) for coordinate in point)
        super().__init__(f"{message} at {_format_point(point)}")


class SingularMetricError(CurlkitError, ValueError):
    def __init__(self, determinant: float, point: Optional[Sequence[float]] = None):
        self.determinant = determinant
        self.point = None if point is None else tuple(float(coordinate) for coordinate in point)
        super().__init__(f"Metric is singular at {_format_point(point)}: det = {determinant:.3e}")


class DomainError(CurlkitError, ValueError):
    pass


class NonContactPointError(CurlkitError, ValueError):
    def __init__(self, volume_coefficient: float, point: Optional[Sequence[float]] = None):
        self.volume_coefficient = volume_coefficient
        self.point = None if point is None else tuple(float(coordinate) for coordinate in point)
        super().__init__(f"Contact condition fails at {_format_point(point)}: "
                         f"vol coefficient = {volume_coefficient:.3e}")


class OrderOverflowError(CurlkitError, ValueError):
    pass


class NonTangentFieldError(CurlkitError, ValueError):
    pass


class ExpressionError(CurlkitError, ValueError):
    def __init__(self, message: str, column: int):
        self.column = column
        super().__init__(f"{message} (column {column})")


class TrajectoryEscapeError(CurlkitError, RuntimeError):
    pass


class StepUnderflowError(CurlkitError, RuntimeError):
    pass


class UnknownGeometryError(CurlkitError, KeyError):
    def __str__(self):
        # KeyError quotes its argument, keep the message readable
        return str(self.args[0]) if self.args else ""


class ConfigurationError(CurlkitError, ValueError):
    pass
