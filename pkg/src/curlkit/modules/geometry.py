"""
Charts, metrics, connections and their pullbacks.

Fields are evaluation maps: a closed-form field is a Python function of coordinate jets, and
evaluating it at a point returns a :class:`TensorJet` holding the component values together with
their first (and optionally second) partial derivatives. All tensor algebra downstream works on
these stacked arrays with ``numpy.einsum``.

Index conventions: ``first[..., m]`` is the derivative along coordinate m, Christoffel symbols are
stored as ``symbols[k, i, j] = Gamma^k_ij`` and their derivatives as ``derivatives[k, i, j, m]``.
"""
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import jets
from .jets import Jet
from ..utilities.errors import SingularMetricError
from ..utilities.performance_handling import Performance

DEFAULT_DET_FLOOR = 1e-10


class Chart:
    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(names) < 2:
            raise ValueError(f"Chart with coordinates {names} has dimension below 2")
        if len(set(names)) != len(names):
            raise ValueError(f"Chart coordinates {names} are not pairwise distinct")
        self.names = names

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def ell(self) -> int:
        if self.dim % 2 == 0:
            raise ValueError(f"Chart of dimension {self.dim} cannot carry a contact structure")
        return (self.dim - 1) // 2

    def __eq__(self, other):
        return isinstance(other, Chart) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Chart({', '.join(self.names)})"


@dataclass
class TensorJet:
    """Component values of a tensor at a point plus their stacked partial derivatives."""
    value: np.ndarray
    first: Optional[np.ndarray] = None
    second: Optional[np.ndarray] = None

    @property
    def order(self) -> int:
        if self.first is None:
            return 0
        return 1 if self.second is None else 2

    @staticmethod
    def from_jets(array, n: int) -> 'TensorJet':
        array = np.asarray(array, dtype=object)
        order = jets.jet_order(array)
        value = jets.values(array)
        first = jets.gradients(array, n) if order >= 1 else None
        second = jets.hessians(array, n) if order >= 2 else None
        return TensorJet(value, first, second)

    def jets(self, point: Optional[Tuple[float, ...]] = None) -> np.ndarray:
        return jets.assemble(self.value, self.first, self.second, point)

    def partial(self, i: int) -> 'TensorJet':
        if self.first is None:
            raise ValueError("Derivative requested from a tensor without derivative information")
        second_row = self.second[..., i, :] if self.second is not None else None
        return TensorJet(self.first[..., i], second_row)

    def truncate(self, order: int) -> 'TensorJet':
        if order >= self.order:
            return self
        return TensorJet(self.value, self.first if order >= 1 else None, None)

    def symmetrized(self) -> 'TensorJet':
        """Mirror the upper triangle of the two leading axes onto the lower one."""

        def mirror(array):
            if array is None:
                return None
            result = array.copy()
            n = array.shape[0]
            for i in range(n):
                for j in range(i):
                    result[i, j] = array[j, i]
            return result

        return TensorJet(mirror(self.value), mirror(self.first), mirror(self.second))


def _lift(item, n: int, order: int, point) -> Jet:
    if isinstance(item, Jet):
        return item
    return jets.constant(float(item), n, order, point)


def _check_point(chart: Chart, point: Sequence[float]) -> Tuple[float, ...]:
    point = tuple(float(coordinate) for coordinate in point)
    if len(point) != chart.dim:
        raise ValueError(f"Point {point} does not lie in the {chart.dim}-dimensional chart {chart}")
    return point


class MetricField:
    """
    Symmetric (0,2) tensor field on a chart.

    ``components`` maps a list of coordinate jets to a nested n x n list of jets or numbers; only
    the upper triangle is read. Subclasses that are not given by closed-form components override
    :meth:`evaluate`.
    """

    def __init__(self, chart: Chart, components: Optional[Callable[[List[Jet]], Sequence[Sequence]]] = None,
                 description: str = ""):
        self.chart = chart
        self.components = components
        self.description = description

    def evaluate(self, point: Sequence[float], order: int = 2) -> TensorJet:
        point = _check_point(self.chart, point)
        n = self.chart.dim
        seed_order = max(order, 1)
        coords = jets.seed_point(point, seed_order)
        raw = self.components(coords)
        matrix = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(i, n):
                matrix[i, j] = matrix[j, i] = _lift(raw[i][j], n, seed_order, point)
        return TensorJet.from_jets(matrix, n).truncate(order)

    def values(self, point: Sequence[float]) -> np.ndarray:
        return self.evaluate(point, order=1).value

    def linear_pullback(self, matrix: np.ndarray, chart: Chart, description: str = "") -> 'MetricField':
        """
        Closed-form pullback by the linear map x -> matrix @ x.

        Linear maps keep the pullback closed-form, so second derivatives stay available.
        """
        if self.components is None:
            raise ValueError(f"Metric {self.description} has no closed-form components to pull back")
        matrix = np.asarray(matrix, dtype=float)
        source = self

        def components(coords):
            image = [sum(float(matrix[a, i]) * coords[i] for i in range(len(coords))) for a in range(matrix.shape[0])]
            raw = source.components(image)
            m = matrix.shape[0]
            n = len(coords)
            return [[sum(float(matrix[a, i]) * float(matrix[b, j]) * raw[min(a, b)][max(a, b)]
                         for a in range(m) for b in range(m) if matrix[a, i] != 0 and matrix[b, j] != 0)
                     for j in range(n)] for i in range(n)]

        return MetricField(chart, components, description or f"linear pullback of {self.description}")


class CovectorField:
    """A 1-form; ``components`` maps coordinate jets to the n components."""

    def __init__(self, chart: Chart, components: Callable[[List[Jet]], Sequence], description: str = ""):
        self.chart = chart
        self.components = components
        self.description = description

    def evaluate(self, point: Sequence[float], order: int = 2) -> TensorJet:
        point = _check_point(self.chart, point)
        n = self.chart.dim
        seed_order = max(order, 1)
        coords = jets.seed_point(point, seed_order)
        raw = self.components(coords)
        vector = np.empty(n, dtype=object)
        for i in range(n):
            vector[i] = _lift(raw[i], n, seed_order, point)
        return TensorJet.from_jets(vector, n).truncate(order)

    def values(self, point: Sequence[float]) -> np.ndarray:
        return self.evaluate(point, order=1).value


@dataclass
class ConnectionJet:
    symbols: np.ndarray
    derivatives: Optional[np.ndarray] = None


class ConnectionField:
    """
    Torsion-free affine connection. ``symbols(point, order)`` returns a :class:`ConnectionJet`
    whose derivatives are present when order >= 1.
    """

    def __init__(self, chart: Chart, symbols: Callable[[Tuple[float, ...], int], ConnectionJet],
                 description: str = ""):
        self.chart = chart
        self.symbols = symbols
        self.description = description

    def evaluate(self, point: Sequence[float], order: int = 0) -> ConnectionJet:
        return self.symbols(_check_point(self.chart, point), order)

    @staticmethod
    def levi_civita(metric: MetricField, floor: float = DEFAULT_DET_FLOOR) -> 'ConnectionField':
        return ConnectionField(metric.chart, lambda point, order: christoffel(metric, point, order, floor),
                               f"Levi-Civita connection of {metric.description}")

    @staticmethod
    def flat(chart: Chart) -> 'ConnectionField':
        n = chart.dim

        def symbols(point, order):
            return ConnectionJet(np.zeros((n, n, n)), np.zeros((n, n, n, n)) if order >= 1 else None)

        return ConnectionField(chart, symbols, "flat connection")


class ChartMap:
    """
    Differentiable map between charts; ``components`` maps source coordinate jets to the image
    coordinates as jets, so first and second derivatives of the map come out of one evaluation.
    """

    def __init__(self, source: Chart, target: Chart, components: Callable[[List[Jet]], Sequence],
                 description: str = ""):
        self.source = source
        self.target = target
        self.components = components
        self.description = description

    def evaluate(self, point: Sequence[float], order: int = 2) -> TensorJet:
        point = _check_point(self.source, point)
        n = self.source.dim
        seed_order = max(order, 1)
        coords = jets.seed_point(point, seed_order)
        raw = self.components(coords)
        image = np.empty(self.target.dim, dtype=object)
        for a in range(self.target.dim):
            image[a] = _lift(raw[a], n, seed_order, point)
        return TensorJet.from_jets(image, n).truncate(order)

    def image(self, point: Sequence[float]) -> np.ndarray:
        return self.evaluate(point, order=1).value

    def jacobian(self, point: Sequence[float]) -> np.ndarray:
        return self.evaluate(point, order=1).first

    def compose(self, inner: 'ChartMap') -> 'ChartMap':
        """The map self o inner."""
        if inner.target != self.source:
            raise ValueError(f"Cannot compose a map on {self.source} after a map into {inner.target}")
        outer = self
        return ChartMap(inner.source, self.target, lambda coords: outer.components(list(inner.components(coords))),
                        f"{self.description} o {inner.description}")

    @staticmethod
    def identity(chart: Chart) -> 'ChartMap':
        return ChartMap(chart, chart, lambda coords: list(coords), "identity")

    @staticmethod
    def linear(matrix: np.ndarray, source: Chart, target: Optional[Chart] = None,
               offset: Optional[Sequence[float]] = None) -> 'ChartMap':
        matrix = np.asarray(matrix, dtype=float)
        offset = np.zeros(matrix.shape[0]) if offset is None else np.asarray(offset, dtype=float)

        def components(coords):
            return [sum(float(matrix[a, i]) * coords[i] for i in range(len(coords))) + float(offset[a])
                    for a in range(matrix.shape[0])]

        return ChartMap(source, target or source, components, "linear map")


# region inverse and Levi-Civita
def _inverse(tensor: TensorJet, point, floor: float) -> TensorJet:
    determinant = float(np.linalg.det(tensor.value))
    if abs(determinant) < floor:
        raise SingularMetricError(determinant, point)
    inverse = np.linalg.inv(tensor.value)
    if tensor.first is None:
        return TensorJet(inverse)
    # d(g^-1) = -g^-1 (dg) g^-1
    first = -np.einsum("ai,ijm,jb->abm", inverse, tensor.first, inverse)
    second = None
    if tensor.second is not None:
        second = (-np.einsum("aik,ijm,jb->abmk", first, tensor.first, inverse)
                  - np.einsum("ai,ijmk,jb->abmk", inverse, tensor.second, inverse)
                  - np.einsum("ai,ijm,jbk->abmk", inverse, tensor.first, first))
    return TensorJet(inverse, first, second).symmetrized()


def metric_inverse(g: MetricField, p: Sequence[float], order: int = 2,
                   floor: float = DEFAULT_DET_FLOOR) -> TensorJet:
    """
    Inverse metric g^ij at p with derivatives up to the requested order.

    Raises:
        SingularMetricError: when |det g| falls below the floor
    """
    return _inverse(g.evaluate(p, order), tuple(p), floor)


def christoffel_from_jet(tensor: TensorJet, point=None, order: int = 0,
                         floor: float = DEFAULT_DET_FLOOR) -> ConnectionJet:
    if tensor.first is None:
        raise ValueError("Christoffel symbols need the first derivatives of the metric")
    inverse = _inverse(tensor.truncate(1 if order == 0 else 2), point, floor)
    dg = tensor.first
    # lowered[l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    lowered = 0.5 * (np.einsum("jli->lij", dg) + np.einsum("ilj->lij", dg) - np.einsum("ijl->lij", dg))
    symbols = np.einsum("kl,lij->kij", inverse.value, lowered)
    symbols = 0.5 * (symbols + np.swapaxes(symbols, 1, 2))
    derivatives = None
    if order >= 1:
        if tensor.second is None:
            raise ValueError("Derivatives of Christoffel symbols need second derivatives of the metric")
        ddg = tensor.second
        d_lowered = 0.5 * (np.einsum("jlim->lijm", ddg) + np.einsum("iljm->lijm", ddg)
                           - np.einsum("ijlm->lijm", ddg))
        derivatives = (np.einsum("klm,lij->kijm", inverse.first, lowered)
                       + np.einsum("kl,lijm->kijm", inverse.value, d_lowered))
        derivatives = 0.5 * (derivatives + np.swapaxes(derivatives, 1, 2))
    return ConnectionJet(symbols, derivatives)


def christoffel(g: MetricField, p: Sequence[float], order: int = 0,
                floor: float = DEFAULT_DET_FLOOR) -> ConnectionJet:
    """
    Levi-Civita symbols Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij) at p.

    Args:
        g: metric field
        p: evaluation point
        order: 0 for the symbols only, 1 to include their first derivatives
        floor: determinant floor for the metric inversion
    """
    return christoffel_from_jet(g.evaluate(p, order=order + 1), tuple(p), order, floor)


# endregion

def projective_symbols(gamma, n: int):
    """
    Pi^k_ij = Gamma^k_ij - 1/(n+1) (delta^k_i Gamma^l_lj + delta^k_j Gamma^l_il).

    Accepts a symbol array or a :class:`ConnectionJet`; derivatives are projected the same way.
    """
    if isinstance(gamma, ConnectionJet):
        derivatives = None if gamma.derivatives is None else _project(gamma.derivatives, n)
        return ConnectionJet(_project(gamma.symbols, n), derivatives)
    return _project(np.asarray(gamma, dtype=float), n)


def _project(symbols: np.ndarray, n: int) -> np.ndarray:
    identity = np.eye(n)
    trace = np.einsum("llj...->j...", symbols)
    correction = (np.einsum("ki,j...->kij...", identity, trace) + np.einsum("kj,i...->kij...", identity, trace))
    return symbols - correction / (n + 1)


@dataclass
class Curvature:
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    lowered: np.ndarray


def curvature(g: MetricField, p: Sequence[float], floor: float = DEFAULT_DET_FLOOR) -> Curvature:
    """
    Riemann, Ricci and scalar curvature at p.

    R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
    R_jk = R^i_ijk and R = g^jk R_jk, so that round spheres have positive scalar curvature.
    The lowered tensor is R_ijkl = g_lm R^m_ijk.
    """
    tensor = g.evaluate(p, order=2)
    connection = christoffel_from_jet(tensor, tuple(p), 1, floor)
    gamma, d_gamma = connection.symbols, connection.derivatives
    riemann = (np.einsum("ljki->lijk", d_gamma) - np.einsum("likj->lijk", d_gamma)
               + np.einsum("lim,mjk->lijk", gamma, gamma) - np.einsum("ljm,mik->lijk", gamma, gamma))
    ricci = np.einsum("iijk->jk", riemann)
    inverse = np.linalg.inv(tensor.value)
    scalar = float(np.einsum("jk,jk->", inverse, ricci))
    lowered = np.einsum("lm,mijk->ijkl", tensor.value, riemann)
    return Curvature(riemann, ricci, scalar, lowered)


# region pullbacks
def pullback_metric(f: ChartMap, g: MetricField, p: Sequence[float]) -> TensorJet:
    """
    (f*g)_ij(p) = d_i f^a d_j f^b g_ab(f(p)) together with its first derivatives.

    The result carries first derivatives only, which is what the Levi-Civita connection of f*g
    needs. A singular Jacobian is reported through the performance log and the pullback is still
    returned.
    """
    image = f.evaluate(p, order=2)
    jacobian, hessian = image.first, image.second
    if jacobian.shape[0] == jacobian.shape[1] and abs(np.linalg.det(jacobian)) < DEFAULT_DET_FLOOR:
        Performance().warn(f"Jacobian of {f.description} is singular at {tuple(p)}, the pullback cannot be inverted")
    target = g.evaluate(image.value, order=1)
    value = np.einsum("ai,bj,ab->ij", jacobian, jacobian, target.value)
    first = (np.einsum("aik,bj,ab->ijk", hessian, jacobian, target.value)
             + np.einsum("ai,bjk,ab->ijk", jacobian, hessian, target.value)
             + np.einsum("ai,bj,abc,ck->ijk", jacobian, jacobian, target.first, jacobian))
    return TensorJet(value, first).symmetrized()


class PulledBackMetric(MetricField):
    """f*g as a metric field; evaluations carry first derivatives at most."""

    def __init__(self, f: ChartMap, metric: MetricField):
        super().__init__(f.source, None, f"pullback of {metric.description} by {f.description}")
        self.map = f
        self.metric = metric

    def evaluate(self, point: Sequence[float], order: int = 1) -> TensorJet:
        tensor = pullback_metric(self.map, self.metric, _check_point(self.chart, point))
        return tensor.truncate(order)


def pullback_connection(f: ChartMap, gamma: ConnectionField, p: Sequence[float]) -> ConnectionJet:
    """(f*Gamma)^k_ij = (Df^-1)^k_c (d_i d_j f^c + Gamma^c_ab(f(p)) d_i f^a d_j f^b)."""
    image = f.evaluate(p, order=2)
    jacobian, hessian = image.first, image.second
    determinant = float(np.linalg.det(jacobian))
    if abs(determinant) < DEFAULT_DET_FLOOR:
        raise SingularMetricError(determinant, p)
    inverse = np.linalg.inv(jacobian)
    target = gamma.evaluate(image.value, order=0).symbols
    symbols = np.einsum("kc,cij->kij", inverse,
                        hessian + np.einsum("cab,ai,bj->cij", target, jacobian, jacobian))
    return ConnectionJet(0.5 * (symbols + np.swapaxes(symbols, 1, 2)))


def pullback_symbols_tensor(f: ChartMap, tensor: np.ndarray, p: Sequence[float]) -> np.ndarray:
    """Tensorial pullback of a (2,1) tensor given at f(p): (Df^-1)^k_c T^c_ab d_i f^a d_j f^b."""
    jacobian = f.jacobian(p)
    return np.einsum("kc,cab,ai,bj->kij", np.linalg.inv(jacobian), tensor, jacobian, jacobian)


# endregion

def connection_perturb(gamma: ConnectionField, beta: CovectorField) -> ConnectionField:
    """
    The projectively equivalent connection Gamma^k_ij + delta^k_j beta_i + delta^k_i beta_j.
    """
    n = gamma.chart.dim
    identity = np.eye(n)

    def symbols(point, order):
        base = gamma.evaluate(point, order)
        covector = beta.evaluate(point, order=order + 1)
        shifted = (base.symbols + np.einsum("kj,i->kij", identity, covector.value)
                   + np.einsum("ki,j->kij", identity, covector.value))
        derivatives = None
        if order >= 1:
            derivatives = (base.derivatives + np.einsum("kj,im->kijm", identity, covector.first)
                           + np.einsum("ki,jm->kijm", identity, covector.first))
        return ConnectionJet(shifted, derivatives)

    return ConnectionField(gamma.chart, symbols, f"{gamma.description} shifted by {beta.description}")
