"""
Time-t flows of Darboux contact fields, used to manufacture contactomorphisms.

The classical fourth-order Runge-Kutta scheme is run on coordinate jets, so one integration
yields the flow map together with its first and second derivatives.
"""
import math
from typing import List, Sequence

import numpy as np

from .darboux_poly import Poly, PolyVectorField, hamiltonian_field, variable_names
from .geometry import Chart, ChartMap, TensorJet
from .jets import value_of
from ..utilities.errors import StepUnderflowError, TrajectoryEscapeError

MIN_STEP = 1e-12
ESCAPE_BOUND = 1e6


def _shifted(state: Sequence, slope: Sequence, factor: float) -> list:
    return [x + k * factor for x, k in zip(state, slope)]


def rk4_integrate(vector_field: PolyVectorField, state: Sequence, time: float, steps: int,
                  escape_bound: float = ESCAPE_BOUND) -> list:
    """
    Integrate dx/dt = X(x) from ``state`` for ``time`` in ``steps`` equal RK4 steps.

    The state may hold floats or jets; jets carry the derivatives of the flow with respect to
    the initial point.

    Raises:
        StepUnderflowError: when steps is not positive or the step size is below MIN_STEP
        TrajectoryEscapeError: when the trajectory becomes non-finite or leaves the escape bound
    """
    if steps <= 0:
        raise StepUnderflowError(f"Number of steps {steps} is not positive")
    h = time / steps
    if h != 0 and abs(h) < MIN_STEP:
        raise StepUnderflowError(f"Step size {h:.3e} is below {MIN_STEP:.0e}")
    state = list(state)
    for step in range(steps):
        k1 = vector_field.evaluate(state)
        k2 = vector_field.evaluate(_shifted(state, k1, h / 2))
        k3 = vector_field.evaluate(_shifted(state, k2, h / 2))
        k4 = vector_field.evaluate(_shifted(state, k3, h))
        state = [x + (a + 2 * b + 2 * c + d) * (h / 6) for x, a, b, c, d in zip(state, k1, k2, k3, k4)]
        values = [value_of(x) for x in state]
        if not all(math.isfinite(v) and abs(v) <= escape_bound for v in values):
            raise TrajectoryEscapeError(f"Trajectory left the chart after {step + 1} steps at {tuple(values)}")
    return state


class ContactFlow(ChartMap):
    """The time-``time`` flow of the contact field of ``hamiltonian``, a self-map of the Darboux chart."""

    def __init__(self, hamiltonian: Poly, time: float, steps: int, escape_bound: float = ESCAPE_BOUND):
        if hamiltonian.nvars % 2 == 0:
            raise ValueError(f"Hamiltonians live on odd-dimensional charts, got {hamiltonian.nvars} variables")
        chart = Chart(variable_names(hamiltonian.ell))
        self.hamiltonian = hamiltonian
        self.vector_field = hamiltonian_field(hamiltonian)
        self.time = float(time)
        self.steps = int(steps)
        self.escape_bound = escape_bound
        super().__init__(chart, chart, self._components,
                         f"flow of X_({hamiltonian}) for t = {self.time} in {self.steps} steps")

    def _components(self, coords: List) -> list:
        return rk4_integrate(self.vector_field, coords, self.time, self.steps, self.escape_bound)

    @property
    def step_size(self) -> float:
        return self.time / self.steps

    def with_steps(self, steps: int) -> 'ContactFlow':
        return ContactFlow(self.hamiltonian, self.time, steps, self.escape_bound)


def contact_flow(hamiltonian: Poly, time: float, steps: int, p: Sequence[float]) -> TensorJet:
    """The image of p under the flow, with the first and second derivatives of the flow map."""
    return ContactFlow(hamiltonian, time, steps).evaluate(p, order=2)


def observed_order(residuals: Sequence[float], step_sizes: Sequence[float]) -> float:
    """
    Smallest convergence order log(r_a / r_b) / log(h_a / h_b) over consecutive refinements.

    Residuals at rounding level carry no order information; a zero residual gives an infinite order.
    """
    if len(residuals) != len(step_sizes) or len(residuals) < 2:
        raise ValueError("An order estimate needs at least two residuals with matching step sizes")
    orders = []
    for (r_a, h_a), (r_b, h_b) in zip(zip(residuals, step_sizes), zip(residuals[1:], step_sizes[1:])):
        if r_a <= 0.0 or r_b <= 0.0:
            orders.append(math.inf)
            continue
        orders.append(math.log(r_a / r_b) / math.log(h_a / h_b))
    return float(np.min(orders))
