import math

import numpy as np
import pytest

from curlkit.data_managers.expression_parser import parse_hamiltonian
from curlkit.modules.contact import darboux_form, flow_contact_defect
from curlkit.modules.darboux_poly import Poly, hamiltonian_field
from curlkit.modules.flows import ContactFlow, contact_flow, observed_order, rk4_integrate
from curlkit.utilities.errors import StepUnderflowError, TrajectoryEscapeError


def test_constant_hamiltonian_translates_along_z():
    image = contact_flow(Poly.constant(3, 1), 0.5, 10, (0.1, 0.2, 0.3))
    np.testing.assert_allclose(image.value, [0.1, 0.2, 0.8], atol=1e-15)
    np.testing.assert_allclose(image.first, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(image.second, 0.0, atol=1e-15)


def test_flow_of_z_is_the_scaling():
    t = 0.1
    flow = ContactFlow(parse_hamiltonian("z"), t, 100)
    point = (0.3, -0.5, 0.7)
    image = flow.evaluate(point, order=2)
    half, full = math.exp(t / 2), math.exp(t)
    np.testing.assert_allclose(image.value, [0.3 * half, -0.5 * half, 0.7 * full], atol=1e-8)
    np.testing.assert_allclose(image.first, np.diag([half, half, full]), atol=1e-8)
    np.testing.assert_allclose(image.second, 0.0, atol=1e-12)


def test_backward_flow_inverts_forward_flow():
    hamiltonian = parse_hamiltonian("z^2 + x1*y1 + 1/2*x1^2")
    forward = ContactFlow(hamiltonian, 0.2, 200)
    backward = ContactFlow(hamiltonian, -0.2, 200)
    point = (0.2, -0.1, 0.3)
    np.testing.assert_allclose(backward.image(forward.image(point)), point, atol=1e-10)


@pytest.mark.parametrize("text, ell", [("z^2 + x1*y1 + 1/2*x1^2", 1), ("x1*y2 - z*x2 + y1^2", 2)])
def test_flows_are_contact(text, ell):
    flow = ContactFlow(parse_hamiltonian(text, ell), 0.1, 50)
    point = tuple(np.linspace(-0.3, 0.4, 2 * ell + 1))
    assert flow_contact_defect(flow, darboux_form(ell), point) < 1e-9


def test_contact_defect_converges_at_fourth_order():
    flow = ContactFlow(parse_hamiltonian("z^2 + x1*y1 + 1/2*x1^2"), 0.1, 10)
    step_sizes = [1e-2, 5e-3]
    defects = [flow_contact_defect(flow.with_steps(int(round(0.1 / h))), darboux_form(1), (0.4, -0.3, 0.5))
               for h in step_sizes]
    assert observed_order(defects, step_sizes) >= 3.5


def test_step_size_and_refinement():
    flow = ContactFlow(parse_hamiltonian("z"), 0.1, 20)
    assert flow.step_size == pytest.approx(0.005)
    refined = flow.with_steps(40)
    assert refined.steps == 40
    assert refined.hamiltonian == flow.hamiltonian


def test_step_underflow():
    field = hamiltonian_field(parse_hamiltonian("z"))
    with pytest.raises(StepUnderflowError):
        rk4_integrate(field, [0.1, 0.2, 0.3], 1.0, 0)
    with pytest.raises(StepUnderflowError):
        rk4_integrate(field, [0.1, 0.2, 0.3], 1e-14, 10)


def test_blow_up_escapes():
    # dz/dt = z^2 leaves every bounded set before t = 1
    flow = ContactFlow(parse_hamiltonian("z^2"), 2.0, 100)
    with pytest.raises(TrajectoryEscapeError):
        flow.image((0.0, 0.0, 1.0))


def test_even_dimensional_hamiltonian_is_rejected():
    with pytest.raises(ValueError):
        ContactFlow(Poly.constant(4, 1), 0.1, 10)


def test_observed_order():
    assert observed_order([1e-8, 6.25e-10], [1e-2, 5e-3]) == pytest.approx(4.0)
    assert observed_order([1e-8, 0.0], [1e-2, 5e-3]) == math.inf
    with pytest.raises(ValueError):
        observed_order([1e-8], [1e-2])
