"""
Central-difference oracles, independent of the jet machinery.
"""
import numpy as np

STEP = 1e-5
OUTER_STEP = 1e-4


def gradient(f, x, h=STEP):
    x = np.asarray(x, dtype=float)
    result = []
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        result.append((np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2 * h))
    # derivative index last
    return np.moveaxis(np.array(result), 0, -1)


def hessian(f, x, h=OUTER_STEP):
    return gradient(lambda y: gradient(f, y, h), x, h)


def christoffel(metric_values, x, h=STEP):
    """Gamma^k_ij from differences of the metric components."""
    g = metric_values(x)
    inverse = np.linalg.inv(g)
    dg = gradient(metric_values, x, h)
    # dg[i, j, m] = d_m g_ij
    lowered = 0.5 * (np.einsum("jli->lij", dg) + np.einsum("ilj->lij", dg) - np.einsum("ijl->lij", dg))
    return np.einsum("kl,lij->kij", inverse, lowered)


def contact_volume(theta_values, x, h=STEP):
    theta = theta_values(x)
    d = gradient(theta_values, x, h)
    # d[j, i] = d_i theta_j
    dtheta = d.T - d
    return theta[0] * dtheta[1, 2] - theta[1] * dtheta[0, 2] + theta[2] * dtheta[0, 1]


def curl(metric_values, theta_values, x, ell=1):
    """g^ij (d_i c_j - Pi^k_ij c_k) / |v|^mu for c = theta |v|^mu on a 3D chart."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    gamma = christoffel(metric_values, x)
    trace = np.einsum("llj->j", gamma)
    identity = np.eye(n)
    pi = gamma - (np.einsum("ki,j->kij", identity, trace) + np.einsum("kj,i->kij", identity, trace)) / (n + 1)
    theta = theta_values(x)
    d_theta = gradient(theta_values, x).T
    volume = contact_volume(theta_values, x)
    d_volume = gradient(lambda y: contact_volume(theta_values, y), x, OUTER_STEP)
    mu = -1.0 / (ell + 1)
    matrix = d_theta + mu * np.outer(d_volume, theta) / volume - np.einsum("kij,k->ij", pi, theta)
    return float(np.einsum("ij,ij->", np.linalg.inv(metric_values(x)), matrix))
