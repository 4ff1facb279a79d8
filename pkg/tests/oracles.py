"""Independent reference constructions used only by the tests.

Nothing here imports the package: operators are built in the full
(N+1)^2-dimensional two-mode product space from single-mode ladder
matrices, and dynamics come from closed forms or a plain RK4 stepper.
"""

import math

import mpmath
import numpy as np


def ladder(dim):
    """Truncated annihilation operator on |0>..|dim-1>."""
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def inv_sqrt_n_plus_1(dim):
    return np.diag(1.0 / np.sqrt(np.arange(dim) + 1.0)).astype(complex)


def fixed_n_indices(n):
    """Product-space indices of |n1, n - n1> for n1 = 0..n."""
    d = n + 1
    return np.array([n1 * d + (n - n1) for n1 in range(d)])


def project(op, n):
    idx = fixed_n_indices(n)
    return op[np.ix_(idx, idx)]


def product_space_ops(n):
    """Mode operators in the (n+1)^2 product space, keyed by name."""
    d = n + 1
    eye = np.eye(d)
    a = ladder(d)
    r = inv_sqrt_n_plus_1(d)
    num = a.conj().T @ a
    return {
        "a1": np.kron(a, eye),
        "a2": np.kron(eye, a),
        "r1": np.kron(r, eye),
        "r2": np.kron(eye, r),
        "n1": np.kron(num, eye),
        "n2": np.kron(eye, num),
    }


def cn_pair_literal(n):
    """CN cosine and sine difference operators written factor by factor."""
    o = product_space_ops(n)
    a1, a2, r1, r2 = o["a1"], o["a2"], o["r1"], o["r2"]
    a1d, a2d = a1.conj().T, a2.conj().T
    first = r1 @ a1 @ a2d @ r2
    second = a1d @ r1 @ r2 @ a2
    cos = 0.5 * (first + second)
    sin = (first - second) / 2j
    return project(cos, n), project(sin, n)


def kron_fixed_n(n):
    """Projected number-conserving operators from the product space."""
    o = product_space_ops(n)
    a1, a2 = o["a1"], o["a2"]
    return {
        "hop21": project(a1.conj().T @ a2, n),
        "hop12": project(a2.conj().T @ a1, n),
        "n1": project(o["n1"], n),
        "n2": project(o["n2"], n),
        "w": project(o["n1"] - o["n2"], n),
    }


def binomial_amplitudes(n, jt):
    """Closed-form state exp(-iHt)|N,0> for H = J(a1^dag a2 + h.c.).

    Each atom ends up in cos(Jt)|1> - i sin(Jt)|2>.
    """
    c, s = math.cos(jt), math.sin(jt)
    k = np.arange(n + 1)
    binom = np.array([math.comb(n, int(kk)) for kk in k], dtype=float)
    return np.sqrt(binom) * c**k * (-1j * s) ** (n - k)


def cyclic_mean_mp(n, jt=mpmath.pi / 4, dps=40):
    """<psi|E|psi> with E the cyclic shift, in high precision."""
    with mpmath.workdps(dps):
        c, s = mpmath.cos(jt), mpmath.sin(jt)
        amp = [mpmath.sqrt(mpmath.binomial(n, k)) * c**k * (-1j * s) ** (n - k)
               for k in range(n + 1)]
        # (E psi)_{k-1} = psi_k and (E psi)_N = psi_0
        val = sum(mpmath.conj(amp[k - 1]) * amp[k] for k in range(1, n + 1))
        val += mpmath.conj(amp[n]) * amp[0]
        return complex(val)


def cyclic_sine_mp(n, jt=mpmath.pi / 4, dps=40):
    """<S12> = Im <E> at Jt = jt starting from |N,0>."""
    return cyclic_mean_mp(n, jt, dps).imag


def rk4(h, psi0, t_end, dt):
    """Fixed-step fourth-order Runge-Kutta for i dpsi/dt = H psi."""
    psi = np.array(psi0, dtype=complex)
    steps = int(round(t_end / dt))
    dt = t_end / steps
    f = lambda y: -1j * (h @ y)  # noqa: E731
    for _ in range(steps):
        k1 = f(psi)
        k2 = f(psi + 0.5 * dt * k1)
        k3 = f(psi + 0.5 * dt * k2)
        k4 = f(psi + dt * k3)
        psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def random_states(rng, dim, count):
    z = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)
