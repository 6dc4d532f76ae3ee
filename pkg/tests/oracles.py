"""Independent reference computations used only by the tests.

Nothing here calls into the package's formulas; each routine takes a
different route to the same physical quantity.
"""

import cmath
import math

import numpy as np


def waves(s, gamma_s, gamma_l, drive="source"):
    """Solve the terminated two-port for (a1, b1, a2, b2).

    The generator wave is injected at port 1 (``drive="source"``) or port 2.
    Unknown order: a1, b1, a2, b2.
    """
    bs, bl = (1.0, 0.0) if drive == "source" else (0.0, 1.0)
    m = np.array(
        [
            [1, -gamma_s, 0, 0],
            [-s.s11, 1, -s.s12, 0],
            [-s.s21, 0, -s.s22, 1],
            [0, 0, 1, -gamma_l],
        ],
        dtype=complex,
    )
    return np.linalg.solve(m, np.array([bs, 0, 0, bl], dtype=complex))


def gain_by_waves(s, gamma_s, gamma_l):
    a1, b1, a2, b2 = waves(s, gamma_s, gamma_l)
    p_load = abs(b2) ** 2 - abs(a2) ** 2
    p_avail = 1.0 / (1 - abs(gamma_s) ** 2)
    return p_load / p_avail


def gamma_in_by_waves(s, gamma_l):
    a1, b1, _, _ = waves(s, 0.0, gamma_l)
    return b1 / a1


def gamma_out_by_waves(s, gamma_s):
    _, _, a2, b2 = waves(s, gamma_s, 0.0, drive="load")
    return b2 / a2


def noise_figure_gamma_form(f_min, gamma_opt, r_n, gamma_s, z0):
    """Noise figure written directly in reflection coefficients."""
    return f_min + 4 * r_n / z0 * abs(gamma_s - gamma_opt) ** 2 / (
        (1 - abs(gamma_s) ** 2) * abs(1 + gamma_opt) ** 2
    )


def naive_source_gamma(d1, l1, short_stub=True):
    """Literal transcription of the tan-form network formulas (Z0 = 1)."""
    t = math.tan(2 * math.pi * l1)
    if short_stub:
        zp = 1j * t / (1 + 1j * t)
    else:
        x = -1.0 / t
        zp = 1j * x / (1 + 1j * x)
    T = math.tan(2 * math.pi * d1)
    z = (zp.real + 1j * (T + zp.imag)) / (1 - zp.imag * T + 1j * zp.real * T)
    return (z - 1) / (z + 1)


def abcd_source_gamma(d1, l1):
    """Same network via ABCD matrices of a shorted shunt stub and a line."""
    bl = 2 * math.pi * l1
    bd = 2 * math.pi * d1
    # shunt short-circuited stub: Y = -j cot(bl)
    y_stub = -1j * math.cos(bl) / math.sin(bl)
    shunt = np.array([[1, 0], [y_stub, 1]], dtype=complex)
    line = np.array([[math.cos(bd), 1j * math.sin(bd)], [1j * math.sin(bd), math.cos(bd)]])
    # looking from the transistor: line, then stub, then unit source
    m = line @ shunt
    a, b, c, d = m.ravel()
    z = (a * 1 + b) / (c * 1 + d)
    return (z - 1) / (z + 1)


def random_passive_s(rng, max_norm=1.0):
    """2x2 complex matrix with spectral norm <= max_norm, as SParameters."""
    from lnaswarm.touchstone import SParameters

    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    a *= max_norm * rng.uniform(0.2, 1.0) / np.linalg.norm(a, 2)
    return SParameters(a[0, 0], a[0, 1], a[1, 0], a[1, 1])


def random_gamma(rng, rmax):
    return cmath.rect(rmax * math.sqrt(rng.uniform()), rng.uniform(-math.pi, math.pi))
