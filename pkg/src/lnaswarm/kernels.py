"""Batch evaluation of many candidate designs against one device point.

Two interchangeable implementations: a vectorized numpy version and a
numba-compiled per-row loop. Both take canonical lengths of shape (N, 4)
ordered ``d1, l1, d2, l2`` and return a :class:`BatchMetrics`.
Non-physical rows (fully reflective source, oscillation boundary) come back
with ``defined == False`` rather than raising.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend

TWO_PI = 2.0 * np.pi


@dataclass
class BatchMetrics:
    gamma_s: np.ndarray
    gamma_l: np.ndarray
    gain: np.ndarray
    nf: np.ndarray  # linear; inf where undefined, nan when no noise data
    gamma_in: np.ndarray
    gamma_out: np.ndarray
    amp_s11: np.ndarray
    amp_s22: np.ndarray
    defined: np.ndarray

    @property
    def gain_db(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return 10.0 * np.log10(self.gain)

    @property
    def nf_db(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return 10.0 * np.log10(self.nf)


def _pack_device(s, noise, z0):
    has_noise = noise is not None
    params = np.array(
        [
            s.s11, s.s12, s.s21, s.s22,
            noise.gamma_opt if has_noise else 0.0,
            noise.f_min if has_noise else np.nan,
            noise.r_n if has_noise else np.nan,
            z0,
        ],
        dtype=np.complex128,
    )
    return params, has_noise


# ---------------------------------------------------------------------------
# numpy


# The side networks are lossless, so with z = num/den the real part of
# num*conj(den) is exactly sin(2*pi*l)**2. Using it directly gives
# 1 - |Gamma|^2 and Re(Y) without cancellation near |Gamma| = 1.


def _side_np(d, l):
    cl, sl = np.cos(TWO_PI * l), np.sin(TWO_PI * l)
    a, b = sl * sl, sl * cl
    cd, sd = np.cos(TWO_PI * d), np.sin(TWO_PI * d)
    num = (a * cd) + 1j * (sd + b * cd)
    den = (cd - b * sd) + 1j * (a * sd)
    tot = num + den
    return (num - den) / tot, 4.0 * a / np.abs(tot) ** 2, num, den, a


def _evaluate_numpy(x, params, has_noise):
    s11, s12, s21, s22, gopt, fmin, rn, z0 = params
    fmin, rn, z0 = fmin.real, rn.real, z0.real
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        gs, qs, ns, ds, a_s = _side_np(x[:, 0], x[:, 1])
        gl, ql, _, _, _ = _side_np(x[:, 2], x[:, 3])
        num = np.abs(s21) ** 2 * qs * ql
        den = np.abs((1 - s11 * gs) * (1 - s22 * gl) - s12 * s21 * gs * gl) ** 2
        ok_gain = den > 1e-30
        gain = np.where(ok_gain, num / np.where(ok_gain, den, 1.0), np.nan)

        din = 1 - s22 * gl
        dout = 1 - s11 * gs
        ok_in = np.abs(din) > 1e-15
        ok_out = np.abs(dout) > 1e-15
        gin = np.where(ok_in, s11 + s12 * s21 * gl / np.where(ok_in, din, 1.0), np.nan)
        gout = np.where(ok_out, s22 + s12 * s21 * gs / np.where(ok_out, dout, 1.0), np.nan)

        defined = ok_gain & ok_in & ok_out
        if has_noise:
            ok_nf = (a_s > 0) & (np.abs(ns) > 0)
            safe = np.where(ok_nf, ns, 1.0)
            ys = ds / safe / z0
            yopt = (1 - gopt) / (1 + gopt) / z0
            gsr = a_s / np.abs(safe) ** 2 / z0
            nf = np.where(ok_nf, fmin + rn / np.where(ok_nf, gsr, 1.0) * np.abs(ys - yopt) ** 2, np.inf)
            defined &= ok_nf
        else:
            nf = np.full(x.shape[0], np.nan)

        amp11 = np.abs(gin - np.conj(gs)) / np.abs(1 - gs * gin)
        amp22 = np.abs(gout - np.conj(gl)) / np.abs(1 - gl * gout)
    return gs, gl, gain, nf, gin, gout, amp11, amp22, defined


# ---------------------------------------------------------------------------
# numba

_evaluate_numba = None

if _backend.HAVE_NUMBA:
    import numba

    @numba.njit(cache=True, error_model="numpy")
    def _side_nb(d, l):
        cl, sl = np.cos(TWO_PI * l), np.sin(TWO_PI * l)
        a, b = sl * sl, sl * cl
        cd, sd = np.cos(TWO_PI * d), np.sin(TWO_PI * d)
        num = complex(a * cd, sd + b * cd)
        den = complex(cd - b * sd, a * sd)
        tot = num + den
        return (num - den) / tot, 4.0 * a / abs(tot) ** 2, num, den, a

    @numba.njit(cache=True, error_model="numpy")
    def _evaluate_numba(x, params, has_noise):
        n = x.shape[0]
        s11, s12, s21, s22, gopt = params[0], params[1], params[2], params[3], params[4]
        fmin, rn, z0 = params[5].real, params[6].real, params[7].real
        nan = np.nan
        cnan = complex(nan, nan)
        gs_out = np.empty(n, np.complex128)
        gl_out = np.empty(n, np.complex128)
        gain = np.empty(n)
        nf = np.empty(n)
        gin_out = np.empty(n, np.complex128)
        gout_out = np.empty(n, np.complex128)
        amp11 = np.empty(n)
        amp22 = np.empty(n)
        defined = np.empty(n, np.bool_)
        yopt = (1 - gopt) / (1 + gopt) / z0
        s21sq = abs(s21) ** 2
        for i in range(n):
            gs, qs, ns, ds, a_s = _side_nb(x[i, 0], x[i, 1])
            gl, ql, _, _, _ = _side_nb(x[i, 2], x[i, 3])
            ok = True
            num = s21sq * qs * ql
            den = abs((1 - s11 * gs) * (1 - s22 * gl) - s12 * s21 * gs * gl) ** 2
            if den > 1e-30:
                g = num / den
            else:
                g = nan
                ok = False
            din = 1 - s22 * gl
            if abs(din) > 1e-15:
                gin = s11 + s12 * s21 * gl / din
            else:
                gin = cnan
                ok = False
            dout = 1 - s11 * gs
            if abs(dout) > 1e-15:
                gout = s22 + s12 * s21 * gs / dout
            else:
                gout = cnan
                ok = False
            if has_noise:
                f = np.inf
                if a_s > 0 and abs(ns) > 0:
                    ys = ds / ns / z0
                    gsr = a_s / abs(ns) ** 2 / z0
                    f = fmin + rn / gsr * abs(ys - yopt) ** 2
                if f == np.inf:
                    ok = False
            else:
                f = nan
            gs_out[i] = gs
            gl_out[i] = gl
            gain[i] = g
            nf[i] = f
            gin_out[i] = gin
            gout_out[i] = gout
            amp11[i] = abs(gin - gs.conjugate()) / abs(1 - gs * gin)
            amp22[i] = abs(gout - gl.conjugate()) / abs(1 - gl * gout)
            defined[i] = ok
        return gs_out, gl_out, gain, nf, gin_out, gout_out, amp11, amp22, defined


def evaluate_batch(x, s, noise, z0: float, backend: str | None = None) -> BatchMetrics:
    """Evaluate every row of ``x`` (canonical lengths, shape (N, 4))."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != 4:
        raise ValueError(f"expected lengths of shape (N, 4), got {x.shape}")
    params, has_noise = _pack_device(s, noise, z0)
    if _backend.resolve(backend) == "numba":
        out = _evaluate_numba(x, params, has_noise)
    else:
        out = _evaluate_numpy(x, params, has_noise)
    return BatchMetrics(*out)
