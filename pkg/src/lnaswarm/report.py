"""Run reports, CSV writers and command-line value parsing."""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
import os
import re
import tempfile
from dataclasses import asdict
from pathlib import Path

from .amplifier import AmplifierMetrics, NoiseCircle, mag_db
from .design import DesignResult, DesignSpec

REPORT_SCHEMA = "lnaswarm.run-report/1"

_FREQ_SUFFIX = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def parse_frequency(text: str) -> float:
    """``4e9``, ``4GHz``, ``4000 MHz`` -> hertz."""
    m = re.fullmatch(rf"\s*({_NUM})\s*([a-zA-Z]*)\s*", text)
    if not m:
        raise ValueError(f"bad frequency {text!r}")
    unit = m.group(2).lower() or "hz"
    if unit not in _FREQ_SUFFIX:
        raise ValueError(f"bad frequency unit {m.group(2)!r}")
    f = float(m.group(1)) * _FREQ_SUFFIX[unit]
    if not (math.isfinite(f) and f > 0):
        raise ValueError(f"frequency must be positive, got {text!r}")
    return f


def parse_length(text: str) -> float:
    """``41.16deg`` or ``0.1143lam`` -> wavelengths (not yet canonicalized)."""
    m = re.fullmatch(rf"\s*({_NUM})\s*(deg|lam)\s*", text)
    if not m:
        raise ValueError(f"length {text!r} needs a 'deg' or 'lam' suffix")
    v = float(m.group(1))
    return v / 360.0 if m.group(2) == "deg" else v


def parse_gamma(text: str) -> complex:
    """``0.75@56.1`` (magnitude@degrees) or ``0.42+0.62j``."""
    if "@" in text:
        mag, ang = text.split("@", 1)
        return cmath.rect(float(mag), math.radians(float(ang)))
    return complex(text.replace(" ", ""))


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(x: float):
    x = float(x)
    return x if math.isfinite(x) else None


def _polar(g: complex) -> dict:
    if not (math.isfinite(g.real) and math.isfinite(g.imag)):
        return {"mag": None, "deg": None, "re": None, "im": None}
    return {
        "mag": abs(g),
        "deg": math.degrees(cmath.phase(g)),
        "re": g.real,
        "im": g.imag,
    }


def metrics_dict(m: AmplifierMetrics) -> dict:
    return {
        "gain_db": _num(m.gain_db),
        "gain_linear": _num(m.gain_linear),
        "noise_figure_db": _num(m.noise_figure_db),
        "noise_figure_linear": _num(m.noise_figure_linear),
        "gamma_s": _polar(m.gamma_s),
        "gamma_l": _polar(m.gamma_l),
        "gamma_in": _polar(m.gamma_in),
        "gamma_out": _polar(m.gamma_out),
        "gamma_in_db": _num(mag_db(m.gamma_in)),
        "gamma_out_db": _num(mag_db(m.gamma_out)),
        "amp_s11_db": _num(mag_db(m.amp_s11)),
        "amp_s22_db": _num(mag_db(m.amp_s22)),
        "defined": m.defined,
    }


def swarm_dict(cfg) -> dict:
    d = asdict(cfg)
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}


def build_run_report(spec: DesignSpec, result: DesignResult, device_path: str | None = None,
                     timing: dict | None = None, swarm=None) -> dict:
    """Versioned report echoing every effective setting. Timing sits in its own key."""
    v = result.best
    tr = result.trace
    report = {
        "schema": REPORT_SCHEMA,
        "device": {
            "name": spec.device.name,
            "path": device_path,
            "reference_impedance_ohm": spec.device.reference_impedance,
        },
        "design_frequency_hz": spec.design_frequency,
        "targets": asdict(spec.targets),
        "swarm": swarm_dict(swarm if swarm is not None else spec.swarm),
        "seed": result.seed,
        "result": {
            "feasible": result.feasible,
            "fitness": _num(result.fitness),
            "lengths_lambda": dict(zip(("d1", "l1", "d2", "l2"), v.as_tuple())),
            "lengths_deg": dict(zip(("d1", "l1", "d2", "l2"), v.degrees())),
            "metrics": metrics_dict(result.metrics),
        },
        "trace": {
            "records": len(tr),
            "final_n_converged": tr.n_converged[-1],
            "final_n_feasible": tr.n_feasible[-1],
            "max_n_converged": max(tr.n_converged),
            "first_feasible_iteration": next(
                (it for it, f in zip(tr.iteration, tr.gbest_feasible) if f), None
            ),
        },
    }
    if timing is not None:
        report["timing"] = timing
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False, allow_nan=False) + "\n"


def format_metrics(m: AmplifierMetrics, v=None) -> str:
    def pol(g):
        if not (math.isfinite(g.real) and math.isfinite(g.imag)):
            return "undefined"
        return f"{abs(g):.6f} @ {math.degrees(cmath.phase(g)):.5f} deg"

    lines = []
    if v is not None:
        lam = "  ".join(f"{n}={x:.6f}" for n, x in zip(("d1", "l1", "d2", "l2"), v.as_tuple()))
        deg = "  ".join(f"{n}={x:.4f}" for n, x in zip(("d1", "l1", "d2", "l2"), v.degrees()))
        lines += [f"lengths [lambda]: {lam}", f"lengths [deg]:    {deg}"]
    lines += [
        f"gain            {m.gain_db:.4f} dB",
        f"noise figure    {m.noise_figure_db:.6f} dB",
        f"Gamma_s         {pol(m.gamma_s)}",
        f"Gamma_L         {pol(m.gamma_l)}",
        f"|Gamma_in|      {mag_db(m.gamma_in):.4f} dB",
        f"|Gamma_out|     {mag_db(m.gamma_out):.4f} dB",
        f"amplifier |S11| {mag_db(m.amp_s11):.4f} dB",
        f"amplifier |S22| {mag_db(m.amp_s22):.4f} dB",
    ]
    return "\n".join(lines) + "\n"


def _cell(x: float) -> str:
    return repr(float(x)) if math.isfinite(x) else ""


def sweep_csv(rows) -> str:
    """``freq_hz,gain_db,nf_db,s11_db,s22_db``; S11/S22 are the complete amplifier's."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["freq_hz", "gain_db", "nf_db", "s11_db", "s22_db"])
    for f, m in rows:
        w.writerow([repr(float(f)), _cell(m.gain_db), _cell(m.noise_figure_db),
                    _cell(mag_db(m.amp_s11)), _cell(mag_db(m.amp_s22))])
    return buf.getvalue()


def circle_csv(circle: NoiseCircle, samples: int, overlays=()) -> str:
    """Boundary rows (``inside`` empty) followed by overlay points with a 0/1 flag."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "re", "im", "inside"])
    for p in circle.boundary(samples):
        w.writerow(["boundary", repr(p.real), repr(p.imag), ""])
    for g in overlays:
        w.writerow(["overlay", repr(g.real), repr(g.imag), int(circle.contains(g))])
    return buf.getvalue()
