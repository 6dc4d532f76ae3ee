"""Low-noise microwave amplifier design with a particle swarm.

Searches the four lengths of a two-sided single-stub matching topology so
the transducer gain hits a target while the noise figure and port
reflections stay within limits.
"""

__version__ = "0.1.0"

from .amplifier import (
    AmplifierMetrics,
    NoiseCircle,
    evaluate_design,
    input_reflection,
    noise_circle,
    noise_figure,
    output_reflection,
    source_admittance,
    transducer_gain,
)
from .design import (
    DesignResult,
    DesignSpec,
    DesignTargets,
    default_swarm,
    design_amplifier,
    evaluate_fixed,
    fitness,
    is_converged,
    sweep,
)
from .network import (
    DesignVector,
    canonicalize,
    line_transform,
    load_reflection,
    reflection_from_impedance,
    source_reflection,
    stub_parallel_impedance,
)
from .pso import SwarmConfig, run
from .touchstone import (
    DeviceData,
    DeviceDataPoint,
    NoiseParameters,
    SParameters,
    device_at,
    load_device,
    parse_device_file,
    serialize_device,
)
