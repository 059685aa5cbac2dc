"""Monte Carlo threshold estimation for the mapped lattice gauge theories of
toric and color codes."""

from ._core import (
    DisorderSample,
    ExactResult,
    GaugeModel,
    MeasurementSet,
    NishimoriPoint,
    TemperatureMeasurement,
    __version__,
    apply_gauge,
    build_model,
    check_equilibration,
    delta_energy,
    energy,
    enumerate_exact,
    gauge_orbit_rank,
    generate_disorder,
    nishimori_point,
    run_sample,
    sheet_path,
    skewness,
    wilson_loop,
)

__all__ = [
    "DisorderSample",
    "ExactResult",
    "GaugeModel",
    "MeasurementSet",
    "NishimoriPoint",
    "TemperatureMeasurement",
    "__version__",
    "apply_gauge",
    "build_model",
    "check_equilibration",
    "delta_energy",
    "energy",
    "enumerate_exact",
    "gauge_orbit_rank",
    "generate_disorder",
    "nishimori_point",
    "run_sample",
    "sheet_path",
    "skewness",
    "wilson_loop",
]
