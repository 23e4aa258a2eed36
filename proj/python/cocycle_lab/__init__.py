from ._core import (
    DomainError,
    Family,
    NumericalError,
    __version__,
    check_assumptions,
    lyapunov,
    lyapunov_B_exact,
    matchings,
    preset_names,
    roots,
    rotation,
    tangency,
    thouless,
    trace_roots,
    winding_length,
)

__all__ = [
    "DomainError",
    "Family",
    "NumericalError",
    "check_assumptions",
    "lyapunov",
    "lyapunov_B_exact",
    "matchings",
    "preset_names",
    "roots",
    "rotation",
    "tangency",
    "thouless",
    "trace_roots",
    "winding_length",
]
