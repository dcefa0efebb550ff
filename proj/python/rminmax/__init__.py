"""Geodesically convex minimization and min-max solvers on Hadamard manifolds.

The heavy lifting lives in the compiled extension ``rminmax._core``; this
package re-exports its config-driven entry points:

- ``solve(config_text)`` / ``solve_file(path)``: run one experiment and get
  the final point, optimality certificate, and trace CSV back as a dict.
- ``check(scope, config_dir)``: run the property-check suite.
- ``zeta(R, kmin)`` / ``delta(R, kmax)``: the curvature distortion constants.
"""

from rminmax._core import (
    ConfigError,
    GeometryError,
    SolverError,
    check,
    delta,
    solve,
    solve_file,
    zeta,
)

__all__ = [
    "ConfigError",
    "GeometryError",
    "SolverError",
    "check",
    "delta",
    "solve",
    "solve_file",
    "zeta",
]
