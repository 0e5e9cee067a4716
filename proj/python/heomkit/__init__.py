"""Python interface to the heomkit HEOM engine."""

from ._heomkit import (
    AdoIndex,
    AdosVector,
    BathFlavor,
    BathSpec,
    HeomMatrix,
    HierarchySpace,
    Parity,
    SolveReport,
    SystemSpec,
    build_heomls,
    conductance,
    count_ados,
    current,
    describe_ado,
    dos,
    enumerate_space,
    evolve_expm,
    evolve_ode,
    expectation,
    psd,
    reduced_density,
    run_config,
    run_oracle,
    shifted_solve,
    steadystate,
)

__all__ = [
    "AdoIndex",
    "AdosVector",
    "BathFlavor",
    "BathSpec",
    "HeomMatrix",
    "HierarchySpace",
    "Parity",
    "SolveReport",
    "SystemSpec",
    "build_heomls",
    "conductance",
    "count_ados",
    "current",
    "describe_ado",
    "dos",
    "enumerate_space",
    "evolve_expm",
    "evolve_ode",
    "expectation",
    "psd",
    "reduced_density",
    "run_config",
    "run_oracle",
    "shifted_solve",
    "steadystate",
]

__version__ = "0.1.0"
