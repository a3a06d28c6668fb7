"""Data-description language: compile format text, execute it over inputs."""

from graphzip.sddl.compiler import (
    MAX_DESTINATIONS,
    PRIMS,
    REST_DEST,
    DestInfo,
    SddlProgram,
    compile_description,
)
from graphzip.sddl.runtime import (
    FUEL_BASE,
    FUEL_PER_BYTE,
    default_fuel,
    execute,
    instructions_by_name,
)

__all__ = [
    "MAX_DESTINATIONS",
    "PRIMS",
    "REST_DEST",
    "DestInfo",
    "SddlProgram",
    "compile_description",
    "FUEL_BASE",
    "FUEL_PER_BYTE",
    "default_fuel",
    "execute",
    "instructions_by_name",
]
