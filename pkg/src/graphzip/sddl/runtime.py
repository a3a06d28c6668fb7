"""Sandboxed execution of compiled data descriptions.

Execution walks the description left-to-right over the input and emits
(destination, length) runs with adjacent same-destination runs merged. Every
read is bounds-checked and every interpreted step burns fuel, so a hostile
description terminates with a typed error no matter what: underrun when the
input does not conform, fuel exhaustion when the walk is too long.
"""

from __future__ import annotations

from typing import Optional

from graphzip.errors import FuelExhaustedError, SddlRuntimeError
from graphzip.sddl.compiler import (
    PRIMS,
    ArrayNode,
    BytesNode,
    PrimNode,
    RecordDef,
    RecordNode,
    SddlProgram,
    TailNode,
    TypeNode,
)

FUEL_BASE = 4096
FUEL_PER_BYTE = 16


def default_fuel(input_length: int) -> int:
    return FUEL_BASE + FUEL_PER_BYTE * input_length


class _Execution:
    def __init__(self, program: SddlProgram, data: bytes, fuel: int) -> None:
        self.program = program
        self.data = data
        self.fuel = fuel
        self.pos = 0
        self.runs: list[list[int]] = []  # [dest_index, length], merged
        self.dest_idx = {d.name: i for i, d in enumerate(program.destinations)}

    def charge(self, amount: int = 1) -> None:
        self.fuel -= amount
        if self.fuel < 0:
            raise FuelExhaustedError("description execution ran out of fuel")

    def need(self, count: int) -> None:
        if self.pos + count > len(self.data):
            raise SddlRuntimeError(
                f"input underrun at offset {self.pos}: need {count} bytes, "
                f"{len(self.data) - self.pos} remain"
            )

    def emit(self, dest: int, length: int) -> None:
        if length == 0:
            return
        if self.runs and self.runs[-1][0] == dest:
            self.runs[-1][1] += length
        else:
            self.runs.append([dest, length])

    def run_record(self, rec: RecordDef) -> None:
        self.charge()
        env: dict[str, int] = {}
        for f in rec.fields:
            node = f.ftype
            dest = self.dest_idx[f.dest]
            if isinstance(node, PrimNode) and PRIMS[node.prim][2]:
                # Scalar integer: remember its value for later counts.
                width, endian, _, _ = PRIMS[node.prim]
                self.charge()
                self.need(width)
                env[f.name] = int.from_bytes(
                    self.data[self.pos : self.pos + width],
                    "little" if endian == "le" else "big",
                )
                self.emit(dest, width)
                self.pos += width
            else:
                self.run_type(node, dest, env)

    def run_type(self, node: TypeNode, dest: int, env: dict[str, int]) -> None:
        if isinstance(node, PrimNode):
            self.charge()
            self.need(node.width)
            self.emit(dest, node.width)
            self.pos += node.width
        elif isinstance(node, BytesNode):
            self.charge()
            self.need(node.size)
            self.emit(dest, node.size)
            self.pos += node.size
        elif isinstance(node, RecordNode):
            self.run_record(self.program.records[node.name])
        elif isinstance(node, ArrayNode):
            self.charge()
            count = node.count if isinstance(node.count, int) else env[node.count]
            element = node.element
            if isinstance(element, (PrimNode, BytesNode)):
                width = element.width if isinstance(element, PrimNode) else element.size
                total = count * width
                self.need(total)  # bounds before fuel: bad counts fail fast
                self.charge(count)
                self.emit(dest, total)
                self.pos += total
            else:
                for _ in range(count):
                    self.charge()
                    self.run_type(element, dest, env)
        elif isinstance(node, TailNode):
            while self.pos < len(self.data):
                start = self.pos
                self.charge()
                self.run_type(node.element, dest, env)
                if self.pos == start:
                    raise SddlRuntimeError("tail element consumes no input")
        else:  # pragma: no cover - node union is closed
            raise SddlRuntimeError(f"unknown type node {type(node).__name__}")


def execute(
    program: SddlProgram, data: bytes, *, fuel: Optional[int] = None
) -> list[tuple[int, int]]:
    """Run a program over input bytes; returns merged (dest_index, length) runs.

    The run lengths always sum to ``len(data)`` on success; any nonconformance
    raises SddlRuntimeError (or FuelExhaustedError) without partial output.
    """
    data = bytes(data)
    state = _Execution(program, data, default_fuel(len(data)) if fuel is None else fuel)
    rest = state.dest_idx["rest"]
    state.run_type(state.program.main, rest, {})
    if state.pos != len(data):
        raise SddlRuntimeError(
            f"{len(data) - state.pos} trailing bytes not covered by the description"
        )
    return [(dest, length) for dest, length in state.runs]


def instructions_by_name(program: SddlProgram, instructions) -> list[tuple[str, int]]:
    """Convenience view of runs keyed by destination name."""
    return [(program.destinations[d].name, length) for d, length in instructions]
