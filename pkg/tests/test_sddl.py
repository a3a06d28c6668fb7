"""Data-description compiler and sandboxed execution engine."""

import numpy as np
import pytest

from graphzip.core.engine import compress
from graphzip.core.streams import TypedStream
from graphzip.errors import (
    FuelExhaustedError,
    SddlError,
    SddlRuntimeError,
    SddlSyntaxError,
)
from graphzip.format import read_frame, write_frame
from graphzip.frontends import build_input_graph
from graphzip.graphs import CompressorConfig
from graphzip.sddl import (
    MAX_DESTINATIONS,
    PRIMS,
    REST_DEST,
    compile_description,
    default_fuel,
    execute,
    instructions_by_name,
)

POINT_DESC = "record P { id: u32le -> ids; v: f32le -> vals; } main: P[];"
PREFIXED_DESC = "record R { n: u16le; body: u8[n] -> payload; } main: R[];"


def run(desc, data, **kw):
    program = compile_description(desc)
    return instructions_by_name(program, execute(program, data, **kw))


# -- compilation --------------------------------------------------------------


def test_point_record_has_two_destinations_plus_rest():
    program = compile_description(POINT_DESC)
    dests = [(d.name, str(d.stype)) for d in program.destinations]
    assert dests == [("ids", "numeric(4)"), ("vals", "numeric(4)"), ("rest", "serial")]
    ids, vals, rest = program.destinations
    assert ids.endian == "le" and not ids.is_float
    assert vals.is_float
    assert program.destinations[-1].name == REST_DEST


def test_prims_cover_declared_set():
    assert set(PRIMS) == {"u8", "u16le", "u16be", "u32le", "u32be", "u64le", "u64be", "f32le"}


def test_array_of_array_with_tail_repeat_compiles():
    program = compile_description("main: u8[3][];")
    assert execute(program, bytes(6)) == [(0, 6)]
    assert program.destinations[0].name == REST_DEST


def test_recursive_records_rejected():
    with pytest.raises(SddlError, match="recursive"):
        compile_description("record A { x: B; } record B { y: A; } main: A;")
    with pytest.raises(SddlError, match="recursive"):
        compile_description("record A { x: A; } main: A;")


def test_forward_count_reference_rejected():
    with pytest.raises(SddlError, match="earlier integer field"):
        compile_description("record Q { body: u8[n] -> p; n: u16le; } main: Q;")


def test_count_must_be_integer_field():
    with pytest.raises(SddlError, match="earlier integer field"):
        compile_description("record Q { x: f32le; body: u8[x] -> p; } main: Q;")


def test_tail_repeat_only_at_outermost_position():
    with pytest.raises(SddlError, match="outermost"):
        compile_description("main: u8[][3];")
    with pytest.raises(SddlError, match="outermost"):
        compile_description("record P { xs: u8[]; } main: P;")


def test_syntax_errors_carry_line_and_column():
    with pytest.raises(SddlSyntaxError, match=r"1:23"):
        compile_description("record P { x: u8 -> a } main: P;")
    with pytest.raises(SddlSyntaxError, match=r"2:"):
        compile_description("record P { x: u8; }\nmain Q;")


def test_unknown_type_and_record_rejected():
    with pytest.raises(SddlError, match="unknown type or record 'q8'"):
        compile_description("main: q8;")
    with pytest.raises(SddlError, match="unknown type or record 'Z'"):
        compile_description("main: Z[];")


def test_duplicate_field_rejected():
    with pytest.raises(SddlError, match="duplicate field"):
        compile_description("record P { x: u8 -> a; x: u8 -> b; } main: P;")


def test_record_typed_field_cannot_route():
    with pytest.raises(SddlError, match="primitive"):
        compile_description("record Inner { x: u8; } record P { p: Inner -> a; } main: P;")


def test_destination_cap_enforced():
    fields = "".join(f"f{i}: u8 -> d{i}; " for i in range(MAX_DESTINATIONS + 1))
    with pytest.raises(SddlError, match="routing limit"):
        compile_description("record P { %s} main: P;" % fields)


def test_shared_destination_same_type_keeps_type():
    program = compile_description("record P { a: u32le -> v; b: u32le -> v; } main: P;")
    assert [(d.name, str(d.stype)) for d in program.destinations] == [
        ("v", "numeric(4)"),
        ("rest", "serial"),
    ]


def test_shared_destination_mixed_types_demotes_to_serial():
    program = compile_description("record P { a: u32le -> v; b: u16le -> v; } main: P;")
    assert str(program.destinations[0].stype) == "serial"
    assert run("record P { a: u32le -> v; b: u16le -> v; } main: P;", bytes(6)) == [("v", 6)]


def test_bytes_prim_takes_fixed_length():
    assert run("record H { magic: bytes(4); body: bytes(2) -> t; } main: H;", b"GMC1xy") == [
        ("rest", 4),
        ("t", 2),
    ]
    with pytest.raises(SddlSyntaxError):
        compile_description("main: bytes();")


# -- execution ----------------------------------------------------------------


def test_point_records_trace():
    assert run(POINT_DESC, bytes(range(16))) == [
        ("ids", 4),
        ("vals", 4),
        ("ids", 4),
        ("vals", 4),
    ]


def test_length_prefixed_trace():
    assert run(PREFIXED_DESC, b"\x02\x00hi") == [("rest", 2), ("payload", 2)]


def test_adversarial_count_underruns_within_fuel():
    program = compile_description(PREFIXED_DESC)
    with pytest.raises(SddlRuntimeError, match="underrun"):
        execute(program, b"\xff\xff13")


def test_big_endian_count_field():
    assert run("record R { n: u16be; body: u8[n] -> p; } main: R[];", b"\x00\x02hi") == [
        ("rest", 2),
        ("p", 2),
    ]


def test_adjacent_same_destination_runs_merge():
    assert run("record T { a: u8 -> x; b: u8 -> x; } main: T[];", b"abcd") == [("x", 4)]


def test_unrouted_fields_interleave_with_rest():
    assert run("record T { a: u8; b: u8 -> x; } main: T[];", b"abcd") == [
        ("rest", 1),
        ("x", 1),
        ("rest", 1),
        ("x", 1),
    ]


def test_trailing_bytes_are_a_conformance_error():
    program = compile_description("main: u8;")
    with pytest.raises(SddlRuntimeError, match="trailing"):
        execute(program, b"ab")


def test_empty_input_conforms_to_tail_repeat():
    assert execute(compile_description(POINT_DESC), b"") == []


def test_partial_record_underruns():
    with pytest.raises(SddlRuntimeError, match="underrun"):
        execute(compile_description(POINT_DESC), bytes(5))


def test_zero_size_tail_element_rejected():
    program = compile_description("main: bytes(0)[];")
    with pytest.raises(SddlRuntimeError, match="consumes no input"):
        execute(program, b"abc")


def test_fuel_formula_and_exhaustion():
    assert default_fuel(0) == 4096
    assert default_fuel(100) == 4096 + 16 * 100
    program = compile_description("main: u8[];")
    with pytest.raises(FuelExhaustedError):
        execute(program, bytes(1000), fuel=10)
    # The default budget comfortably covers a large linear input.
    assert execute(program, bytes(100_000)) == [(0, 100_000)]


def test_coverage_on_random_conforming_inputs():
    rng = np.random.default_rng(7)
    descriptions = [
        POINT_DESC,
        PREFIXED_DESC,
        "main: u8[];",
        "record T { a: u16le -> x; b: bytes(3); } main: T[];",
        "record N { k: u8; body: u32le[k] -> words; } main: N[];",
    ]
    for desc in descriptions:
        program = compile_description(desc)
        for _ in range(40):
            data = rng.integers(0, 256, int(rng.integers(0, 200)), dtype=np.uint8).tobytes()
            try:
                instructions = execute(program, data)
            except SddlError:
                continue
            assert sum(length for _, length in instructions) == len(data)
            assert all(length > 0 for _, length in instructions)
            names = instructions_by_name(program, instructions)
            known = {d.name for d in program.destinations}
            assert all(name in known for name, _ in names)


def test_instruction_destinations_are_dense_indices():
    program = compile_description(POINT_DESC)
    instructions = execute(program, bytes(32))
    assert {dest for dest, _ in instructions} <= set(range(len(program.destinations)))


# -- end-to-end through the engine ---------------------------------------------


@pytest.mark.parametrize(
    "desc,data",
    [
        (POINT_DESC, bytes(range(64))),
        (PREFIXED_DESC, b"\x03\x00abc\x00\x00\x05\x00hello"),
        ("main: u8[];", b"free-form bytes" * 10),
        ("record T { a: u16le -> x; pad: bytes(2); } main: T[];", bytes(range(40))),
    ],
    ids=["points", "length-prefixed", "byte-stream", "padded"],
)
def test_sddl_profile_round_trips(desc, data):
    cfg = CompressorConfig(profile="sddl", profile_params={"description": desc})
    graph = build_input_graph(cfg, data)
    stream = TypedStream.serial(data)
    resolved, leaves = compress(graph, [stream])
    assert read_frame(write_frame(resolved, leaves)) == (stream,)


def test_sddl_profile_dispatch_appears_in_trace():
    cfg = CompressorConfig(profile="sddl", profile_params={"description": POINT_DESC})
    data = bytes(range(32))
    graph = build_input_graph(cfg, data)
    resolved, _ = compress(graph, [TypedStream.serial(data)])
    assert resolved.nodes[0].wire_id == 7  # dispatch runs first


def test_sddl_profile_config_round_trips_as_text():
    cfg = CompressorConfig(profile="sddl", profile_params={"description": POINT_DESC})
    text = cfg.to_json()
    again = CompressorConfig.from_json(text)
    assert again.to_json() == text
    assert again.profile_params["description"] == POINT_DESC
