"""Wire codec registry.

Every codec is a CodecSpec keyed by a stable wire id; the frame format
stores only the wire id plus the codec's self-describing header, so the
decoder needs nothing else to invert a node.
"""

from __future__ import annotations

from typing import Iterator, Optional

from graphzip.codecs.spec import CodecSpec, header_of, require
from graphzip.codecs.convert import CONVERT_CODECS
from graphzip.codecs.restructure import RESTRUCTURE_CODECS
from graphzip.codecs.transform import TRANSFORM_CODECS
from graphzip.codecs.pack import PACK_CODECS
from graphzip.codecs.intparse import PARSE_INT_CODEC
from graphzip.codecs.huffman import HUFFMAN_CODEC
from graphzip.codecs.lz import BYTE_LZ_CODEC, FIELD_LZ_CODEC
from graphzip.errors import UnknownCodecError

_ALL_CODECS = (
    list(CONVERT_CODECS)
    + list(RESTRUCTURE_CODECS)
    + list(TRANSFORM_CODECS)
    + list(PACK_CODECS)
    + [PARSE_INT_CODEC, HUFFMAN_CODEC, FIELD_LZ_CODEC, BYTE_LZ_CODEC]
)


class CodecRegistry:
    """Immutable lookup table of wire codecs."""

    def __init__(self, specs):
        by_id = {}
        by_name = {}
        for spec in specs:
            if spec.wire_id in by_id:
                raise ValueError(f"duplicate wire id {spec.wire_id}")
            if spec.name in by_name:
                raise ValueError(f"duplicate codec name {spec.name!r}")
            by_id[spec.wire_id] = spec
            by_name[spec.name] = spec
        self._by_id = dict(sorted(by_id.items()))
        self._by_name = by_name

    def get(self, wire_id: int) -> CodecSpec:
        spec = self._by_id.get(wire_id)
        if spec is None:
            raise UnknownCodecError(wire_id)
        return spec

    def lookup(self, wire_id: int) -> Optional[CodecSpec]:
        return self._by_id.get(wire_id)

    def by_name(self, name: str) -> CodecSpec:
        spec = self._by_name.get(name)
        if spec is None:
            raise KeyError(f"no codec named {name!r}")
        return spec

    def __iter__(self) -> Iterator[CodecSpec]:
        return iter(self._by_id.values())

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, wire_id: int) -> bool:
        return wire_id in self._by_id

    def wire_ids(self):
        return tuple(self._by_id)


registry = CodecRegistry(_ALL_CODECS)

__all__ = ["CodecRegistry", "CodecSpec", "header_of", "registry", "require"]
