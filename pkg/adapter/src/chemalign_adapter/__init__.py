"""Structure files -> embedding shards, via user-supplied hooks."""

from .classes import (
    ClassIdAssigner,
    bulk_id_key,
    formula_key,
    resolve_rule,
    stable_hash,
)
from .extract import ExtractionError, ExtractionJob, ExtractionResult, extract
from .fixtures import FixtureSet, gen_reference_fixtures
from .hooks import ATOMIC_NUMBERS, IDENTITY_DIM, UnknownElementError, atomic_one_hot
from .shardfmt import ShardGraph, read_manifest_file, read_shard_file, write_shard_file
from .xyz import Structure, XyzFormatError, parse_xyz, read_xyz, write_xyz

__version__ = "0.1.0"

__all__ = [
    "ATOMIC_NUMBERS",
    "ClassIdAssigner",
    "ExtractionError",
    "ExtractionJob",
    "ExtractionResult",
    "FixtureSet",
    "IDENTITY_DIM",
    "ShardGraph",
    "Structure",
    "UnknownElementError",
    "XyzFormatError",
    "atomic_one_hot",
    "bulk_id_key",
    "extract",
    "formula_key",
    "gen_reference_fixtures",
    "parse_xyz",
    "read_manifest_file",
    "read_shard_file",
    "read_xyz",
    "resolve_rule",
    "stable_hash",
    "write_shard_file",
    "write_xyz",
]
