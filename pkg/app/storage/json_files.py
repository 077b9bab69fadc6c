"""
This module reads and writes the JSON file formats: complexes, cycles, instances and
witnesses. Every payload is validated with a marshmallow schema before the models
are built, and written with a fixed key order so identical inputs give identical bytes.
"""
import json

from marshmallow import Schema, ValidationError, fields, validate

from app.errors import HomologyError, InvalidFileError
from app.logger import setup_logger
from app.models.instance import Instance
from app.models.simplex import Chain, SimplicialComplex
from app.models.solution import Solution, SolveStats

logger = setup_logger(__name__)

_VERTICES = fields.List(fields.Integer(strict=True, validate=validate.Range(min=0)),
                        validate=validate.Length(min=1))


class SimplexEntrySchema(Schema):
    """One weighted simplex of a complex file."""
    v = fields.List(fields.Integer(strict=True, validate=validate.Range(min=0)),
                    required=True, validate=validate.Length(min=1))
    w = fields.Float(required=True, validate=validate.Range(min=0))


class ComplexFileSchema(Schema):
    d = fields.Integer(strict=True, required=True)
    simplices = fields.List(fields.Nested(SimplexEntrySchema), required=True)


class CycleFileSchema(Schema):
    dim = fields.Integer(strict=True, required=True, validate=validate.Range(min=-1))
    simplices = fields.List(_VERTICES, required=True)


class InstanceFileSchema(Schema):
    format_version = fields.Integer(strict=True, required=True)
    meta = fields.Dict(keys=fields.String(), load_default=dict)
    d = fields.Integer(strict=True, required=True, validate=validate.Range(min=0))
    complex = fields.Nested(ComplexFileSchema, required=True)
    cycle = fields.Nested(CycleFileSchema, required=True)


class WitnessFileSchema(Schema):
    algo = fields.String(allow_none=True, load_default=None)
    cost = fields.Float(required=True)
    dim = fields.Integer(strict=True, required=True)
    simplices = fields.List(_VERTICES, required=True)
    chain = fields.List(_VERTICES, load_default=list)


def dumps(data):
    """Deterministic JSON text of a payload."""
    return json.dumps(data, indent=2) + "\n"


def _validated(schema, data, what):
    try:
        return schema.load(data)
    except ValidationError as error:
        raise InvalidFileError(f"invalid {what}: {error.messages}") from error


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as error:
        raise InvalidFileError(f"cannot read {path}: {error.strerror}") from error
    except json.JSONDecodeError as error:
        raise InvalidFileError(f"{path} is not valid JSON: {error}") from error


def _write_json(path, data):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(data))
    logger.debug("wrote %s", path)


def complex_from_dict(data):
    """Build a SimplicialComplex from its file representation.

    Raises:
        InvalidFileError: schema violation, face-closure failure, bad weight, or a
            ``d`` that is not the largest simplex dimension.
    """
    payload = _validated(ComplexFileSchema(), data, "complex")
    weights = {}
    try:
        for entry in payload["simplices"]:
            weights[tuple(entry["v"])] = entry["w"]
        complex_ = SimplicialComplex(weights)
    except HomologyError as error:
        raise InvalidFileError(f"invalid complex: {error}") from error
    if len(weights) != len(payload["simplices"]):
        raise InvalidFileError("invalid complex: a simplex is listed twice")
    if payload["d"] != complex_.dim:
        raise InvalidFileError(f"invalid complex: d = {payload['d']} but the largest simplex has dimension {complex_.dim}")
    return complex_


def cycle_from_dict(data):
    """Build a Chain from its file representation. Cycle-ness is checked by the caller."""
    payload = _validated(CycleFileSchema(), data, "cycle")
    try:
        return Chain(payload["dim"], payload["simplices"])
    except HomologyError as error:
        raise InvalidFileError(f"invalid cycle: {error}") from error


def instance_from_dict(data):
    payload = _validated(InstanceFileSchema(), data, "instance")
    complex_ = complex_from_dict(data["complex"])
    cycle = cycle_from_dict(data["cycle"])
    meta = dict(payload["meta"])
    meta.setdefault("format_version", payload["format_version"])
    try:
        return Instance(complex_, cycle, payload["d"], meta)
    except HomologyError as error:
        raise InvalidFileError(f"invalid instance: {error}") from error


def witness_from_dict(data):
    """Build a Solution from a witness payload; nothing about it is verified here."""
    payload = _validated(WitnessFileSchema(), data, "witness")
    try:
        cycle = Chain(payload["dim"], payload["simplices"])
        chain = Chain(payload["dim"] + 1, payload["chain"])
    except HomologyError as error:
        raise InvalidFileError(f"invalid witness: {error}") from error
    stats = SolveStats(algorithm=payload["algo"])
    return Solution(cost=payload["cost"], cycle=cycle, chain=chain, stats=stats)


def load_complex(path):
    return complex_from_dict(_read_json(path))


def save_complex(path, complex_):
    _write_json(path, complex_.to_dict())


def load_cycle(path):
    return cycle_from_dict(_read_json(path))


def save_cycle(path, cycle):
    _write_json(path, cycle.to_dict())


def load_instance(path):
    """Read and validate an instance file.

    Args:
        path (str): Path of a ``{format_version, meta, d, complex, cycle}`` JSON file.
    Returns:
        Instance: The validated instance.
    """
    instance = instance_from_dict(_read_json(path))
    logger.debug("loaded %r from %s", instance, path)
    return instance


def save_instance(path, instance):
    _write_json(path, instance.to_dict())


def load_witness(path):
    return witness_from_dict(_read_json(path))


def save_witness(path, solution):
    _write_json(path, solution.to_dict())


class BenchFamilySchema(Schema):
    family = fields.String(required=True)
    params = fields.List(fields.List(fields.Number()), required=True, validate=validate.Length(min=1))
    seeds = fields.List(fields.Integer(strict=True, validate=validate.Range(min=0)), load_default=lambda: [0])


class BenchSuiteSchema(Schema):
    """Benchmark suite: families x parameter grids x seeds, run by every algorithm."""
    families = fields.List(fields.Nested(BenchFamilySchema), required=True, validate=validate.Length(min=1))
    algorithms = fields.List(fields.String(validate=validate.OneOf(["conn", "hasse", "brute"])),
                             load_default=lambda: ["conn", "hasse"])
    mode = fields.String(allow_none=True, load_default=None,
                         validate=validate.OneOf(["boundary_only", "homology_rep"]))
    time_limit = fields.Float(allow_none=True, load_default=None, validate=validate.Range(min=0))
    mem_cap_entries = fields.Integer(allow_none=True, load_default=None, validate=validate.Range(min=0))
    workers = fields.Integer(allow_none=True, load_default=None, validate=validate.Range(min=1))
    brute_cap = fields.Integer(allow_none=True, load_default=None, validate=validate.Range(min=0))


def suite_from_dict(data):
    return _validated(BenchSuiteSchema(), data, "bench suite")


def load_suite(path):
    return suite_from_dict(_read_json(path))
