"""Instance file format: a small JSON document whose numbers travel as
strings ('3', '-0.25' or 'p/q'), so parsing is exact and serialization
round-trips instances bit for bit."""

from __future__ import annotations

import json
from fractions import Fraction

from .model import (
    ConstantClass,
    Instance,
    InvalidInstanceError,
    LabelingsClass,
    LinearClass,
    REALS,
    ValueDomain,
    constant_instance,
    linear_instance,
    shared_binary_instance,
)


class InstanceParseError(ValueError):
    """Malformed instance document; carries a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def parse_number(token) -> Fraction:
    if isinstance(token, bool) or not isinstance(token, (str, int)):
        raise InstanceParseError(f"numbers must be strings or integers, got {token!r}")
    try:
        return Fraction(str(token))
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceParseError(f"cannot parse number {token!r}: {exc}") from exc


def format_number(x) -> str:
    if isinstance(x, float):
        x = Fraction(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_binary_vector(raw, what):
    if isinstance(raw, str):
        seq = list(raw)
    elif isinstance(raw, list):
        seq = raw
    else:
        raise InstanceParseError(f"{what} must be a 0/1 string or list")
    out = []
    for c in seq:
        if str(c) not in ("0", "1"):
            raise InstanceParseError(f"{what} entries must be 0 or 1, got {c!r}")
        out.append(int(str(c)))
    return tuple(out)


def parse_instance(text: str) -> Instance:
    """Parse an instance document; raises InstanceParseError with a line
    number on malformed JSON."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict) or "class" not in doc:
        raise InstanceParseError("document must be an object with a 'class' tag")
    tag = doc["class"]
    try:
        if tag == "constant":
            domain_spec = doc.get("domain", "reals")
            if domain_spec == "reals":
                domain = REALS
            elif isinstance(domain_spec, list):
                domain = ValueDomain.finite(parse_number(v) for v in domain_spec)
            else:
                raise InstanceParseError(
                    "domain must be 'reals' or a list of values"
                )
            agents = [
                [parse_number(y) for y in labels] for labels in doc["agents"]
            ]
            return constant_instance(agents, domain)
        if tag == "homogeneous_linear":
            agents = [
                [(parse_number(x), parse_number(y)) for x, y in pairs]
                for pairs in doc["agents"]
            ]
            return linear_instance(agents)
        if tag == "labelings":
            labelings = [
                _parse_binary_vector(v, "labeling") for v in doc["labelings"]
            ]
            vectors = [
                _parse_binary_vector(v, "agent labels") for v in doc["agents"]
            ]
            return shared_binary_instance(vectors, labelings)
    except InstanceParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInstanceError):
            raise
        raise InstanceParseError(f"malformed {tag} document: {exc}") from exc
    raise InstanceParseError(f"unknown class tag {tag!r}")


def serialize_instance(instance: Instance) -> str:
    cls = instance.function_class
    if isinstance(cls, ConstantClass):
        doc = {
            "class": "constant",
            "domain": "reals"
            if cls.domain.is_reals
            else [format_number(v) for v in cls.domain.values],
            "agents": [[format_number(y) for y in a.labels] for a in instance.agents],
        }
    elif isinstance(cls, LinearClass):
        doc = {
            "class": "homogeneous_linear",
            "agents": [
                [[format_number(p.x), format_number(p.y)] for p in a.points]
                for a in instance.agents
            ],
        }
    elif isinstance(cls, LabelingsClass):
        doc = {
            "class": "labelings",
            "labelings": ["".join(str(y) for y in v) for v in cls.labelings],
            "agents": ["".join(str(y) for y in a.labels) for a in instance.agents],
        }
    else:
        raise TypeError(f"unknown function class {cls!r}")
    return json.dumps(doc, indent=2) + "\n"


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def dump_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(instance))
