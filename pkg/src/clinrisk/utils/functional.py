"""``clinrisk.utils.functional``: General utility functions."""

import hashlib
import json
import numbers
import types
import typing
from dataclasses import fields
from typing import Any, Union

import numpy as np


def check_known_keys(given: dict, valid: "set[str] | list[str]", where: str) -> None:
    """Raise ``KeyError`` for any key of ``given`` not in ``valid``.

    Args:
        given: Dictionary read from a config file.
        valid: Accepted key names.
        where: Human-readable location used in the message (e.g. ``"[semi]"``).
    """
    unknown = sorted(set(given) - set(valid))
    if unknown:
        raise KeyError(
            f"{', '.join(unknown)} not a valid key for {where}; "
            f"valid keys are {', '.join(sorted(valid))}"
        )


def to_jsonable(value: Any) -> Any:
    """Convert tuples, numpy scalars and arrays to plain JSON types, recursively."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _as_declared(value: Any, hint: Any) -> Any:
    if typing.get_origin(hint) in (Union, types.UnionType):
        options = [a for a in typing.get_args(hint) if a is not type(None)]
        if len(options) == 1:
            hint = options[0]
    if hint is float and isinstance(value, numbers.Integral) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, (list, tuple)):
        args = typing.get_args(hint)
        if len(args) == 2 and args[1] is Ellipsis:
            args = (args[0],) * len(value)
        if len(args) == len(value):
            return [_as_declared(v, h) for v, h in zip(value, args)]
    return value


def declared_fields(instance: Any) -> dict[str, Any]:
    """Field values of a dataclass instance, with integers in float fields cast to float.

    Only the top level is walked; nested dataclasses are returned as they are. TOML
    writes ``0`` and ``0.0`` differently, and both should hash alike.
    """
    hints = typing.get_type_hints(type(instance))
    return {
        f.name: _as_declared(getattr(instance, f.name), hints[f.name]) for f in fields(instance)
    }


def content_hash(value: Any) -> str:
    """Hash a JSON-able value independently of dict key order.

    Returns:
        First 16 hex digits of the SHA-256 of the canonical JSON encoding.
    """
    canonical = json.dumps(to_jsonable(value), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


class AbstractClassProperty:
    def __init__(self):
        """Assign a class property to act like an abstract field."""
        self.__isabstractmethod__ = True

    def __set_name__(self, owner, name):  # noqa
        self.name = name

    def __get__(self, instance, owner):  # noqa
        if instance is None:
            return self
        raise NotImplementedError(
            f"AbstractClassProperty '{self.name}' must be set in subclass"
        )


__doc_title__ = "Functional"
__all__ = [
    "check_known_keys",
    "to_jsonable",
    "declared_fields",
    "content_hash",
    "AbstractClassProperty",
]
