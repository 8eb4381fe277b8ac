"""Runtime values of the AJML interpreter."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Optional, Set


@dataclass(eq=False)
class Instance:
    """An object: a class (or aspect) name plus mutable fields. Compared by identity."""

    class_name: str
    oid: int
    fields: Dict[str, Any] = field(default_factory=dict)

    def __repr__(self) -> str:
        return f"{self.class_name}@{self.oid}"


def default_value(type_name: str) -> Any:
    if type_name == "int":
        return 0
    if type_name == "boolean":
        return False
    return None


def type_name_of(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "int"
    if isinstance(value, str):
        return "String"
    return value.class_name


def accepts(bound_type: str, value: Any) -> bool:
    """Dynamic ``args`` test: Object takes anything (null included), other types their own values."""
    if bound_type == "Object":
        return True
    if value is None:
        return False
    return type_name_of(value) == bound_type


def render(value: Any) -> str:
    """Text of a value as printed by ``print``/``log`` and produced by ``toString``."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    return repr(value)


def same_value(left: Any, right: Any) -> bool:
    """Equality used by ``==``: identity on objects, value and kind on everything else."""
    if isinstance(left, Instance) or isinstance(right, Instance):
        return left is right
    return type_name_of(left) == type_name_of(right) and left == right


def identity(value: Any) -> Hashable:
    """Hashable image that tells objects apart by identity (oid) and primitives by value."""
    if isinstance(value, Instance):
        return ("object", value.class_name, value.oid)
    return (type_name_of(value), value)


def freeze(value: Any, _seen: Optional[Set[int]] = None) -> Hashable:
    """
    Hashable structural image of ``value``.

    Objects are compared by class and field contents, never by identity, so a value
    computed on a copied heap can be compared with one from the live heap.
    """
    if not isinstance(value, Instance):
        return (type_name_of(value), value)
    seen = _seen if _seen is not None else set()
    if id(value) in seen:
        return ("cycle", value.class_name)
    seen = seen | {id(value)}
    return (
        "object",
        value.class_name,
        tuple((name, freeze(v, seen)) for name, v in sorted(value.fields.items())),
    )
