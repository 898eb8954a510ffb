import dataclasses
import enum
from fractions import Fraction
from typing import Any

import numpy as np
import sympy


def default_serializer(obj: Any) -> Any:
    """
    Default serializer for JSON serialization of wide events and CLI output.
    Handles objects with isoformat(), numpy arrays and scalars, enums,
    exact rationals and dataclasses, and falls back to str().
    """
    if hasattr(obj, "isoformat"):
        return str(obj.isoformat())
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, sympy.Integer):
        return int(obj)
    if isinstance(obj, (Fraction, sympy.Rational)):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return dataclasses.asdict(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    return str(obj)
