"""Typed values: the five attribute kinds, parsing, and fixed-point money.

Decimals are exact fixed-point with 4 fractional digits; measure arithmetic
happens on scaled int64 so additivity checks hold bit-for-bit.
"""

from __future__ import annotations

import datetime as dt
import enum
from decimal import Decimal, InvalidOperation

DECIMAL_SCALE = 4
_SCALE_FACTOR = 10 ** DECIMAL_SCALE
_QUANTUM = Decimal(1).scaleb(-DECIMAL_SCALE)

_TRUE = {"true", "1", "yes", "y"}
_FALSE = {"false", "0", "no", "n"}


class ValueKind(str, enum.Enum):
    STRING = "string"
    INTEGER = "integer"
    DECIMAL = "decimal"
    DATE = "date"
    BOOLEAN = "boolean"


class ValueParseError(ValueError):
    """A raw string does not parse as the requested kind."""


def parse_value(kind: ValueKind, raw: str):
    """Parse a raw source string into its typed form.

    Dates are ISO-8601 (YYYY-MM-DD). Decimals reject more than 4 fractional
    digits rather than rounding silently.
    """
    if kind is ValueKind.STRING:
        return raw
    text = raw.strip()
    try:
        if kind is ValueKind.INTEGER:
            return int(text)
        if kind is ValueKind.DECIMAL:
            value = Decimal(text)
            if -value.as_tuple().exponent > DECIMAL_SCALE:
                raise ValueParseError(
                    f"more than {DECIMAL_SCALE} fractional digits: {raw!r}")
            return value.quantize(_QUANTUM)
        if kind is ValueKind.DATE:
            return dt.date.fromisoformat(text)
        if kind is ValueKind.BOOLEAN:
            lowered = text.casefold()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ValueParseError(f"not a boolean: {raw!r}")
    except (ValueError, InvalidOperation) as exc:
        raise ValueParseError(f"cannot parse {raw!r} as {kind.value}") from exc
    raise ValueParseError(f"unsupported kind {kind!r}")


def format_value(value) -> str:
    """Render a typed value canonically (inverse of parse_value)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Decimal):
        return str(value.quantize(_QUANTUM))
    if isinstance(value, dt.date):
        return value.isoformat()
    return str(value)


def to_scaled(value, kind: ValueKind) -> int:
    """Measure value -> scaled int64 representation."""
    if kind is ValueKind.INTEGER:
        return int(value)
    if kind is ValueKind.DECIMAL:
        quantized = value.quantize(_QUANTUM) if isinstance(value, Decimal) \
            else Decimal(str(value)).quantize(_QUANTUM)
        return int(quantized.scaleb(DECIMAL_SCALE))
    raise ValueParseError(f"measures must be integer or decimal, got {kind}")


def from_scaled(scaled: int, kind: ValueKind):
    """Scaled int64 -> the measure's typed value."""
    if kind is ValueKind.INTEGER:
        return int(scaled)
    return (Decimal(int(scaled)) * _QUANTUM).quantize(_QUANTUM)


def sort_key(value):
    """Ordering key for member keys: numbers/dates natural, strings
    case-folded, None (the Unknown member) last."""
    if value is None:
        return (2, "")
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, (int, float, Decimal)):
        return (0, float(value))
    if isinstance(value, dt.date):
        return (0, float(value.toordinal()))
    text = str(value)
    return (1, text.casefold(), text)
