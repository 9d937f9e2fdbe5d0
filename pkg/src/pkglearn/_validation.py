"""Input validation helpers used by the public estimators and pipeline ops."""

from __future__ import annotations

from .exceptions import ConfigurationError, ValidationError


def check_fraction(value, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
    return value


def check_positive_int(value, name: str) -> int:
    if int(value) != value or int(value) <= 0:
        raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_non_negative(value, name: str) -> float:
    value = float(value)
    if value < 0:
        raise ConfigurationError(f"{name} must be non-negative, got {value}")
    return value


def check_seed(value, name: str = "seed") -> int:
    if int(value) != value or not 0 <= int(value) < 2**64:
        raise ConfigurationError(f"{name} must be a 64-bit unsigned integer, got {value!r}")
    return int(value)


def check_membership(value, allowed, name: str):
    if value not in allowed:
        raise ConfigurationError(f"{name} must be one of {sorted(allowed)}, got {value!r}")
    return value


def require(condition: bool, message: str) -> None:
    """Raise ValidationError unless a data contract holds."""
    if not condition:
        raise ValidationError(message)
