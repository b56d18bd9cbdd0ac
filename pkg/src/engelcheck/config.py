"""Resource caps and the error types shared by every module."""

from __future__ import annotations

from dataclasses import dataclass


class ResourceError(RuntimeError):
    """A computation would exceed one of the configured caps."""

    def __init__(self, cap: str, limit: int, requested: object, where: str = ""):
        self.cap = cap
        self.limit = limit
        self.requested = requested
        self.where = where
        msg = f"{cap} cap exceeded: requested {requested}, limit {limit}"
        if where:
            msg += f" ({where})"
        super().__init__(msg)


class PreconditionError(ValueError):
    """Arguments violate an operation's precondition."""


@dataclass(frozen=True)
class Caps:
    dim: int = 50_000  # ambient dimension of one multiweight layer
    digits: int = 1_000_000  # decimal digits of a big-integer bound
    symmetric_degree: int = 6  # largest N for decompose_identity
    instances: int = 2_000_000  # instances enumerated by substitution_instances


DEFAULT_CAPS = Caps()
