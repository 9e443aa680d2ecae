"""Engine limits. All caps are configuration, not semantics."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EngineConfig:
    max_instances: int = 200_000     # grounding cap
    max_arguments: int = 50_000      # argument-construction cap
    preferred_cap: int = 20          # exact preferred enumeration, post-reduction
    abduction_budget: int = 100_000  # candidate sets explored before truncating


DEFAULT_CONFIG = EngineConfig()


class EngineLimitError(Exception):
    """A configured cap was exceeded."""


class GroundingExplosion(EngineLimitError):
    def __init__(self, schema: str, count: int, cap: int):
        super().__init__(
            f"grounding would produce {count} instances "
            f"(cap {cap}); offending schema: {schema}")
        self.schema = schema


class ArgumentExplosion(EngineLimitError):
    pass


class GraphTooLarge(EngineLimitError):
    """Preferred-extension enumeration refused; rely on grounded semantics."""
