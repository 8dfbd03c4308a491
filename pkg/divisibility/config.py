"""Parameters of the divisibility encoding."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class EngineConfig:
    """alpha equations beyond the first, exceptional moduli U, and the shift m0 + d*m.

    With K purely transcendental the base case alpha=1, U empty applies; for
    other fields both values are configuration and must come with provenance.
    """

    alpha: int = 1
    U: frozenset[int] = field(default_factory=frozenset)
    m0: int = 1
    d: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "U", frozenset(int(u) for u in self.U))
        if self.alpha < 1:
            raise ValueError(f"engine.alpha must be >= 1, got {self.alpha}")
        if self.d < 1:
            raise ValueError(f"engine.d must be >= 1, got {self.d}")
        if self.m0 == 0:
            raise ValueError("engine.m0 must be nonzero")
        if self.m0 in self.U:
            raise ValueError(f"engine.m0={self.m0} lies in the exceptional set U")
        outside = sorted(u for u in self.U if not (self.m0 - self.d < u < self.m0 + self.d))
        if outside:
            raise ValueError(f"engine.U elements {outside} lie outside ({self.m0 - self.d}, {self.m0 + self.d})")

    @classmethod
    def from_config(cls, engine_config: dict | None) -> EngineConfig:
        engine_config = engine_config or {}
        return cls(
            alpha=int(engine_config.get("alpha", 1)),
            U=frozenset(engine_config.get("U") or ()),
            m0=int(engine_config.get("m0", 1)),
            d=int(engine_config.get("d", 1)),
        )

    @property
    def ks(self) -> tuple[int, ...]:
        """Multipliers 2^0, ..., 2^alpha of the divisibility equations."""
        return tuple(2**j for j in range(self.alpha + 1))

    def safe_modulus(self, m: int) -> int:
        """d*m + m0, never in U."""
        return self.d * m + self.m0

    def check_modulus(self, m: int) -> None:
        if m in self.U:
            raise ValueError(f"modulus {m} lies in the exceptional set U")

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "U": sorted(self.U), "m0": self.m0, "d": self.d}
