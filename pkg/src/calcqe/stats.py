"""Per-run statistics counters."""
from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class Stats:
    implicants_generated: int = 0
    implicants_used: int = 0
    cells_characterized: int = 0
    samples_tried: int = 0
    resultants_computed: int = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)

    def lines(self) -> list[str]:
        return [f"{k}={v}" for k, v in self.as_dict().items()]

    def used_ratio(self) -> float | None:
        if not self.implicants_generated:
            return None
        return self.implicants_used / self.implicants_generated
