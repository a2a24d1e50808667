"""Per-entity class scores with a deterministic ranking."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Prediction:
    """Scores per candidate class, ranked descending with lexicographic ties."""

    entity: str
    scores: dict[str, float] = field(default_factory=dict)
    ranking: list[str] = field(default_factory=list)

    @classmethod
    def from_scores(cls, entity: str, scores: dict[str, float]) -> "Prediction":
        ranking = sorted(scores, key=lambda c: (-scores[c], c))
        return cls(entity, dict(scores), ranking)

    @property
    def top(self) -> str | None:
        return self.ranking[0] if self.ranking else None

    def top_k(self, k: int) -> list[tuple[str, float]]:
        return [(c, self.scores[c]) for c in self.ranking[:k]]
