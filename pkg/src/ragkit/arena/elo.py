"""Standard Elo updates (K=32, base rating 1500).

The delta is computed once and applied with opposite signs, so a pairwise
update conserves total rating mass.
"""

from __future__ import annotations

K_FACTOR = 32.0
INITIAL_RATING = 1500.0

_OUTCOME_SCORES = {"a_wins": 1.0, "b_wins": 0.0, "tie": 0.5}


def expected_score(rating_a: float, rating_b: float) -> float:
    return 1.0 / (1.0 + 10.0 ** ((rating_b - rating_a) / 400.0))


def update_ratings(
    rating_a: float, rating_b: float, outcome: str, k: float = K_FACTOR
) -> tuple[float, float]:
    """New (rating_a, rating_b) after one comparison; outcome in {a_wins, b_wins, tie}."""
    try:
        score_a = _OUTCOME_SCORES[outcome]
    except KeyError:
        raise ValueError(f"unknown outcome {outcome!r}") from None
    delta = k * (score_a - expected_score(rating_a, rating_b))
    return rating_a + delta, rating_b - delta
