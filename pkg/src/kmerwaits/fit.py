"""Two-anchor linear model of the emergence probability in sequence length.

The emergence probability grows (to first order) linearly with the sequence
length, so a line through two computed anchors predicts it for any length in
the regime where per-generation mutation probabilities are tiny; the
predicted waiting time is then a hyperbola in the length.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LinearModel:
    slope: float
    intercept: float
    anchors: tuple[tuple[int, float], tuple[int, float]]

    @property
    def has_positive_slope(self) -> bool:
        return self.slope > 0.0

    def probability_at(self, n: float) -> float:
        # anchors reproduce their values exactly; the line can be an ulp off
        for n_anchor, q_anchor in self.anchors:
            if n == n_anchor:
                return q_anchor
        return self.slope * n + self.intercept


def fit_two_anchors(p1: tuple[int, float], p2: tuple[int, float]) -> LinearModel:
    """Line through two (length, probability) anchors."""
    (n1, q1), (n2, q2) = p1, p2
    if n1 == n2:
        raise ValueError("anchor lengths must differ")
    for q in (q1, q2):
        if not 0.0 < q < 1.0:
            raise ValueError("anchor probabilities must lie in (0, 1)")
    slope = (q2 - q1) / (n2 - n1)
    intercept = q1 - slope * n1
    return LinearModel(slope=slope, intercept=intercept, anchors=(p1, p2))


def predict(model: LinearModel, n: int) -> tuple[float, float]:
    """Predicted (probability, waiting time in generations) at length n.

    Only meaningful while the predicted probability stays inside (0, 1); the
    linear regime also assumes n is far below the inverse of the largest
    per-generation mutation probability.
    """
    p_hat = model.probability_at(n)
    if p_hat <= 0.0 or p_hat >= 1.0:
        raise ValueError("predicted probability outside (0, 1)")
    return p_hat, 1.0 / p_hat
