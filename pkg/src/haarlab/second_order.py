"""Spoke-diagram predictors for fluctuation covariances of traces of
alternating centered words, in the complex rule (cyclic spoke products)
and the real rule (spokes plus reversed spokes), with residuals against
measured covariances.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionError, NoReductionError


@dataclass(frozen=True)
class FirstOrderTable:
    """First-order inputs for the spoke formulas.

    phi[i-1][j-1] holds phi(a_i b_j) and phi_t[i-1][j-1] holds
    phi(a_i b_j^t) for cycle letters a_1..a_m and b_1..b_n.  Accessors
    take 1-based indices and reduce them cyclically.
    """

    m: int
    n: int
    phi: tuple
    phi_t: tuple

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DimensionError("cycle lengths must be positive")
        for name, tbl in (("phi", self.phi), ("phi_t", self.phi_t)):
            rows = tuple(tuple(row) for row in tbl)
            if len(rows) != self.m or any(len(r) != self.n for r in rows):
                raise DimensionError(f"{name} must be {self.m} x {self.n}")
            object.__setattr__(self, name, rows)

    def phi_at(self, i: int, j: int):
        return self.phi[(i - 1) % self.m][(j - 1) % self.n]

    def phi_t_at(self, i: int, j: int):
        return self.phi_t[(i - 1) % self.m][(j - 1) % self.n]

    def rotate_rows(self, shift: int) -> "FirstOrderTable":
        """The table for the cyclically rotated letter sequence
        a_{1+shift}, a_{2+shift}, ..."""
        s = shift % self.m
        return FirstOrderTable(self.m, self.n,
                               self.phi[s:] + self.phi[:s],
                               self.phi_t[s:] + self.phi_t[:s])


@dataclass(frozen=True)
class SecondOrderPrediction:
    """A predicted fluctuation covariance, kept with its per-diagram
    summands: n spoke products, and n reversed-spoke products in the
    real rule (none in the complex rule)."""

    value: object
    spoke_terms: tuple
    reversed_terms: tuple = ()


def _spoke_terms(tbl: FirstOrderTable) -> list:
    n = tbl.n
    terms = []
    for k in range(1, n + 1):
        prod = 1
        for i in range(1, n + 1):
            prod = prod * tbl.phi_at(i, k - i)
        terms.append(prod)
    return terms


def _reversed_terms(tbl: FirstOrderTable) -> list:
    n = tbl.n
    terms = []
    for k in range(1, n + 1):
        prod = 1
        for i in range(1, n + 1):
            prod = prod * tbl.phi_t_at(i, k + i)
        terms.append(prod)
    return terms


def complex_spoke_prediction(tbl: FirstOrderTable) -> SecondOrderPrediction:
    """Predicted covariance for the complex rule: when m = n, the sum
    over k of the cyclic products phi(a_1 b_{k-1}) ... phi(a_n b_{k-n});
    zero when m != n, since no spoke pairing of the two cycles exists.

    m = n = 1 carries no reduction in this rule and is rejected.
    """
    if tbl.m == 1 and tbl.n == 1:
        raise NoReductionError(
            "no complex spoke reduction for a pair of 1-cycles")
    if tbl.m != tbl.n:
        return SecondOrderPrediction(0, ())
    terms = _spoke_terms(tbl)
    return SecondOrderPrediction(sum(terms), tuple(terms))


def real_spoke_prediction(tbl: FirstOrderTable) -> SecondOrderPrediction:
    """Predicted covariance for the real rule: the complex spoke sum plus
    the reversed-spoke sum over phi(a_i b_{k+i}^t)."""
    if tbl.m == 1 and tbl.n == 1:
        raise NoReductionError(
            "no spoke reduction for a pair of 1-cycles; use "
            "one_by_one_real_prediction for the two-term convention")
    if tbl.m != tbl.n:
        return SecondOrderPrediction(0, (), ())
    spokes = _spoke_terms(tbl)
    rev = _reversed_terms(tbl)
    return SecondOrderPrediction(sum(spokes) + sum(rev),
                                 tuple(spokes), tuple(rev))


def one_by_one_real_prediction(tbl: FirstOrderTable) -> SecondOrderPrediction:
    """The m = n = 1 convention in the real rule: phi(a1 b1) +
    phi(a1 b1^t).  Exposed separately because the general formulas
    exclude the pair of 1-cycles."""
    if tbl.m != 1 or tbl.n != 1:
        raise DimensionError("one_by_one_real_prediction needs m = n = 1")
    a = tbl.phi_at(1, 1)
    b = tbl.phi_t_at(1, 1)
    return SecondOrderPrediction(a + b, (a,), (b,))


def freeness_residual(empirical_cov, tbl: FirstOrderTable,
                      mode: str = "real"):
    """Measured covariance minus the spoke prediction.

    mode selects the rule; real mode falls back to the two-term 1-cycle
    convention when m = n = 1.
    """
    if mode == "complex":
        pred = complex_spoke_prediction(tbl)
    elif mode == "real":
        if tbl.m == 1 and tbl.n == 1:
            pred = one_by_one_real_prediction(tbl)
        else:
            pred = real_spoke_prediction(tbl)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return empirical_cov - pred.value
