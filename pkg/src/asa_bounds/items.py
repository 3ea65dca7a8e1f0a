"""Enregistrements produits par le moteur (rapports, densités, contrôles de reproduction)."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from asa_bounds.int_linalg import FgAbGroup


def fraction_str(x: Fraction | int | None) -> str | None:
    """Rationnel en "p/q" (ou "p" si entier)."""
    if x is None:
        return None
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Verdict(str, Enum):
    ASA_HOLDS = "ASA_HOLDS"
    ASA_HOLDS_SA = "ASA_HOLDS_SA"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class DeltaValue:
    """δ exact (rationnel) ou empirique (estimation + intervalle)."""

    kind: str                       # "exact" | "empirical"
    value: Fraction | float
    interval: tuple[float, float] | None = None
    source: str = ""

    @classmethod
    def exact(cls, value: Fraction | int | str, source: str = "") -> "DeltaValue":
        return cls("exact", Fraction(value), None, source)

    @classmethod
    def empirical(cls, value: float, interval: tuple[float, float], source: str = "") -> "DeltaValue":
        return cls("empirical", float(value), (float(interval[0]), float(interval[1])), source)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def certified_positive(self) -> bool:
        if self.is_exact:
            return self.value > 0
        return self.interval is not None and self.interval[0] > 0

    def to_json(self) -> dict:
        out = {"kind": self.kind, "source": self.source}
        if self.is_exact:
            out["value"] = fraction_str(self.value)
        else:
            out["value"] = self.value
            out["interval"] = list(self.interval) if self.interval else None
        return out


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    prime_bound: int
    prime_count_total: int
    prime_count_matching: int
    mode: str                                  # "natural" | "dirichlet"
    interval: tuple[float, float]
    s: float | None = None
    expectation: Fraction | None = None        # 1/[L:K] quand Chebotarev s'applique
    galois_violations: int = 0

    @property
    def ratio(self) -> Fraction | None:
        """matching/total exact (mode naturel)."""
        if self.mode != "natural" or not self.prime_count_total:
            return None
        return Fraction(self.prime_count_matching, self.prime_count_total)

    def as_delta(self, source: str = "density_estimate") -> DeltaValue:
        return DeltaValue.empirical(self.value, self.interval, source)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "interval": list(self.interval),
            "prime_bound": self.prime_bound,
            "prime_count_total": self.prime_count_total,
            "prime_count_matching": self.prime_count_matching,
            "mode": self.mode,
            "s": self.s,
            "expectation": fraction_str(self.expectation),
            "galois_violations": self.galois_violations,
        }


@dataclass
class AsaReport:
    group: str
    verdict: Verdict
    route: str
    delta: DeltaValue | None = None
    rank_r: int = 0
    h1_size: int = 1
    h2_size: int = 1
    bound: Fraction | None = None
    bound_interval: tuple[float, float] | None = None
    exact_b_s: FgAbGroup | None = None
    provenance: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    cross_check: dict | None = None

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "verdict": self.verdict.value,
            "route": self.route,
            "delta": self.delta.to_json() if self.delta else None,
            "factors": {"r": self.rank_r, "h1": str(self.h1_size), "h2": str(self.h2_size)},
            "bound": fraction_str(self.bound),
            "bound_interval": list(self.bound_interval) if self.bound_interval else None,
            "exact_b_s": self.exact_b_s.to_json() if self.exact_b_s is not None else None,
            "provenance": [f"{k}: {v}" for k, v in sorted(self.provenance.items())],
            "notes": list(self.notes),
            "cross_check": self.cross_check,
        }


@dataclass(frozen=True)
class SuiteCheck:
    """Une ligne de la table de reproduction."""

    check_id: str
    citation: str
    passed: bool
    expected: str
    observed: str
    tolerance: float | None = None
    detail: str = ""

    def to_row(self) -> dict:
        return {
            "check_id": self.check_id,
            "citation": self.citation,
            "passed": self.passed,
            "expected": self.expected,
            "observed": self.observed,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }
