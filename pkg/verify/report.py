"""Check requests (CheckSpec) and their JSON reports."""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from engine.errors import ConfigurationError
from engine.poly import QuotientRing

CHECK_CATALOG = {
    "lemma-2.3": "For a submodule M of X: M = T_X(M) iff every map M -> X lands in M; "
                 "Hom(M, X/M) = 0 forces M to be a trace module, and conversely when M is rigid.",
    "prop-3.2": "If Ext^1(R/I, R) = 0 then I is a trace ideal; over an Artinian Gorenstein ring "
                "the hypothesis always holds.",
    "thm-3.9": "Over an Artinian Gorenstein ring, a nonzero (co)syzygy of a proper trace ideal is never rigid.",
    "cor-3.12": "Over an Artinian Gorenstein ring a rigid ideal is free, and a non-free ideal I has "
                "Ext^i(I, I + R) != 0 for some i up to the ext bound.",
    "examples": "Golden values for the worked examples: free ideals, the node xy = 0, x^2 y^2 = 0 "
                "and the numerical semigroup ring generated in degrees 3, 4, 5.",
    "prop-3.8": "Grade-zero ideals primary to the maximal ideal and ideals of grade at least two are not rigid.",
    "oracle": "Groebner-basis computations and finite-dimensional linear algebra agree on Hom, Ext^1, "
              "traces and socles.",
}

# where each statement comes from in the source literature
PAPER_REFS = {
    "lemma-2.3": "Lemma 2.3; Lemma 2.7; Lemma 3.6",
    "prop-3.2": "Proposition 3.2; Remark 3.4",
    "thm-3.9": "Theorem 3.9",
    "cor-3.12": "Corollary 3.12",
    "examples": "Examples 2.4, 2.6 and 3.3",
    "prop-3.8": "Proposition 3.8",
    "oracle": "engine cross-check",
}

CHECK_ALIASES = {
    "lemma-2.7": "lemma-2.3",
    "lemma-3.6": "lemma-2.3",
    "thm-3.9-census": "thm-3.9",
    "cor-3.12-census": "cor-3.12",
    "remark-3.4": "prop-3.2",
    "example-fixtures": "examples",
}

# prefix of the skip reason recorded when an instance exceeds a cap
CAP_REASON = "resource cap"

SOURCES = ("fixture", "monomial_exhaustive", "random")

# checks that run without a ring argument
RINGLESS_CHECKS = ("examples", "prop-3.8")


def resolve_check_id(check_id: str) -> str:
    canonical = CHECK_ALIASES.get(check_id, check_id)
    if canonical not in CHECK_CATALOG:
        raise ConfigurationError(f"unknown check {check_id!r}; known: {', '.join(sorted(CHECK_CATALOG))}")
    return canonical


@dataclass(frozen=True)
class CheckSpec:
    """One check invocation: which statement, over which ring, on which instances"""

    check_id: str
    ring: Optional[QuotientRing] = None
    source: str = "fixture"
    seed: int = 0
    count: int = 200
    window: Tuple[int, int] = (-2, 2)
    ext_bound: int = 4
    max_degree: int = 64
    dim_cap: int = 64
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "check_id", resolve_check_id(self.check_id))
        if self.source not in SOURCES:
            raise ConfigurationError(f"unknown instance source {self.source!r}")
        for name in ("count", "ext_bound", "max_degree", "dim_cap", "jobs"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if self.seed < 0:
            raise ConfigurationError("seed must be nonnegative")
        if self.window[0] > self.window[1]:
            raise ConfigurationError(f"empty window {self.window}")
        if self.ring is None and self.check_id not in RINGLESS_CHECKS:
            raise ConfigurationError(f"check {self.check_id} needs a ring")

    @property
    def statement(self) -> str:
        return CHECK_CATALOG[self.check_id]

    @property
    def paper_ref(self) -> str:
        return PAPER_REFS[self.check_id]

    def bounds(self) -> Dict[str, Any]:
        return {
            "count": self.count,
            "dim_cap": self.dim_cap,
            "ext_bound": self.ext_bound,
            "max_degree": self.max_degree,
            "source": self.source,
            "window": list(self.window),
        }


@dataclass
class Report:
    check_id: str
    statement: str
    paper_ref: str = ""
    ring: str = ""
    instances_tested: int = 0
    verdict: str = "skipped"
    counterexamples: List[dict] = field(default_factory=list)
    engine_disagreements: List[dict] = field(default_factory=list)
    skipped: List[dict] = field(default_factory=list)
    observations: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    bounds: Dict[str, Any] = field(default_factory=dict)
    wall_ms: float = 0.0

    def finalize(self) -> "Report":
        if self.counterexamples:
            self.verdict = "fail"
        elif self.instances_tested:
            self.verdict = "pass"
        else:
            self.verdict = "skipped"
        return self

    @property
    def exit_code(self) -> int:
        if self.engine_disagreements:
            return 4
        if self.counterexamples:
            return 1
        return 3 if self.capped else 0

    @property
    def capped(self) -> bool:
        """Whether some instance was skipped for hitting a resource cap"""
        return any(item["reason"].startswith(CAP_REASON) for item in self.skipped)

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "check_id": self.check_id,
            "statement": self.statement,
            "paper_ref": self.paper_ref,
            "ring": self.ring,
            "instances_tested": self.instances_tested,
            "verdict": self.verdict,
            "counterexamples": self.counterexamples,
            "engine_disagreements": self.engine_disagreements,
            "skipped": self.skipped,
            "observations": self.observations,
            "seed": self.seed,
            "bounds": self.bounds,
        }
        if timings:
            out["wall_ms"] = round(self.wall_ms, 3)
        return out

    def to_json(self, timings: bool = False) -> str:
        """Deterministic serialization; timing fields excluded unless asked for"""
        return json.dumps(self.to_dict(timings), sort_keys=True, indent=2)

    def summary(self) -> str:
        line = f"{self.check_id} on {self.ring or '-'}: {self.verdict} ({self.instances_tested} instances"
        if self.skipped:
            line += f", {len(self.skipped)} skipped"
        line += ")"
        if self.counterexamples:
            line += f", {len(self.counterexamples)} counterexample(s)"
        if self.engine_disagreements:
            line += f", {len(self.engine_disagreements)} engine disagreement(s)"
        return line
