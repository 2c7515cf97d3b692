import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

from engine.errors import SessionError, SessionSyntaxError, TraceEngineError
from engine.fpmod import (
    MatrixOverRing,
    PresentedModule,
    free_module,
    is_free,
    is_zero,
    length,
    minimal_generators,
    present_ideal,
    quotient_by_ideal,
    resolve,
    syzygy,
)
from engine.homolog import (
    annihilator,
    conormal_dual,
    cosyzygy,
    dual,
    ext,
    generates,
    grade,
    hom_module,
    is_artinian_gorenstein,
    is_trace_module,
    reduced_generators,
    rigidity,
    socle,
    trace_ideal,
    trace_in,
    trace_triad,
)
from engine.poly import QuotientRing
from utils.config import get_settings, override_settings
from utils.session import (
    CheckInvocation,
    IdealDef,
    Invocation,
    ModuleDef,
    RingDef,
    Session,
    Statement,
    build_ring,
    parse_session,
)
from verify.checks import run_check
from verify.report import CheckSpec

logger = logging.getLogger(__name__)

FORMATS = ("text", "json")


@dataclass
class StatementResult:
    statement: str
    kind: str
    value: Any = None
    exit_code: int = 0

    def to_dict(self, timings: bool = True) -> dict:
        value = self.value
        if self.kind == "check":
            value = value.to_dict(timings)
        return {"statement": self.statement, "kind": self.kind, "value": value, "exit_code": self.exit_code}


@dataclass
class SessionResult:
    results: List[StatementResult] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        # disagreements (4) outrank caps (3), usage errors (2) and counterexamples (1)
        return max((r.exit_code for r in self.results), default=0)

    def to_json(self, timings: bool = True) -> str:
        payload = {"exit_code": self.exit_code, "results": [r.to_dict(timings) for r in self.results]}
        return json.dumps(payload, sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = []
        for result in self.results:
            lines.append(f"> {result.statement}")
            lines.extend("  " + line for line in _render_text(result).splitlines())
        return "\n".join(lines)

    def render(self, fmt: str = "text", timings: bool = True) -> str:
        if fmt not in FORMATS:
            raise ValueError(f"unknown output format {fmt!r}")
        return self.to_json(timings) if fmt == "json" else self.to_text()


def _render_text(result: StatementResult) -> str:
    if result.kind == "error":
        return f"error: {result.value['error']}"
    if result.kind == "check":
        report = result.value
        lines = [report.summary()]
        for item in report.counterexamples:
            lines.append(f"counterexample {item['module']} over {item['ring']}: {item['measured']}")
        for item in report.engine_disagreements:
            lines.append(f"disagreement {item['module']} over {item['ring']}: {item['detail']}")
        for item in report.skipped:
            lines.append(f"skipped {item['module']}: {item['reason']}")
        return "\n".join(lines)
    if isinstance(result.value, dict):
        return ", ".join(f"{key}: {_text_value(value)}" for key, value in result.value.items())
    return str(result.value)


def _text_value(value) -> str:
    if value is None:
        return "infinite"
    if isinstance(value, list):
        return "(" + ", ".join(str(v) for v in value) + ")"
    return str(value)


class SessionProcessor:
    """Runs parsed sessions statement by statement"""

    def __init__(self, seed: Optional[int] = None, jobs: Optional[int] = None, max_degree: Optional[int] = None,
                 ext_bound: Optional[int] = None, dim_cap: Optional[int] = None):
        self.overrides = {
            "seed": seed,
            "jobs": jobs,
            "max_degree": max_degree,
            "ext_bound": ext_bound,
            "dim_cap": dim_cap,
        }
        self.objects: Dict[str, Union[QuotientRing, PresentedModule]] = {}
        self._free: Dict[str, PresentedModule] = {}

    def process(self, source: Union[str, Session]) -> SessionResult:
        """
        Parse (if needed) and execute a session

        Args:
            source: session text or an already parsed Session

        Returns:
            SessionResult with one entry per executed statement
        """
        if isinstance(source, str):
            try:
                source = parse_session(source)
            except SessionSyntaxError as e:
                logger.error("parse error: %s", e)
                return SessionResult([StatementResult("", "error", {"error": str(e)}, e.exit_code)])
        return self.execute(source)

    def execute(self, session: Session) -> SessionResult:
        result = SessionResult()
        self.objects = {}
        self._free = {}
        with override_settings(**self.overrides):
            for statement in session.statements:
                try:
                    result.results.append(self._run(statement))
                except TraceEngineError as e:
                    error = SessionError(statement.text, e)
                    logger.error("%s", error)
                    result.results.append(StatementResult(
                        statement.text, "error", {"error": f"{type(e).__name__}: {e}"}, error.exit_code))
                    break
        return result

    def _run(self, statement: Statement) -> StatementResult:
        if isinstance(statement, RingDef):
            R = build_ring(statement)
            self.objects[statement.name] = R
            return StatementResult(statement.text, "ring", {
                "ring": str(R), "graded": R.graded, "dimension": R.dimension(),
            })
        if isinstance(statement, IdealDef):
            R = self.objects[statement.ring]
            I = present_ideal([R.element(g) for g in statement.generators], R, label=statement.name)
            self.objects[statement.name] = I
            return StatementResult(statement.text, "ideal", {"ideal": [str(g) for g in I.ideal_generators]})
        if isinstance(statement, ModuleDef):
            M = self._define_module(statement)
            self.objects[statement.name] = M
            return StatementResult(statement.text, "module", {
                "generators": M.ngens, "presentation": M.presentation.render(),
            })
        if isinstance(statement, CheckInvocation):
            report = run_check(self._check_spec(statement))
            return StatementResult(statement.text, "check", report, report.exit_code)
        if isinstance(statement, Invocation):
            handler = getattr(self, f"_op_{statement.op}")
            return StatementResult(statement.text, "operation", handler(*statement.args))
        raise TypeError(f"unknown statement {statement!r}")

    def _define_module(self, statement: ModuleDef) -> PresentedModule:
        R = self.objects[statement.ring]
        if statement.ideal is not None:
            I = self.objects[statement.ideal]
            return quotient_by_ideal(R, I.ideal_generators, label=statement.name)
        rows = [[R.element(p) for p in row] for row in statement.rows]
        degrees = (0,) * len(rows) if R.graded else None
        matrix = MatrixOverRing.from_rows(R, rows, degrees)
        if degrees is not None and not matrix.is_homogeneous():
            logger.warning("%s has an inhomogeneous presentation; treating it as ungraded", statement.name)
            degrees = None
            matrix = MatrixOverRing.from_rows(R, rows)
        return PresentedModule(R, matrix, degrees, label=statement.name)

    def _check_spec(self, statement: CheckInvocation) -> CheckSpec:
        settings = get_settings()
        options = statement.option_dict()
        ring = self.objects[statement.ring] if statement.ring is not None else None
        return CheckSpec(
            check_id=statement.check_id,
            ring=ring,
            source=options.get("source", "fixture"),
            seed=options.get("seed", settings.seed),
            count=options.get("count", CheckSpec.count),
            window=tuple(options.get("window", CheckSpec.window)),
            ext_bound=options.get("ext_bound", settings.ext_bound),
            max_degree=options.get("max_degree", settings.max_degree),
            dim_cap=options.get("dim_cap", settings.dim_cap),
            jobs=options.get("jobs", settings.jobs),
        )

    # operand lookup

    def _module(self, name: str) -> PresentedModule:
        obj = self.objects[name]
        if isinstance(obj, QuotientRing):
            if name not in self._free:
                free = free_module(obj, 1)
                self._free[name] = PresentedModule(obj, free.presentation, free.degrees, label=name)
            return self._free[name]
        return obj

    def _ambient(self, M: PresentedModule, name: str) -> PresentedModule:
        """The module named ``name`` as the ambient of M; a ring means the R that M sits in"""
        if isinstance(self.objects[name], QuotientRing) and M.is_ideal:
            return M.ambient
        return self._module(name)

    # operations

    def _op_trace(self, first: str, second: Optional[str] = None) -> dict:
        if second is None:
            return trace_ideal(self.objects[first]).to_dict()
        return trace_in(self._module(first), self._module(second)).to_dict()

    def _op_is_trace(self, m: str, x: str) -> dict:
        M = self._module(m)
        return {"trace_module": is_trace_module(M, self._ambient(M, x))}

    def _op_generates(self, m: str, x: str) -> dict:
        return {"generates": generates(self._module(m), self._module(x))}

    def _op_triad(self, m: str, x: str) -> dict:
        M = self._module(m)
        triad = trace_triad(M, self._ambient(M, x))
        return {**triad.to_dict(), "all_three": triad.all_three}

    def _op_ext(self, i: int, m: str, n: str) -> dict:
        E = ext(i, self._module(m), self._module(n))
        return {"zero": is_zero(E), "length": length(E), "presentation": E.presentation.render()}

    def _op_hom(self, m: str, n: str) -> dict:
        H = hom_module(self._module(m), self._module(n))
        return {"zero": H.is_zero(), "length": H.dimension(), "generators": H.carrier.ngens}

    def _op_rigid(self, m: str) -> dict:
        return rigidity(self._module(m)).to_dict()

    def _op_syzygy(self, n: int, m: str) -> dict:
        return _describe(syzygy(self._module(m), n))

    def _op_cosyzygy(self, n: int, m: str) -> dict:
        return _describe(cosyzygy(self._module(m), n))

    def _op_resolve(self, n: int, m: str) -> dict:
        res = resolve(self._module(m), max(n, 1))
        ranks = [res.rank(i) for i in range(min(n, res.length) + 1)]
        return {"betti": ranks, "complete": res.complete}

    def _op_grade(self, i: str) -> dict:
        return {"grade": grade(self.objects[i])}

    def _op_ann(self, m: str) -> dict:
        return {"annihilator": [str(g) for g in annihilator(self._module(m)).ideal_generators]}

    def _op_socle(self, m: str) -> dict:
        M = self._module(m)
        S = socle(M)
        return {"length": length(S), "generators": [_element(M, c) for c in S.embedding.columns]}

    def _op_dual(self, m: str) -> dict:
        H = dual(self._module(m))
        return {"zero": H.is_zero(), "length": H.dimension(), **_describe(H.carrier)}

    def _op_conormal(self, i: str) -> dict:
        C = conormal_dual(self.objects[i])
        return {"zero": is_zero(C), "length": length(C)}

    def _op_gorenstein(self, r: str) -> dict:
        return {"gorenstein": is_artinian_gorenstein(self.objects[r])}

    def _op_free(self, m: str) -> dict:
        M = self._module(m)
        return {"free": is_free(M), "minimal_generators": minimal_generators(M)}

    def _op_length(self, m: str) -> dict:
        return {"length": length(self._module(m))}

    def _op_gb(self, i: str) -> dict:
        I = self.objects[i]
        return {"groebner_basis": [str(g) for g in reduced_generators(I.ring, I.ideal_generators)]}


def _element(M: PresentedModule, col) -> str:
    """A column over M's generators, as a ring element when M is an ideal"""
    if M.is_ideal:
        R = M.ring
        total = R.zero()
        for c, g in zip(col, M.ideal_generators):
            total = total + c * g
        return str(R.reduce(total))
    return "(" + ", ".join(str(p) for p in col) + ")"


def _describe(M: PresentedModule) -> dict:
    return {"generators": M.ngens, "relations": M.presentation.ncols, "presentation": M.presentation.render()}
