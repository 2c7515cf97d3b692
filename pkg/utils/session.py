"""
Session scripts: rings, ideals, modules, operations and checks.

    ring R = F5[x,y] / (x*y);
    ideal I = (y) in R;
    module M = coker([[x, y], [0, x]]) in R;
    module N = R / I;
    trace(I); rigid(I); ext(1, M, N);
    check thm-3.9 on R source=monomial_exhaustive window=-1..2;

Names are checked while parsing, so a script that parses only refers to
objects it defines, with consistent rings and arities.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

from engine.arith import FieldSpec
from engine.errors import PolynomialSyntaxError, SessionSyntaxError
from engine.poly import MonomialOrder, ORDER_KINDS, PolyRing, QuotientRing, quotient_ring
from verify.report import CHECK_CATALOG, CHECK_ALIASES, RINGLESS_CHECKS, SOURCES

logger = logging.getLogger(__name__)

_TOKENS = {
    "comment": r"\#[^\n]*",
    "skip": r"[ \t\r\n]+",
    "label": r"[A-Za-z][A-Za-z0-9]*(?:[-.][A-Za-z0-9]+)+",
    "name": r"[A-Za-z_][A-Za-z0-9_]*",
    "number": r"\d+",
    "range": r"\.\.",
    "lpar": r"\(",
    "rpar": r"\)",
    "lbrack": r"\[",
    "rbrack": r"\]",
    "comma": r",",
    "semi": r";",
    "equal": r"=",
    "colon": r":",
    "slash": r"/",
    "op": r"\*\*|[-+*^.]",
    "error": r".",
}
_REGEX = re.compile("|".join(f"(?P<{name}>{text})" for name, text in _TOKENS.items()))

# argument kinds: "int", "ring", "ideal", "module" (a module accepts rings and ideals too)
OPERATIONS = {
    "trace": (("ideal",), ("module", "module")),
    "is_trace": (("module", "module"),),
    "generates": (("module", "module"),),
    "triad": (("module", "module"),),
    "ext": (("int", "module", "module"),),
    "hom": (("module", "module"),),
    "rigid": (("module",),),
    "syzygy": (("int", "module"),),
    "cosyzygy": (("int", "module"),),
    "resolve": (("int", "module"),),
    "grade": (("ideal",),),
    "ann": (("module",),),
    "socle": (("module",),),
    "dual": (("module",),),
    "conormal": (("ideal",),),
    "gorenstein": (("ring",),),
    "free": (("module",),),
    "length": (("module",),),
    "gb": (("ideal",),),
}

# smallest index each integer-taking operation accepts
INDEX_MINIMUM = {"ext": 0, "syzygy": 0, "resolve": 0, "cosyzygy": 1}

CHECK_OPTIONS = ("source", "seed", "count", "window", "ext_bound", "max_degree", "dim_cap", "jobs")

_KEYWORDS = ("ring", "ideal", "module", "check")


class Token(NamedTuple):
    type: str
    value: str
    where: Tuple[int, int]


class SymbolInfo(NamedTuple):
    kind: str
    ring: str


@dataclass(frozen=True)
class RingDef:
    name: str
    base: PolyRing
    relations: Tuple[str, ...]
    text: str = ""


@dataclass(frozen=True)
class IdealDef:
    name: str
    ring: str
    generators: Tuple[str, ...]
    text: str = ""


@dataclass(frozen=True)
class ModuleDef:
    """Either a cokernel of a matrix (rows of polynomial text) or a cyclic module R / I"""

    name: str
    ring: str
    rows: Tuple[Tuple[str, ...], ...] = ()
    ideal: Optional[str] = None
    text: str = ""


@dataclass(frozen=True)
class Invocation:
    op: str
    args: Tuple[Union[int, str], ...]
    text: str = ""


@dataclass(frozen=True)
class CheckInvocation:
    check_id: str
    ring: Optional[str]
    options: Tuple[Tuple[str, object], ...] = ()
    text: str = ""

    def option_dict(self) -> dict:
        return dict(self.options)


Statement = Union[RingDef, IdealDef, ModuleDef, Invocation, CheckInvocation]


@dataclass
class Session:
    source: str
    statements: List[Statement] = field(default_factory=list)
    symbols: Dict[str, SymbolInfo] = field(default_factory=dict)

    def __len__(self):
        return len(self.statements)


def tokenize(source: str) -> Iterator[Token]:
    for mo in _REGEX.finditer(source):
        kind = mo.lastgroup
        if kind in ("skip", "comment"):
            continue
        token = Token(kind, mo.group(), (mo.start(), mo.end()))
        if kind == "error":
            line, column = _position(source, token.where[0])
            raise SessionSyntaxError(f"unexpected character {token.value!r}", line, column)
        yield token


def _position(source: str, offset: int) -> Tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    column = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, column


class SessionParser:
    """Recursive-descent parser over the token stream, keeping the symbol table"""

    def __init__(self, source: str):
        self.source = source
        self.tokens = list(tokenize(source))
        self.index = 0
        self.symbols: Dict[str, SymbolInfo] = {}
        self.bases: Dict[str, PolyRing] = {}

    # token helpers

    def _peek(self, offset: int = 0) -> Optional[Token]:
        i = self.index + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def _error(self, message: str, token: Optional[Token] = None) -> SessionSyntaxError:
        if token is None:
            token = self._peek()
        offset = token.where[0] if token is not None else len(self.source)
        line, column = _position(self.source, offset)
        return SessionSyntaxError(message, line, column)

    def _advance(self) -> Token:
        token = self._peek()
        if token is None:
            raise self._error("unexpected end of input")
        self.index += 1
        return token

    def _expect(self, kind: str, value: Optional[str] = None) -> Token:
        token = self._peek()
        wanted = value or kind
        if token is None:
            raise self._error(f"expected {wanted!r}, found end of input")
        if token.type != kind or (value is not None and token.value != value):
            raise self._error(f"expected {wanted!r}, found {token.value!r}", token)
        self.index += 1
        return token

    def _accept(self, kind: str, value: Optional[str] = None) -> Optional[Token]:
        token = self._peek()
        if token is not None and token.type == kind and (value is None or token.value == value):
            self.index += 1
            return token
        return None

    def _integer(self) -> int:
        sign = -1 if self._accept("op", "-") else 1
        return sign * int(self._expect("number").value)

    def _span(self, first: Token, last: Token) -> str:
        return self.source[first.where[0]:last.where[1]]

    def _expression(self, stops: Tuple[str, ...]) -> Tuple[str, Token]:
        """Raw polynomial text up to a depth-zero token of one of the ``stops`` types"""
        start = self._peek()
        depth = 0
        last = None
        while True:
            token = self._peek()
            if token is None or token.type == "semi":
                raise self._error("unterminated expression", token)
            if depth == 0 and token.type in stops:
                break
            if token.type in ("lpar", "lbrack"):
                depth += 1
            elif token.type in ("rpar", "rbrack"):
                depth -= 1
            last = self._advance()
        if last is None:
            raise self._error("expected a polynomial", start)
        return self._span(start, last), start

    def _polynomial_list(self, close: str, base: PolyRing) -> Tuple[str, ...]:
        items = []
        if self._accept(close):
            return ()
        while True:
            text, where = self._expression(("comma", close))
            self._validate(base, text, where)
            items.append(text)
            if self._accept(close):
                return tuple(items)
            self._expect("comma")

    def _validate(self, base: PolyRing, text: str, where: Token):
        try:
            base.parse(text)
        except PolynomialSyntaxError as e:
            raise self._error(str(e), where)

    # symbols

    def _define(self, name_token: Token, kind: str, ring: str):
        if name_token.value in self.symbols:
            raise self._error(f"redefinition of {name_token.value}", name_token)
        self.symbols[name_token.value] = SymbolInfo(kind, ring)

    def _ring_name(self) -> Token:
        token = self._expect("name")
        info = self.symbols.get(token.value)
        if info is None or info.kind != "ring":
            raise self._error(f"unknown ring {token.value}", token)
        return token

    # statements

    def parse(self) -> Session:
        session = Session(self.source)
        while self._peek() is not None:
            if self._accept("semi"):
                continue
            start = self._peek()
            statement = self._statement()
            end = self._expect("semi")
            text = self._span(start, end)
            statement = replace(statement, text=text)
            session.statements.append(statement)
            logger.debug("parsed %s", text)
        session.symbols = dict(self.symbols)
        return session

    def _statement(self) -> Statement:
        token = self._peek()
        if token.type == "name" and token.value in _KEYWORDS and self._is_keyword_use():
            return getattr(self, f"_{token.value}_statement")()
        if token.type == "name" and self._peek(1) is not None and self._peek(1).type == "lpar":
            return self._invocation()
        raise self._error(f"expected a statement, found {token.value!r}", token)

    def _is_keyword_use(self) -> bool:
        nxt = self._peek(1)
        return nxt is not None and nxt.type in ("name", "label")

    def ring_expression(self) -> Tuple[PolyRing, Tuple[str, ...]]:
        """FIELD[vars] [/ (relations)] [order KIND]"""
        field_token = self._expect("name")
        field_spec = self._field(field_token)
        self._expect("lbrack")
        names, weights = [], []
        while True:
            var = self._expect("name")
            names.append(var.value)
            weights.append(self._integer() if self._accept("colon") else 1)
            if self._accept("rbrack"):
                break
            self._expect("comma")
        order = "grevlex"
        relations_start = None
        if self._accept("slash"):
            relations_start = self._expect("lpar")
        relations_tokens = self.index
        # the order clause may follow the relations; parse it before validating them
        if relations_start is not None:
            self._skip_group()
        if self._accept("name", "order"):
            kind = self._expect("name")
            if kind.value not in ORDER_KINDS:
                raise self._error(f"unknown monomial order {kind.value}", kind)
            order = kind.value
        try:
            base = PolyRing(field_spec, tuple(names), MonomialOrder(order), tuple(weights))
        except ValueError as e:
            raise self._error(str(e), field_token)
        relations = ()
        if relations_start is not None:
            resume = self.index
            self.index = relations_tokens
            relations = self._polynomial_list("rpar", base)
            self.index = resume
        return base, relations

    def _skip_group(self):
        depth = 1
        while depth:
            token = self._advance()
            if token.type == "semi":
                raise self._error("unbalanced parentheses", token)
            if token.type == "lpar":
                depth += 1
            elif token.type == "rpar":
                depth -= 1

    def _field(self, token: Token) -> FieldSpec:
        if token.value == "Q":
            return FieldSpec.rationals()
        match = re.fullmatch(r"F(\d+)", token.value)
        if match is None:
            raise self._error(f"unknown field {token.value}; use Q or F<p>", token)
        try:
            return FieldSpec.prime(int(match.group(1)))
        except ValueError as e:
            raise self._error(str(e), token)

    def _ring_statement(self) -> RingDef:
        self._expect("name", "ring")
        name = self._expect("name")
        self._expect("equal")
        base, relations = self.ring_expression()
        self._define(name, "ring", name.value)
        self.bases[name.value] = base
        return RingDef(name.value, base, relations)

    def _ideal_statement(self) -> IdealDef:
        self._expect("name", "ideal")
        name = self._expect("name")
        self._expect("equal")
        self._expect("lpar")
        start = self.index
        self._skip_group()
        self._expect("name", "in")
        ring = self._ring_name()
        resume = self.index
        self.index = start
        gens = self._polynomial_list("rpar", self.bases[ring.value])
        self.index = resume
        self._define(name, "ideal", ring.value)
        return IdealDef(name.value, ring.value, gens)

    def _module_statement(self) -> ModuleDef:
        self._expect("name", "module")
        name = self._expect("name")
        self._expect("equal")
        head = self._expect("name")
        if head.value == "coker":
            self._expect("lpar")
            start = self.index
            self._skip_group()
            self._expect("name", "in")
            ring = self._ring_name()
            resume = self.index
            self.index = start
            rows = self._matrix(self.bases[ring.value])
            self._expect("rpar")
            self.index = resume
            self._define(name, "module", ring.value)
            return ModuleDef(name.value, ring.value, rows=rows)
        info = self.symbols.get(head.value)
        if info is None or info.kind != "ring":
            raise self._error(f"unknown ring {head.value}", head)
        self._expect("slash")
        ideal = self._expect("name")
        ideal_info = self.symbols.get(ideal.value)
        if ideal_info is None:
            raise self._error(f"unknown identifier {ideal.value}", ideal)
        if ideal_info.kind != "ideal":
            raise self._error(f"{ideal.value} is a {ideal_info.kind}, expected an ideal", ideal)
        if ideal_info.ring != head.value:
            raise self._error(f"{ideal.value} is an ideal of {ideal_info.ring}, not {head.value}", ideal)
        self._define(name, "module", head.value)
        return ModuleDef(name.value, head.value, ideal=ideal.value)

    def _matrix(self, base: PolyRing) -> Tuple[Tuple[str, ...], ...]:
        self._expect("lbrack")
        rows = []
        while True:
            row_start = self._expect("lbrack")
            row = self._polynomial_list("rbrack", base)
            if not row:
                raise self._error("empty matrix row", row_start)
            if rows and len(row) != len(rows[0]):
                raise self._error(f"matrix rows differ in length ({len(rows[0])} vs {len(row)})", row_start)
            rows.append(row)
            if self._accept("rbrack"):
                return tuple(rows)
            self._expect("comma")

    def _check_statement(self) -> CheckInvocation:
        self._expect("name", "check")
        token = self._advance()
        if token.type not in ("label", "name"):
            raise self._error("expected a check id", token)
        check_id = CHECK_ALIASES.get(token.value, token.value)
        if check_id not in CHECK_CATALOG:
            raise self._error(f"unknown check {token.value}", token)
        ring = None
        if self._accept("name", "on"):
            ring = self._ring_name().value
        elif check_id not in RINGLESS_CHECKS:
            raise self._error(f"check {check_id} needs 'on <ring>'")
        options = []
        seen = set()
        while self._peek() is not None and self._peek().type == "name":
            key = self._advance()
            if key.value not in CHECK_OPTIONS:
                raise self._error(f"unknown check option {key.value}", key)
            if key.value in seen:
                raise self._error(f"option {key.value} given twice", key)
            seen.add(key.value)
            self._expect("equal")
            options.append((key.value, self._option_value(key)))
        return CheckInvocation(check_id, ring, tuple(options))

    def _option_value(self, key: Token):
        if key.value == "source":
            value = self._expect("name")
            if value.value not in SOURCES:
                raise self._error(f"unknown source {value.value}; use one of {', '.join(SOURCES)}", value)
            return value.value
        if key.value == "window":
            low = self._integer()
            self._expect("range")
            high = self._integer()
            if low > high:
                raise self._error(f"empty window {low}..{high}", key)
            return (low, high)
        return self._integer()

    def _invocation(self) -> Invocation:
        op = self._expect("name")
        if op.value not in OPERATIONS:
            raise self._error(f"unknown operation {op.value}", op)
        self._expect("lpar")
        args: List[Tuple[Token, Union[int, str]]] = []
        if not self._accept("rpar"):
            while True:
                token = self._peek()
                if token is not None and (token.type == "number" or token.value == "-"):
                    args.append((token, self._integer()))
                else:
                    ident = self._expect("name")
                    args.append((ident, ident.value))
                if self._accept("rpar"):
                    break
                self._expect("comma")
        signature = self._match_signature(op, args)
        self._check_arguments(op, args, signature)
        return Invocation(op.value, tuple(value for _, value in args))

    def _match_signature(self, op: Token, args) -> Tuple[str, ...]:
        signatures = OPERATIONS[op.value]
        for signature in signatures:
            if len(signature) == len(args):
                return signature
        counts = " or ".join(str(len(s)) for s in signatures)
        raise self._error(f"{op.value} expects {counts} argument(s), got {len(args)}", op)

    def _check_arguments(self, op: Token, args, signature: Tuple[str, ...]):
        rings = set()
        for (token, value), kind in zip(args, signature):
            if kind == "int":
                if not isinstance(value, int):
                    raise self._error(f"{op.value} expects an integer here", token)
                least = INDEX_MINIMUM.get(op.value, 0)
                if value < least:
                    raise self._error(f"{op.value} index must be at least {least}, got {value}", token)
                continue
            if isinstance(value, int):
                raise self._error(f"{op.value} expects a name here, got {value}", token)
            info = self.symbols.get(value)
            if info is None:
                raise self._error(f"unknown identifier {value}", token)
            if kind == "ideal" and info.kind != "ideal":
                raise self._error(f"{op.value} expects an ideal, {value} is a {info.kind}", token)
            if kind == "ring" and info.kind != "ring":
                raise self._error(f"{op.value} expects a ring, {value} is a {info.kind}", token)
            rings.add(info.ring)
        if len(rings) > 1:
            raise self._error(f"{op.value} mixes objects over different rings {sorted(rings)}", op)


def parse_session(text: str) -> Session:
    """
    Parse a session script

    Args:
        text: the script; statements end with ';' and '#' starts a comment

    Returns:
        Session with its statements in order and the symbol table
    """
    session = SessionParser(text).parse()
    logger.info("parsed session with %d statement(s)", len(session))
    return session


def build_ring(definition: RingDef) -> QuotientRing:
    base = definition.base
    return quotient_ring(base, [base.parse(r) for r in definition.relations])


def parse_ring(text: str) -> QuotientRing:
    """Build a quotient ring from text such as "F2[x,y]/(x^2, y^2)" or "Q[a:3,b:4]/(...) order lex" """
    parser = SessionParser(text)
    base, relations = parser.ring_expression()
    if parser._peek() is not None:
        raise parser._error(f"trailing input {parser._peek().value!r}")
    return build_ring(RingDef("R", base, relations))
