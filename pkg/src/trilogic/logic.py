"""First-order formulas over triangles or points: syntax trees, signatures, parser and printer.

Variables start with a lowercase letter; predicate and relation names with an
uppercase one.  Every language has a single variable sort, fixed by its
signature.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import (
    ArityError,
    ArityMismatch,
    FormulaSyntaxError,
    SortError,
    UnknownPredicate,
    UnknownRelation,
)

# -- syntax trees -----------------------------------------------------------------


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    """A built-in predicate or derived macro; ``params`` names relations (IsBounded)."""

    pred: str
    args: tuple[str, ...]
    params: tuple[str, ...] = ()


@dataclass(frozen=True)
class RelAtom(Formula):
    rel: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


TRUE = And(())
FALSE = Or(())


def conj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Or) else (p,))
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def implies(a: Formula, b: Formula) -> Formula:
    return disj(Not(a), b)


def exists(vars: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(vars)):
        body = Exists(v, body)
    return body


def forall(vars: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(vars)):
        body = Forall(v, body)
    return body


def atom(pred: str, *args: str) -> Atom:
    return Atom(pred, tuple(args))


# -- signatures ---------------------------------------------------------------------

SORTS = ("triangle", "point", "st-triangle", "st-point")


@dataclass(frozen=True)
class Signature:
    tag: str
    sort: str
    predicates: Mapping[str, int]
    macros: Mapping[str, int] = field(default_factory=dict)

    @property
    def st(self) -> bool:
        return self.sort.startswith("st-")

    @property
    def points(self) -> bool:
        return self.sort.endswith("point")

    def arity(self, name: str) -> int | None:
        if name in self.predicates:
            return self.predicates[name]
        return self.macros.get(name)

    def extend(self, extra: Mapping[str, int], tag: str | None = None) -> "Signature":
        return Signature(tag or self.tag, self.sort, {**self.predicates, **extra}, self.macros)


_TRI_MACROS = {"Point": 1, "Seg": 1, "RealTriangle": 1, "ParSeg": 2, "ColSeg": 2, "Sim": 2,
               "Intersect": 2, "CornerP": 4, "IsBounded": 0}
_TRI_ST_MACROS = {"Point": 1, "CoTemp": 2, "CornerP": 4}
_PT_ST_MACROS = {"Cotemp": 2, "CenterOM": 4, "InTriangle": 4}

SIGNATURES: dict[str, Signature] = {
    "TRI": Signature("TRI", "triangle", {"PartOf": 2}, _TRI_MACROS),
    "PT": Signature("PT", "point", {"Between": 3}, {"InTriangle": 4, "Collinear": 3}),
    "TRI_ST_CAS": Signature("TRI_ST_CAS", "st-triangle", {"PartOfCotemp": 2, "BeforeTri": 2, "Cas": 6}, _TRI_ST_MACROS),
    "TRI_ST_LEX": Signature("TRI_ST_LEX", "st-triangle", {"PartOfCotemp": 2, "BeforeTri": 2, "Lex": 6}, _TRI_ST_MACROS),
    "TRI_ST_SAS": Signature("TRI_ST_SAS", "st-triangle", {"PartOfCotemp": 2, "BeforeTri": 2, "SAS": 4}, _TRI_ST_MACROS),
    "TRI_ST_V": Signature("TRI_ST_V", "st-triangle", {"PartOfCotemp": 2, "BeforeTri": 2, "SAS": 4, "NoSp": 2}, _TRI_ST_MACROS),
    "PT_ST_A": Signature("PT_ST_A", "st-point", {"BetweenCotemp": 3, "Before": 2, "EqCrST": 6},
                         {**_PT_ST_MACROS, "CollinearCotemp": 3, "SameRelArea": 11, "Mid": 3}),
    "PT_ST_AC": Signature("PT_ST_AC", "st-point", {"Between": 3, "Before": 2},
                          {**_PT_ST_MACROS, "Collinear": 3, "CoPlanar": 4, "Meet": 4}),
    "PT_ST_V": Signature("PT_ST_V", "st-point", {"Between": 3, "Before": 2, "EqSpace": 2},
                         {**_PT_ST_MACROS, "Collinear": 3, "CoPlanar": 4, "Meet": 4}),
}

LANG_TAGS = {
    "tri": "TRI", "pt": "PT", "tri-st-cas": "TRI_ST_CAS", "tri-st-lex": "TRI_ST_LEX",
    "tri-st-sas": "TRI_ST_SAS", "tri-st-v": "TRI_ST_V", "pt-st-a": "PT_ST_A",
    "pt-st-ac": "PT_ST_AC", "pt-st-v": "PT_ST_V",
}

ALL_PREDICATES = {n for s in SIGNATURES.values() for n in (*s.predicates, *s.macros)}


def signature(tag: str) -> Signature:
    tag = LANG_TAGS.get(tag, tag)
    try:
        return SIGNATURES[tag]
    except KeyError:
        raise ValueError(f"unknown language {tag!r}") from None


# -- traversal --------------------------------------------------------------------------

def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Or)):
        return f.parts
    if isinstance(f, (Not, Exists, Forall)):
        return (f.body,)
    return ()


def atoms(f: Formula) -> Iterator[Formula]:
    if isinstance(f, (Atom, RelAtom, Eq)):
        yield f
    for c in children(f):
        yield from atoms(c)


def _atom_vars(f) -> tuple[str, ...]:
    return (f.left, f.right) if isinstance(f, Eq) else f.args


def free_vars(f: Formula) -> list[str]:
    """Free variables in order of first occurrence."""
    out: list[str] = []
    seen: set[str] = set()

    def walk(g: Formula, bound: frozenset):
        if isinstance(g, (Atom, RelAtom, Eq)):
            for v in _atom_vars(g):
                if v not in bound and v not in seen:
                    seen.add(v)
                    out.append(v)
        elif isinstance(g, (Exists, Forall)):
            walk(g.body, bound | {g.var})
        else:
            for c in children(g):
                walk(c, bound)

    walk(f, frozenset())
    return out


def all_vars(f: Formula) -> set[str]:
    out: set[str] = set()
    for a in atoms(f):
        out.update(_atom_vars(a))

    def walk(g):
        if isinstance(g, (Exists, Forall)):
            out.add(g.var)
        for c in children(g):
            walk(c)

    walk(f)
    return out


def quantifier_depth(f: Formula) -> int:
    inner = max((quantifier_depth(c) for c in children(f)), default=0)
    return inner + 1 if isinstance(f, (Exists, Forall)) else inner


def substitute(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename free variables; bound variables that would capture are renamed first."""
    targets = set(mapping.values())

    def fresh(base: str, avoid: set[str]) -> str:
        i = 1
        while f"{base}_{i}" in avoid:
            i += 1
        return f"{base}_{i}"

    def go(g: Formula, m: Mapping[str, str]) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(m.get(a, a) for a in g.args), g.params)
        if isinstance(g, RelAtom):
            return RelAtom(g.rel, tuple(m.get(a, a) for a in g.args))
        if isinstance(g, Eq):
            return Eq(m.get(g.left, g.left), m.get(g.right, g.right))
        if isinstance(g, Not):
            return Not(go(g.body, m))
        if isinstance(g, And):
            return And(tuple(go(c, m) for c in g.parts))
        if isinstance(g, Or):
            return Or(tuple(go(c, m) for c in g.parts))
        inner = {k: v for k, v in m.items() if k != g.var}
        var = g.var
        if var in targets:
            var = fresh(g.var, targets | all_vars(g) | set(m))
            inner[g.var] = var
        return type(g)(var, go(g.body, inner))

    return go(f, mapping)


# -- printing -----------------------------------------------------------------------------

_LEVEL = {"impl": 0, "or": 1, "and": 2, "unary": 3}


def to_text(f: Formula) -> str:
    return _show(f, 0)


def _show(f: Formula, ctx: int) -> str:
    if isinstance(f, Atom):
        args = (*f.params, *f.args)
        return f"{f.pred}({', '.join(args)})"
    if isinstance(f, RelAtom):
        return f"{f.rel}({', '.join(f.args)})"
    if isinstance(f, Eq):
        s = f"{f.left} = {f.right}"
        return s if ctx < _LEVEL["unary"] else f"({s})"
    if isinstance(f, Not):
        return "!" + _show(f.body, _LEVEL["unary"])
    if isinstance(f, And):
        if not f.parts:
            return "true"
        s = " & ".join(_show(c, _LEVEL["unary"] if isinstance(c, And) else _LEVEL["and"]) for c in f.parts)
        return s if ctx <= _LEVEL["and"] else f"({s})"
    if isinstance(f, Or):
        if not f.parts:
            return "false"
        s = " | ".join(_show(c, _LEVEL["unary"] if isinstance(c, Or) else _LEVEL["or"]) for c in f.parts)
        return s if ctx <= _LEVEL["or"] else f"({s})"
    kind = "exists" if isinstance(f, Exists) else "forall"
    names = [f.var]
    body = f.body
    while type(body) is type(f):
        names.append(body.var)
        body = body.body
    s = f"{kind} {' '.join(names)} {_show(body, _LEVEL['unary'])}"
    # the body extends maximally, so a quantifier inside a connective needs parentheses
    return s if ctx == 0 else f"({s})"


# -- parsing ------------------------------------------------------------------------------

_TOK = re.compile(
    r"\s+|#[^\n]*|(?P<tok><->|->|!=|:=|[A-Za-z_][A-Za-z_0-9]*|[()=,!&|.;:~]|[∃∀¬∧∨→↔]|\S)"
)
_UNICODE = {"∃": "exists", "∀": "forall", "¬": "!", "~": "!", "∧": "&", "∨": "|", "→": "->", "↔": "<->"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    for m in _TOK.finditer(text):
        tok = m.group("tok")
        if tok is not None:
            out.append((_UNICODE.get(tok, tok), m.start()))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature, macros: Mapping[str, "Query"]):
        self.toks = _tokenize(text)
        self.end = len(text)
        self.i = 0
        self.sig = sig
        self.macros = macros

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j][0] if j < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else self.end

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError(f"unexpected end, expected {expected or 'more input'}", self.pos())
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return implies(left, self.formula())
        if self.peek() == "<->":
            self.take()
            right = self.formula()
            return conj(implies(left, right), implies(right, left))
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conjunction())
        return disj(*parts)

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return conj(*parts)

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("exists", "forall"):
            self.take()
            names = [self.variable()]
            while True:
                if self.peek() == ",":
                    self.take()
                    names.append(self.variable())
                elif self.peek() is not None and _is_var(self.peek()) and self.peek(1) != "=" and self.peek(1) != "!=":
                    names.append(self.variable())
                else:
                    break
            if self.peek() in (".", ":"):
                self.take()
            body = self.formula()
            return (exists if tok == "exists" else forall)(names, body)
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if tok is not None and _is_var(tok):
            left = self.variable()
            op = self.peek()
            if op not in ("=", "!="):
                raise FormulaSyntaxError(f"expected '=' after variable {left!r}", self.pos())
            self.take()
            right = self.variable()
            return Eq(left, right) if op == "=" else Not(Eq(left, right))
        return self.atom()

    def variable(self) -> str:
        at = self.pos()
        tok = self.take()
        if not _is_var(tok):
            raise FormulaSyntaxError(f"expected a variable, found {tok!r}", at)
        return tok

    def atom(self) -> Formula:
        at = self.pos()
        name = self.take()
        if not re.fullmatch(r"[A-Z][A-Za-z_0-9]*", name):
            raise FormulaSyntaxError(f"unexpected {name!r}", at)
        self.take("(")
        args: list[str] = []
        if self.peek() != ")":
            args.append(self.take())
            while self.peek() == ",":
                self.take()
                args.append(self.take())
        self.take(")")
        if name in self.macros:
            q = self.macros[name]
            self._check_vars(args, at)
            if len(args) != len(q.params):
                raise ArityError(f"{name} expects {len(q.params)} arguments, got {len(args)}")
            return substitute(q.formula, dict(zip(q.params, args)))
        arity = self.sig.arity(name)
        if arity is not None:
            if name == "IsBounded":
                if len(args) != 1 or _is_var(args[0]):
                    raise ArityError("IsBounded takes one relation name")
                return Atom(name, (), (args[0],))
            self._check_vars(args, at)
            if len(args) != arity:
                raise ArityError(f"{name} expects {arity} arguments, got {len(args)}")
            return Atom(name, tuple(args))
        if name in ALL_PREDICATES:
            raise UnknownPredicate(f"{name} is not available in {self.sig.tag}")
        self._check_vars(args, at)
        return RelAtom(name, tuple(args))

    def _check_vars(self, args, at):
        for a in args:
            if not _is_var(a):
                raise FormulaSyntaxError(f"expected a variable argument, found {a!r}", at)


_KEYWORDS = {"exists", "forall", "true", "false", "query"}


def _is_var(tok: str) -> bool:
    return bool(re.fullmatch(r"[a-z][A-Za-z_0-9]*", tok)) and tok not in _KEYWORDS


def parse(text: str, sig: Signature | str = "TRI", macros: Mapping[str, "Query"] | None = None) -> Formula:
    if isinstance(sig, str):
        sig = signature(sig)
    p = _Parser(text, sig, macros or {})
    f = p.formula()
    if p.peek() is not None:
        raise FormulaSyntaxError(f"trailing input {p.peek()!r}", p.pos())
    return f


# -- queries --------------------------------------------------------------------------------

@dataclass(frozen=True)
class Query:
    name: str
    params: tuple[str, ...]
    formula: Formula


_QUERY_HEAD = re.compile(r"\s*query\s+([A-Za-z_][A-Za-z_0-9]*)\s*\(([^)]*)\)\s*:=")


def _strip_comments(text: str) -> str:
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


def parse_queries(text: str, sig: Signature | str = "TRI") -> dict[str, Query]:
    """Parse ``query NAME(vars) := formula ;`` blocks; later blocks may call earlier ones."""
    if isinstance(sig, str):
        sig = signature(sig)
    text = _strip_comments(text)
    out: dict[str, Query] = {}
    pos = 0
    while text[pos:].strip():
        m = _QUERY_HEAD.match(text, pos)
        if not m:
            raise FormulaSyntaxError("expected 'query NAME(vars) :='", pos + len(text[pos:]) - len(text[pos:].lstrip()))
        name = m.group(1)
        params = []
        for raw in (s.strip() for s in m.group(2).split(",") if s.strip()):
            var, _, sort = raw.partition(":")
            var, sort = var.strip(), sort.strip()
            if not _is_var(var):
                raise FormulaSyntaxError(f"bad parameter {raw!r}", m.start(2))
            if sort and _SORT_ALIASES.get(sort, sort) != sig.sort:
                raise SortError(f"parameter {var} declared {sort}, but {sig.tag} variables are {sig.sort}")
            params.append(var)
        end = text.find(";", m.end())
        if end < 0:
            raise FormulaSyntaxError("missing ';' after query", len(text))
        try:
            f = parse(text[m.end():end], sig, out)
        except FormulaSyntaxError as e:
            raise FormulaSyntaxError(str(e).rsplit(" at offset", 1)[0], m.end() + e.pos) from None
        extra = [v for v in free_vars(f) if v not in params]
        if extra:
            raise SortError(f"query {name} has undeclared free variables {extra}")
        out[name] = Query(name, tuple(params), f)
        pos = end + 1
    return out


_SORT_ALIASES = {"tri": "triangle", "pt": "point", "st-tri": "st-triangle", "st-pt": "st-point"}


# -- checking -----------------------------------------------------------------------------

def check(f: Formula, schema, points: bool = False) -> None:
    """Raise UnknownRelation or ArityMismatch when relation atoms disagree with the schema."""
    scale = 3 if points else 1
    for a in atoms(f):
        names = []
        if isinstance(a, RelAtom):
            names.append((a.rel, len(a.args)))
        elif isinstance(a, Atom) and a.params:
            names.extend((p, None) for p in a.params)
        for name, n in names:
            if name not in schema.arities:
                raise UnknownRelation(f"relation {name} is not in the schema")
            if n is not None and n != scale * schema.arities[name]:
                raise ArityMismatch(f"{name} has arity {scale * schema.arities[name]}, used with {n}")
