"""Session configuration: TOML tables plus the relation-expression grammar.

Expression grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' '-'? INT)?
    atom    := INT | NAME | 'g' '(' INT (',' INT)* ')' | '(' expr ')'
             | '[' expr ',' expr (';' expr)? ']'

Names resolve, in order, to session definitions, named scalars, the roots z
(zeta of order ``field.zeta``) and zN, letters x1..x9, group generators
g1..g9 and braiding entries qij. ``[a, b; q]`` is the
braided commutator a b - q b a; without q the braiding between the weights of
a and b is used. A top-level power of a multi-term element stays unexpanded.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any, Optional, Union

import tomli

from .algebra import SmashElement, q_bracket
from .nichols import Power, Relation, Stratification, Stratum
from .rewrite import MonomialOrder
from .scalars import CycNumber
from .yddata import AbelianGroup, YDDatum, minimal_realization


class ConfigError(ValueError):
    """Input error; `path` is the offending key, `pos` a 1-based column when known."""

    def __init__(self, message: str, path: str = "", pos: Optional[int] = None):
        loc = path
        if pos is not None:
            loc += f" (column {pos})"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.pos = pos


# tokenizer / parser -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],;]))")


@dataclass(frozen=True)
class Node:
    kind: str  # int | name | group | neg | add | sub | mul | div | pow | bracket
    args: tuple = ()
    pos: int = 0


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    i = 0
    text = text.rstrip()
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            col = i + 1 + (len(text[i:]) - len(text[i:].lstrip()))
            raise ConfigError(f"unexpected character {text[col - 1]!r}", pos=col)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        i = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value: Optional[str] = None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ConfigError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", pos=tok[2])
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ConfigError(f"unexpected {tok[1]!r}", pos=tok[2])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, pos = self.take()
            node = Node("add" if op == "+" else "sub", (node, self.term()), pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            node = Node("mul" if op == "*" else "div", (node, self.unary()), pos)
        return node

    def unary(self) -> Node:
        if self.peek()[1] == "-":
            pos = self.take()[2]
            return Node("neg", (self.unary(),), pos)
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.peek()[1] == "^":
            pos = self.take()[2]
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, val, p = self.take()
            if kind != "int":
                raise ConfigError("exponent must be an integer", pos=p)
            node = Node("pow", (node, sign * int(val)), pos)
        return node

    def atom(self) -> Node:
        kind, val, pos = self.take()
        if kind == "int":
            return Node("int", (int(val),), pos)
        if kind == "name":
            if val == "g" and self.peek()[1] == "(":
                self.take("(")
                exps = [self._int()]
                while self.peek()[1] == ",":
                    self.take()
                    exps.append(self._int())
                self.take(")")
                return Node("group", tuple(exps), pos)
            return Node("name", (val,), pos)
        if val == "(":
            node = self.expr()
            self.take(")")
            return node
        if val == "[":
            a = self.expr()
            self.take(",")
            b = self.expr()
            q = None
            if self.peek()[1] == ";":
                self.take()
                q = self.expr()
            self.take("]")
            return Node("bracket", (a, b, q), pos)
        raise ConfigError(f"unexpected {val or 'end of input'!r}", pos=pos)

    def _int(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "int":
            raise ConfigError("group literal needs integer exponents", pos=pos)
        return sign * int(val)


def parse_expression(text: str) -> Node:
    return _Parser(text).parse()


def root_orders(node: Node) -> set[int]:
    """Orders N of every zN literal in an expression."""
    out = set()
    if node.kind == "name":
        m = re.fullmatch(r"z(\d+)", node.args[0])
        if m:
            out.add(int(m.group(1)))
    for a in node.args:
        if isinstance(a, Node):
            out |= root_orders(a)
    return out


def uses_bare_z(node: Node) -> bool:
    if node.kind == "name" and node.args[0] == "z":
        return True
    return any(isinstance(a, Node) and uses_bare_z(a) for a in node.args)


# evaluation ------------------------------------------------------------------------

Value = Union[CycNumber, SmashElement, Power]


class Evaluator:
    """Elaborates expression trees over a datum."""

    def __init__(self, datum: Optional[YDDatum], order: int, zeta: int, scalars: Optional[dict] = None):
        self.datum = datum
        self.n = order
        self.zeta = zeta
        self.scalars: dict[str, CycNumber] = dict(scalars or {})
        self.definitions: dict[str, SmashElement] = {}

    def _root(self, m: int, pos: int) -> CycNumber:
        if self.n % m:
            raise ConfigError(f"z{m} is not in the ambient field Q(zeta_{self.n})", pos=pos)
        return CycNumber.zeta(self.n, self.n // m)

    def name(self, name: str, pos: int) -> Value:
        d = self.datum
        if name in self.definitions:
            return self.definitions[name]
        if name in self.scalars:
            return self.scalars[name]
        if name == "z":
            return self._root(self.zeta, pos)
        m = re.fullmatch(r"z(\d+)", name)
        if m:
            return self._root(int(m.group(1)), pos)
        m = re.fullmatch(r"([xgq])(\d+)", name)
        if m and d is not None:
            kind, idx = m.groups()
            if kind == "q" and len(idx) == 2:
                i, j = int(idx[0]), int(idx[1])
                if 1 <= i <= d.theta and 1 <= j <= d.theta:
                    return d.q(i, j)
            elif len(idx) == 1 and 1 <= int(idx) <= d.theta:
                i = int(idx)
                if kind == "x":
                    return SmashElement.letter(d, i)
                if kind == "g":
                    return SmashElement.group(d, d.g[i - 1])
        raise ConfigError(f"unknown name {name!r}", pos=pos)

    def evaluate(self, node: Node, top: bool = False) -> Value:
        k, a = node.kind, node.args
        if k == "int":
            return CycNumber.rational(self.n, a[0])
        if k == "name":
            return self.name(a[0], node.pos)
        if k == "group":
            d = self._need_datum(node)
            if len(a) != d.group.rank:
                raise ConfigError(f"group literal needs {d.group.rank} exponents", pos=node.pos)
            return SmashElement.group(d, d.group.element(a))
        if k == "neg":
            return -self._expand(self.evaluate(a[0]), node)
        if k in ("add", "sub"):
            x = self._expand(self.evaluate(a[0]), node)
            y = self._expand(self.evaluate(a[1]), node)
            x, y = self._align(x, y)
            return x + y if k == "add" else x - y
        if k == "mul":
            x = self._expand(self.evaluate(a[0]), node)
            y = self._expand(self.evaluate(a[1]), node)
            if isinstance(x, CycNumber) and isinstance(y, SmashElement):
                return y.scale(x)
            if isinstance(y, CycNumber) and isinstance(x, SmashElement):
                return x.scale(y)
            return x * y
        if k == "div":
            x = self._expand(self.evaluate(a[0]), node)
            y = self._expand(self.evaluate(a[1]), node)
            if not isinstance(y, CycNumber):
                raise ConfigError("can only divide by scalars", pos=node.pos)
            if not y:
                raise ConfigError("division by zero", pos=node.pos)
            return x.scale(y.inverse()) if isinstance(x, SmashElement) else x / y
        if k == "pow":
            base = self.evaluate(a[0])
            e = a[1]
            base = self._expand(base, node)
            if isinstance(base, CycNumber):
                if not base and e < 0:
                    raise ConfigError("zero to a negative power", pos=node.pos)
                return base ** e
            if e < 0:
                if len(base.terms) == 1:
                    (w, g), c = next(iter(base.terms.items()))
                    if w == "":
                        inv = SmashElement.group(base.datum, base.datum.group.inv(g)).scale(c.inverse())
                        return inv ** (-e)
                raise ConfigError("only scalars and group elements have inverses", pos=node.pos)
            if top and len(base.terms) > 1 and e > 2:
                return Power(base, e)
            return base ** e
        if k == "bracket":
            x = self._expand(self.evaluate(a[0]), node)
            y = self._expand(self.evaluate(a[1]), node)
            if not isinstance(x, SmashElement) or not isinstance(y, SmashElement):
                raise ConfigError("bracket arguments must be elements", pos=node.pos)
            if a[2] is not None:
                q = self._expand(self.evaluate(a[2]), node)
                if not isinstance(q, CycNumber):
                    raise ConfigError("bracket coefficient must be a scalar", pos=node.pos)
            else:
                q = self._default_q(x, y, node)
            return q_bracket(x, y, q)
        raise AssertionError(k)

    def _need_datum(self, node: Node) -> YDDatum:
        if self.datum is None:
            raise ConfigError("elements are not available here", pos=node.pos)
        return self.datum

    def _expand(self, v: Value, node: Node) -> Union[CycNumber, SmashElement]:
        if isinstance(v, Power):
            return v.base ** v.exponent
        return v

    def _align(self, x, y):
        if isinstance(x, CycNumber) and isinstance(y, SmashElement):
            return SmashElement.scalar(y.datum, x), y
        if isinstance(y, CycNumber) and isinstance(x, SmashElement):
            return x, SmashElement.scalar(x.datum, y)
        return x, y

    def _default_q(self, x: SmashElement, y: SmashElement, node: Node) -> CycNumber:
        wx, wy = x.weights(), y.weights()
        pure = all(g == self.datum.identity for t in (x, y) for (_w, g) in t.terms)
        if len(wx) != 1 or len(wy) != 1 or not pure:
            raise ConfigError("bracket without coefficient needs homogeneous arguments", pos=node.pos)
        ((gx, _),) = wx
        ((_, cy),) = wy
        return self.datum.evaluate(cy, gx)

    def scalar(self, text: str, path: str) -> CycNumber:
        v = self.element_or_scalar(text, path)
        if not isinstance(v, CycNumber):
            raise ConfigError("expected a scalar", path)
        return v

    def element_or_scalar(self, text: str, path: str, top: bool = False) -> Value:
        try:
            return self.evaluate(parse_expression(text), top=top)
        except ConfigError as err:
            raise ConfigError(str(err), path) from None

    def relation(self, text: str, path: str) -> Relation:
        v = self.element_or_scalar(text, path, top=True)
        if isinstance(v, CycNumber):
            if self.datum is None:
                raise ConfigError("relations need a datum", path)
            v = SmashElement.scalar(self.datum, v)
        return v


# session config ------------------------------------------------------------------------

@dataclass
class SessionConfig:
    """Raw session fields; `resolve()` elaborates them."""

    invariant_factors: Optional[list[int]] = None
    g: Optional[list[list[int]]] = None
    chi: Optional[list[list[int]]] = None
    braiding: Optional[list[list[str]]] = None
    field_order: Optional[int] = None
    zeta: Optional[int] = None
    scalars: dict[str, str] = field(default_factory=dict)
    definitions: dict[str, str] = field(default_factory=dict)
    relations: dict[str, str] = field(default_factory=dict)
    strata: list[list[str]] = field(default_factory=list)
    parameters: dict[str, str] = field(default_factory=dict)
    order: Optional[str] = None
    degree_bound: int = 64
    cache_dir: Optional[str] = None
    output_format: str = "human"
    settings: dict[str, Any] = field(default_factory=dict)

    def resolve(self) -> "Session":
        return resolve(self)


_SCHEMA = {
    "field": {"order", "zeta"},
    "group": {"invariant_factors", "braiding"},
    "generators": {"g", "chi"},
    "scalars": None,
    "definitions": None,
    "relations": None,
    "stratification": {"strata"},
    "parameters": None,
    "session": {"order", "degree_bound", "cache_dir", "format"},
    "settings": None,
}


def _expect(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise ConfigError(message, path)


def _int_matrix(v, path: str) -> list[list[int]]:
    _expect(isinstance(v, list) and all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in v),
            "expected a list of integer lists", path)
    return [list(r) for r in v]


def _str_table(v, path: str) -> dict[str, str]:
    _expect(isinstance(v, dict), "expected a table", path)
    for k, x in v.items():
        _expect(isinstance(x, str), "expected a string", f"{path}.{k}")
    return dict(v)


def parse_config(text: str) -> SessionConfig:
    """Parse TOML session text; unknown keys and dangling names are errors."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as err:
        raise ConfigError(f"syntax error: {err}") from None
    cfg = SessionConfig()
    for key, val in data.items():
        if key not in _SCHEMA:
            raise ConfigError("unknown table", key)
        allowed = _SCHEMA[key]
        _expect(isinstance(val, dict), "expected a table", key)
        if allowed is not None:
            for sub in val:
                if sub not in allowed:
                    raise ConfigError("unknown key", f"{key}.{sub}")
    fld = data.get("field", {})
    if "order" in fld:
        _expect(isinstance(fld["order"], int) and fld["order"] > 0, "expected a positive integer", "field.order")
        cfg.field_order = fld["order"]
    if "zeta" in fld:
        _expect(isinstance(fld["zeta"], int) and fld["zeta"] > 0, "expected a positive integer", "field.zeta")
        cfg.zeta = fld["zeta"]
    grp = data.get("group", {})
    if "invariant_factors" in grp:
        v = grp["invariant_factors"]
        _expect(isinstance(v, list) and all(isinstance(x, int) and x > 0 for x in v), "expected positive integers",
                "group.invariant_factors")
        cfg.invariant_factors = list(v)
    if "braiding" in grp:
        v = grp["braiding"]
        _expect(isinstance(v, list) and all(isinstance(r, list) and all(isinstance(x, str) for x in r) for r in v),
                "expected a matrix of scalar strings", "group.braiding")
        cfg.braiding = [list(r) for r in v]
    _expect(not (cfg.invariant_factors is not None and cfg.braiding is not None),
            "give either invariant_factors or braiding", "group")
    gens = data.get("generators", {})
    if "g" in gens:
        cfg.g = _int_matrix(gens["g"], "generators.g")
    if "chi" in gens:
        cfg.chi = _int_matrix(gens["chi"], "generators.chi")
    cfg.scalars = _str_table(data.get("scalars", {}), "scalars")
    cfg.definitions = _str_table(data.get("definitions", {}), "definitions")
    cfg.relations = _str_table(data.get("relations", {}), "relations")
    cfg.parameters = _str_table(data.get("parameters", {}), "parameters")
    st = data.get("stratification", {}).get("strata", [])
    _expect(isinstance(st, list) and all(isinstance(r, list) and all(isinstance(x, str) for x in r) for r in st),
            "expected a list of name lists", "stratification.strata")
    cfg.strata = [list(r) for r in st]
    sess = data.get("session", {})
    if "order" in sess:
        _expect(isinstance(sess["order"], str), "expected a string such as 'x2>x1'", "session.order")
        cfg.order = sess["order"]
    if "degree_bound" in sess:
        _expect(isinstance(sess["degree_bound"], int) and sess["degree_bound"] > 0, "expected a positive integer",
                "session.degree_bound")
        cfg.degree_bound = sess["degree_bound"]
    if "cache_dir" in sess:
        _expect(isinstance(sess["cache_dir"], str), "expected a path", "session.cache_dir")
        cfg.cache_dir = sess["cache_dir"]
    if "format" in sess:
        _expect(sess["format"] in ("human", "machine"), "expected human or machine", "session.format")
        cfg.output_format = sess["format"]
    cfg.settings = dict(data.get("settings", {}))
    _check_names(cfg)
    return cfg


def _check_names(cfg: SessionConfig) -> None:
    for i, stratum in enumerate(cfg.strata):
        for name in stratum:
            _expect(name in cfg.relations, f"undefined relation {name!r}", f"stratification.strata[{i}]")
    for p, rel in cfg.parameters.items():
        _expect(rel in cfg.relations, f"undefined relation {rel!r}", f"parameters.{p}")
    clash = set(cfg.scalars) & set(cfg.definitions)
    _expect(not clash, f"names defined twice: {sorted(clash)}", "definitions")


# emitter -------------------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _key(k: str) -> str:
    return k if re.fullmatch(r"[A-Za-z0-9_-]+", k) else _q(k)


def _val(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return _q(v)
    if isinstance(v, list):
        return "[" + ", ".join(_val(x) for x in v) + "]"
    raise TypeError(f"cannot emit {type(v).__name__}")


def emit_config(cfg: SessionConfig) -> str:
    """Inverse of parse_config (up to formatting)."""
    out = []

    def table(name, items):
        items = [(k, v) for k, v in items if v is not None]
        if not items:
            return
        out.append(f"[{name}]")
        out.extend(f"{_key(k)} = {_val(v)}" for k, v in items)
        out.append("")

    table("field", [("order", cfg.field_order), ("zeta", cfg.zeta)])
    table("group", [("invariant_factors", cfg.invariant_factors), ("braiding", cfg.braiding)])
    table("generators", [("g", cfg.g), ("chi", cfg.chi)])
    table("scalars", cfg.scalars.items())
    table("definitions", cfg.definitions.items())
    table("relations", cfg.relations.items())
    table("stratification", [("strata", cfg.strata or None)])
    table("parameters", cfg.parameters.items())
    table("session", [
        ("order", cfg.order),
        ("degree_bound", cfg.degree_bound),
        ("cache_dir", cfg.cache_dir),
        ("format", cfg.output_format),
    ])
    table("settings", cfg.settings.items())
    return "\n".join(out)


# resolution --------------------------------------------------------------------------------

@dataclass
class Session:
    config: SessionConfig
    datum: YDDatum
    order: MonomialOrder
    scalars: dict[str, CycNumber]
    definitions: dict[str, SmashElement]
    relations: dict[str, Relation]
    stratification: Optional[Stratification]
    parameter_names: dict[str, str]  # parameter name -> relation name

    @property
    def input_hash(self) -> str:
        return hashlib.sha256(emit_config(self.config).encode()).hexdigest()[:16]


def _all_expression_nodes(cfg: SessionConfig) -> list[tuple[str, Node]]:
    out = []
    for table, entries in (("scalars", cfg.scalars), ("definitions", cfg.definitions), ("relations", cfg.relations)):
        for k, text in entries.items():
            try:
                out.append((f"{table}.{k}", parse_expression(text)))
            except ConfigError as err:
                raise ConfigError(str(err), f"{table}.{k}") from None
    for i, row in enumerate(cfg.braiding or []):
        for j, text in enumerate(row):
            try:
                out.append((f"group.braiding[{i}][{j}]", parse_expression(text)))
            except ConfigError as err:
                raise ConfigError(str(err), f"group.braiding[{i}][{j}]") from None
    return out


def resolve(cfg: SessionConfig, order_override: Optional[str] = None, degree_bound: Optional[int] = None) -> Session:
    nodes = _all_expression_nodes(cfg)
    roots = set()
    bare = False
    for _, node in nodes:
        roots |= root_orders(node)
        bare = bare or uses_bare_z(node)
    n = math.lcm(1, *roots)
    if cfg.zeta:
        n = math.lcm(n, cfg.zeta)
    if cfg.field_order:
        n = math.lcm(n, cfg.field_order)
    if cfg.invariant_factors is not None:
        _expect(cfg.g is not None and cfg.chi is not None, "g and chi are required with invariant_factors", "generators")
        group = AbelianGroup(tuple(cfg.invariant_factors))
        n = math.lcm(n, group.exponent)
        if bare and not cfg.zeta and not roots and not cfg.field_order:
            pass
        try:
            datum = YDDatum(group, [tuple(x) for x in cfg.g], [tuple(x) for x in cfg.chi], order=n)
        except ValueError as err:
            raise ConfigError(str(err), "generators") from None
    elif cfg.braiding is not None:
        _expect(cfg.g is None and cfg.chi is None, "generators are derived from the braiding", "generators")
        # roots of unity in Q(zeta_n) are the 2n-th roots when n is odd
        n = math.lcm(n, 2)
        ev = Evaluator(None, n, cfg.zeta or n)
        q = []
        for i, row in enumerate(cfg.braiding):
            q.append([ev.scalar(text, f"group.braiding[{i}][{j}]") for j, text in enumerate(row)])
        try:
            datum = minimal_realization(q)
        except ValueError as err:
            raise ConfigError(str(err), "group.braiding") from None
        n = datum.order
    else:
        raise ConfigError("need invariant_factors or braiding", "group")
    ev = Evaluator(datum, n, cfg.zeta or n)
    for k, text in cfg.scalars.items():
        ev.scalars[k] = ev.scalar(text, f"scalars.{k}")
    for k, text in cfg.definitions.items():
        v = ev.element_or_scalar(text, f"definitions.{k}")
        if isinstance(v, CycNumber):
            v = SmashElement.scalar(datum, v)
        ev.definitions[k] = v
    rels = {k: ev.relation(text, f"relations.{k}") for k, text in cfg.relations.items()}
    spec = order_override or cfg.order or ">".join(f"x{i}" for i in range(1, datum.theta + 1))
    try:
        order = MonomialOrder.parse(spec, datum.theta)
    except ValueError as err:
        raise ConfigError(str(err), "session.order") from None
    D = degree_bound or cfg.degree_bound
    strat = None
    if cfg.strata:
        try:
            strat = Stratification(datum, [Stratum.of([(nm, rels[nm]) for nm in row]) for row in cfg.strata], order, D)
        except ValueError as err:
            raise ConfigError(str(err), "stratification.strata") from None
    params = dict(cfg.parameters)
    for row in cfg.strata:
        for nm in row:
            if nm not in params.values():
                params[nm] = nm
    return Session(cfg, datum, order, ev.scalars, ev.definitions, rels, strat, params)


def evaluator_for(session: Session) -> Evaluator:
    ev = Evaluator(session.datum, session.datum.order, session.config.zeta or session.datum.order, session.scalars)
    ev.definitions = dict(session.definitions)
    return ev
