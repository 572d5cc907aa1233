"""Parsing, canonical printing, and JSON forms for the core value types.

The text grammar (l is the deformation parameter, i the imaginary unit):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' nat)?
    atom   := rational | 'i' | 'l' | var | '(' expr ')'

Division appears only inside rational literals (``3/4``), never between
expressions.  Canonical printing emits terms in descending graded-lex order
with ascending powers of l inside each term; ``parse(print(x)) == x`` holds
for every value.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import MixedChart, ParseError, SchemaError, UnknownVariable
from .observables import PhaseSpaceSignature, PolyObservable
from .series import FormalSeries, GaussianRational

# -- canonical printing ---------------------------------------------------------


def rational_text(q: Fraction) -> str:
    return str(q)


def gaussian_text(c: GaussianRational) -> str:
    """Canonical scalar form: ``3``, ``-1/4``, ``i``, ``1/2*i``, ``1 - 2*i``."""
    re_, im = c.re, c.im
    if not im:
        return rational_text(re_)
    if im == 1:
        istr = "i"
    elif im == -1:
        istr = "-i"
    else:
        istr = f"{rational_text(im)}*i"
    if not re_:
        return istr
    if im > 0:
        return f"{rational_text(re_)} + {istr}"
    return f"{rational_text(re_)} - {istr.lstrip('-')}"


def _atom_text(c: GaussianRational, var_factors, leading=False) -> str:
    if not var_factors:
        text = gaussian_text(c)
        if text.startswith("-") and not leading:
            return f"({text})"
        return text
    var_str = "*".join(var_factors)
    if c == GaussianRational(1):
        return var_str
    ctext = gaussian_text(c)
    if c.is_real() and c.re > 0:
        return f"{ctext}*{var_str}"
    return f"({ctext})*{var_str}"


def _power_factor(name, k):
    return name if k == 1 else f"{name}^{k}"


def series_text(s: FormalSeries) -> str:
    parts = []
    for r, c in enumerate(s.coeffs):
        if not c:
            continue
        factors = [] if r == 0 else [_power_factor("l", r)]
        parts.append(_atom_text(c, factors, leading=not parts))
    return " + ".join(parts) if parts else "0"


def observable_text(f: PolyObservable) -> str:
    names = f.signature.variables()
    atoms = []
    for exp, coeff in f.terms.items():
        for r, c in enumerate(coeff.coeffs):
            if c:
                atoms.append((exp, r, c))
    atoms.sort(key=lambda a: (-sum(a[0]), tuple(-e for e in a[0]), a[1]))
    parts = []
    for exp, r, c in atoms:
        factors = [_power_factor(names[k], e)
                   for k, e in enumerate(exp) if e]
        if r:
            factors.append(_power_factor("l", r))
        parts.append(_atom_text(c, factors, leading=not parts))
    return " + ".join(parts) if parts else "0"


def operator_text(op) -> str:
    """Canonical text of a differential operator, e.g. ``(-i*l)*d/dq1 + q1``."""
    names = op.signature.variables()
    items = sorted(op.terms.items(),
                   key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))
    parts = []
    for exp, coeff in items:
        deriv = "*".join(
            (f"d/d{names[k]}" if e == 1 else f"d^{e}/d{names[k]}^{e}")
            for k, e in enumerate(exp) if e)
        ctext = observable_text(coeff)
        if not deriv:
            parts.append(ctext)
        elif ctext == "1":
            parts.append(deriv)
        else:
            parts.append(f"({ctext})*{deriv}")
    return " + ".join(parts) if parts else "0"


# -- tokenizer -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[-+*^()])
""", re.VERBOSE)

_VAR_RE = re.compile(r"(qb|zb|yb|q|p|z)([1-9][0-9]*)$")


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _tokenize(src):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group(0)
        if m.lastgroup == "number":
            if "/" in text:
                num, den = text.split("/")
                if int(den) == 0:
                    raise ParseError("zero denominator", line, col)
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(text))
            tokens.append(_Token("number", value, line, col))
        elif m.lastgroup == "name":
            tokens.append(_Token("name", text, line, col))
        elif m.lastgroup == "op":
            tokens.append(_Token("op", text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(_Token("end", "", line, col))
    return tokens


_CHART_OF_PREFIX = {"q": "real", "p": "real", "z": "holo", "zb": "holo",
                    "yb": "fock"}


def _classify_variables(tokens, n, chart):
    """Infer/validate the chart from variable names; map names to indices."""
    seen_real = seen_holo = seen_fock = False
    for tok in tokens:
        if tok.kind != "name" or tok.value in ("i", "l"):
            continue
        m = _VAR_RE.match(tok.value)
        if not m:
            raise UnknownVariable(f"unknown variable {tok.value!r}",
                                  tok.line, tok.column)
        prefix, idx = m.group(1), int(m.group(2))
        family = _CHART_OF_PREFIX.get(prefix)
        if family is None:
            raise UnknownVariable(f"unknown variable {tok.value!r}",
                                  tok.line, tok.column)
        if idx > n:
            raise UnknownVariable(
                f"variable {tok.value!r} out of range for n={n}",
                tok.line, tok.column)
        if family == "real":
            seen_real = True
        elif family == "holo":
            seen_holo = True
        else:
            seen_fock = True
        if seen_real + seen_holo + seen_fock > 1:
            raise MixedChart("variables from different charts in one "
                             "expression", tok.line, tok.column)
    if chart is None:
        if seen_holo:
            chart = "holo"
        elif seen_fock:
            chart = "fock"
        else:
            chart = "real"
    else:
        want = {"real": seen_holo or seen_fock, "wave": seen_holo or seen_fock,
                "holo": seen_real or seen_fock,
                "fock": seen_real or seen_holo}[chart]
        if want:
            raise MixedChart(f"expression does not fit chart {chart!r}")
    return chart


def _variable_index(signature, name, tok):
    m = _VAR_RE.match(name)
    prefix, idx = m.group(1), int(m.group(2))
    n = signature.n
    chart = signature.chart
    if chart in ("real", "wave"):
        if prefix == "q":
            return idx - 1
        if prefix == "p" and chart == "real":
            return n + idx - 1
    elif chart == "holo":
        if prefix == "z":
            return idx - 1
        if prefix == "zb":
            return n + idx - 1
    elif chart == "fock":
        if prefix == "yb":
            return idx - 1
    raise UnknownVariable(f"variable {name!r} not in chart {chart!r}",
                          tok.line, tok.column)


class _Parser:
    def __init__(self, tokens, signature, order):
        self.tokens = tokens
        self.pos = 0
        self.signature = signature
        self.order = order

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        tok = self.next()
        if tok.kind != "op" or tok.value != op:
            raise ParseError(f"expected {op!r}", tok.line, tok.column)
        return tok

    def parse_expr(self):
        tok = self.peek()
        negate = False
        if tok.kind == "op" and tok.value == "-":
            self.next()
            negate = True
        value = self.parse_term()
        if negate:
            value = -value
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.value in "+-":
                self.next()
                rhs = self.parse_term()
                value = value + rhs if tok.value == "+" else value - rhs
            else:
                return value

    def parse_term(self):
        value = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.value == "*":
                self.next()
                value = value * self.parse_factor()
            else:
                return value

    def parse_factor(self):
        value = self.parse_atom()
        tok = self.peek()
        if tok.kind == "op" and tok.value == "^":
            self.next()
            exp_tok = self.next()
            if exp_tok.kind != "number" or exp_tok.value.denominator != 1 \
                    or exp_tok.value < 0:
                raise ParseError("exponent must be a nonnegative integer",
                                 exp_tok.line, exp_tok.column)
            value = value ** int(exp_tok.value)
        return value

    def parse_atom(self):
        tok = self.next()
        sig, K = self.signature, self.order
        if tok.kind == "number":
            return PolyObservable.constant(
                sig, FormalSeries.from_scalar(GaussianRational(tok.value), K))
        if tok.kind == "name":
            if tok.value == "i":
                return PolyObservable.constant(
                    sig, FormalSeries.from_scalar(GaussianRational(0, 1), K))
            if tok.value == "l":
                return PolyObservable.constant(sig, FormalSeries.lam(1, K))
            index = _variable_index(sig, tok.value, tok)
            return PolyObservable.variable(sig, index, K)
        if tok.kind == "op" and tok.value == "(":
            value = self.parse_expr()
            self.expect_op(")")
            return value
        raise ParseError(f"unexpected token {tok.value!r}", tok.line,
                         tok.column)


def parse(src, n=1, order=None, chart=None) -> PolyObservable:
    """Parse an expression into an observable; the chart is inferred from the
    variables unless given explicitly."""
    from .series import DEFAULT_ORDER
    order = order or DEFAULT_ORDER
    tokens = _tokenize(src)
    chart = _classify_variables(tokens, n, chart)
    signature = PhaseSpaceSignature(n, chart)
    parser = _Parser(tokens, signature, order)
    value = parser.parse_expr()
    end = parser.next()
    if end.kind != "end":
        raise ParseError(f"trailing input {end.value!r}", end.line, end.column)
    return value


def parse_series(src, order=None) -> FormalSeries:
    """Parse a scalar expression (rationals, i, l only) into a series."""
    tokens = _tokenize(src)
    for tok in tokens:
        if tok.kind == "name" and tok.value not in ("i", "l"):
            raise ParseError(f"variable {tok.value!r} not allowed in a scalar",
                             tok.line, tok.column)
    obs = parse(src, 1, order, "real")
    constant = (0, 0)
    total = FormalSeries.zero(obs.order)
    for exp, coeff in obs.terms.items():
        if exp != constant:
            raise ParseError("expression is not a scalar")
        total = total + coeff
    return total


# -- JSON forms -------------------------------------------------------------------

SCHEMA_VERSION = 1


def _require(cond, message, pointer):
    if not cond:
        raise SchemaError(message, pointer)


def gaussian_to_json(c: GaussianRational):
    return [c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator]


def gaussian_from_json(obj, pointer=""):
    _require(isinstance(obj, list) and len(obj) == 4, "expected [re_num, "
             "re_den, im_num, im_den]", pointer)
    for k, v in enumerate(obj):
        _require(isinstance(v, int), "expected integer", f"{pointer}/{k}")
    _require(obj[1] > 0 and obj[3] > 0, "denominators must be positive",
             pointer)
    return GaussianRational(Fraction(obj[0], obj[1]), Fraction(obj[2], obj[3]))


def series_to_json(s: FormalSeries):
    return {"K": s.order, "coeffs": [gaussian_to_json(c) for c in s.coeffs]}


def series_from_json(obj, pointer="", expect_order=None):
    _require(isinstance(obj, dict), "expected series object", pointer)
    _require("K" in obj and "coeffs" in obj, "series needs K and coeffs",
             pointer)
    K = obj["K"]
    _require(isinstance(K, int) and K >= 1, "K must be a positive integer",
             f"{pointer}/K")
    if expect_order is not None:
        _require(K == expect_order,
                 f"truncation order {K} does not match expected "
                 f"{expect_order}", f"{pointer}/K")
    coeffs = obj["coeffs"]
    _require(isinstance(coeffs, list) and len(coeffs) == K,
             "coeffs must list exactly K entries", f"{pointer}/coeffs")
    return FormalSeries(
        tuple(gaussian_from_json(c, f"{pointer}/coeffs/{k}")
              for k, c in enumerate(coeffs)), K)


def observable_to_json(f: PolyObservable):
    terms = sorted(f.terms.items(),
                   key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))
    return {
        "schema_version": SCHEMA_VERSION,
        "n": f.signature.n,
        "chart": f.signature.chart,
        "terms": [{"exp": list(exp), "coeff": series_to_json(c)}
                  for exp, c in terms],
    }


def observable_from_json(obj, pointer=""):
    _require(isinstance(obj, dict), "expected observable object", pointer)
    _require("n" in obj and "terms" in obj, "observable needs n and terms",
             pointer)
    n = obj["n"]
    _require(isinstance(n, int) and n >= 1, "n must be a positive integer",
             f"{pointer}/n")
    chart = obj.get("chart", "real")
    _require(chart in ("real", "holo", "fock", "wave"),
             f"unknown chart {chart!r}", f"{pointer}/chart")
    sig = PhaseSpaceSignature(n, chart)
    terms = {}
    order = None
    for k, item in enumerate(obj["terms"]):
        tp = f"{pointer}/terms/{k}"
        _require(isinstance(item, dict) and "exp" in item and "coeff" in item,
                 "term needs exp and coeff", tp)
        exp = item["exp"]
        _require(isinstance(exp, list) and len(exp) == sig.width
                 and all(isinstance(e, int) and e >= 0 for e in exp),
                 f"exp must be {sig.width} nonnegative integers", f"{tp}/exp")
        coeff = series_from_json(item["coeff"], f"{tp}/coeff", order)
        order = coeff.order
        terms[tuple(exp)] = coeff
    return PolyObservable(sig, terms, order)


def serialize(x):
    """Tagged JSON form for any core value; inverse of deserialize."""
    from .functionals import Functional
    from .star import EquivOperatorSpec, StarProductSpec

    if isinstance(x, Functional):
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "functional",
            "n": x.signature.n,
            "chart": x.signature.chart,
            "point": [gaussian_to_json(c) for c in x.base_point],
            "pre_operator": serialize(x.pre_operator)
                            if x.pre_operator is not None else None,
        }
    if isinstance(x, FormalSeries):
        payload = series_to_json(x)
        payload.update({"schema_version": SCHEMA_VERSION, "type": "series"})
        return payload
    if isinstance(x, PolyObservable):
        payload = observable_to_json(x)
        payload["type"] = "observable"
        return payload
    if isinstance(x, StarProductSpec):
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "star_product",
            "kind": x.name if x.name in ("weyl", "wick", "std") else "custom",
            "n": x.signature.n,
            "chart": x.signature.chart,
            "K": x.order,
            "pairing": [[series_to_json(e) for e in row] for row in x.pairing],
        }
    if isinstance(x, EquivOperatorSpec):
        gens = sorted(x.generator.items(),
                      key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "equiv_operator",
            "n": x.signature.n,
            "chart": x.signature.chart,
            "K": x.order,
            "name": x.name,
            "generator": [{"exp": list(e), "coeff": series_to_json(c)}
                          for e, c in gens],
        }
    if hasattr(x, "to_json"):
        return x.to_json()
    raise SchemaError(f"cannot serialize {type(x).__name__}")


def deserialize(obj, pointer=""):
    from .star import EquivOperatorSpec, StarProductSpec, builtin_spec

    _require(isinstance(obj, dict), "expected a JSON object", pointer)
    _require("type" in obj, "missing type tag", pointer)
    kind = obj["type"]
    if kind == "series":
        return series_from_json(obj, pointer)
    if kind == "observable":
        return observable_from_json(obj, pointer)
    if kind == "star_product":
        _require("n" in obj and isinstance(obj["n"], int), "missing n",
                 f"{pointer}/n")
        if obj.get("kind") in ("weyl", "wick", "std"):
            spec = builtin_spec(obj["kind"], obj["n"], obj.get("K"))
            return spec
        chart = obj.get("chart", "real")
        sig = PhaseSpaceSignature(obj["n"], chart)
        pairing_json = obj.get("pairing")
        _require(isinstance(pairing_json, list), "custom spec needs pairing",
                 f"{pointer}/pairing")
        pairing = [[series_from_json(e, f"{pointer}/pairing/{r}/{c}")
                    for c, e in enumerate(row)]
                   for r, row in enumerate(pairing_json)]
        return StarProductSpec(sig, pairing, obj.get("K"))
    if kind == "equiv_operator":
        sig = PhaseSpaceSignature(obj["n"], obj.get("chart", "real"))
        gen = {}
        for k, item in enumerate(obj.get("generator", [])):
            tp = f"{pointer}/generator/{k}"
            _require(isinstance(item, dict) and "exp" in item
                     and "coeff" in item, "generator term needs exp and coeff",
                     tp)
            gen[tuple(item["exp"])] = series_from_json(item["coeff"],
                                                       f"{tp}/coeff")
        return EquivOperatorSpec(sig, gen, obj.get("K"),
                                 name=obj.get("name", "custom"))
    if kind == "functional":
        from .functionals import Functional
        _require("n" in obj and "point" in obj, "functional needs n and point",
                 pointer)
        sig = PhaseSpaceSignature(obj["n"], obj.get("chart", "real"))
        point = [gaussian_from_json(c, f"{pointer}/point/{k}")
                 for k, c in enumerate(obj["point"])]
        pre = obj.get("pre_operator")
        op = deserialize(pre, f"{pointer}/pre_operator") if pre else None
        return Functional(sig, point, op)
    if kind == "matrix":
        from .matrices import matrix_from_json
        return matrix_from_json(obj, pointer)
    if kind == "gns_result":
        from .reps import gns_result_from_json
        return gns_result_from_json(obj, pointer)
    raise SchemaError(f"unknown type tag {kind!r}", f"{pointer}/type")
