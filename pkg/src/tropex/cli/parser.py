"""Text syntax for polynomials, test functions and points, with a canonical printer.

Grammar::

    poly  := term (("+" | "-") term)*
    term  := [coeff] ["t" "^" rat] mono*
    mono  := "z" nat ["^" int]
    coeff := rat | "(" rat [("+" | "-") rat "i"] ")"
    rat   := int ["/" nat]

``t^{p/q}`` is accepted as a spelling of ``t^p/q``. The first term may carry
a sign. Test functions on smooth coordinates use the same grammar without
``t`` and with the extra monomial ``"zbar" nat ["^" nat]`` for conjugates.
Points are written ``z1=<coeff>t^<rat>,z2=...``.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import PolynomialSyntaxError
from ..semiring import ExplodedValue, GaussianRational, format_rational
from ..strata_calculus import SmoothPolynomial
from ..troppoly import ExplodedPolynomial


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = before.count("\n") + 1
        column = pos - (before.rfind("\n") + 1) + 1
        raise PolynomialSyntaxError(message, line, column)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, k: int = 1) -> str:
        self.skip()
        return self.text[self.pos:self.pos + k]

    def at_end(self) -> bool:
        return self.peek() == ""

    def expect(self, s: str):
        if self.peek(len(s)) != s:
            found = self.peek() or "end of input"
            self.error(f"expected {s!r}, found {found!r}")
        self.pos += len(s)

    def nat(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error(f"expected a natural number, found {self.text[start:start + 1] or 'end of input'!r}")
        return int(self.text[start:self.pos])

    def integer(self) -> int:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        return sign * self.nat()

    def rat(self) -> Fraction:
        num = self.integer()
        if self.peek() == "/":
            self.pos += 1
            pos = self.pos
            den = self.nat()
            if den == 0:
                self.error("zero denominator", pos)
            return Fraction(num, den)
        return Fraction(num)

    def coeff(self) -> GaussianRational:
        if self.peek() != "(":
            return GaussianRational(self.rat())
        self.pos += 1
        re = self.rat()
        im = Fraction(0)
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            im = sign * self.rat()
            self.expect("i")
        self.expect(")")
        return GaussianRational(re, im)

    def exponent_of_t(self) -> Fraction:
        self.expect("t")
        self.expect("^")
        if self.peek() == "{":
            self.pos += 1
            value = self.rat()
            self.expect("}")
            return value
        return self.rat()

    def starts_number(self) -> bool:
        c = self.peek(2)
        return bool(c) and (c[0].isdigit() or (c[0] in "+-" and c[1:2].isdigit()))


def _variable_index(sc: _Scanner, m: int | None) -> int:
    pos = sc.pos
    i = sc.nat()
    if i < 1:
        sc.error("variable indices start at 1", pos)
    if m is not None and i > m:
        sc.error(f"variable z{i} exceeds the dimension {m}", pos)
    return i - 1


def _parse_terms(text: str, m: int | None, smooth: bool) -> tuple:
    sc = _Scanner(text)
    raw = []
    sign = 1
    if sc.peek() in ("+", "-") and not sc.starts_number():
        sign = -1 if sc.peek() == "-" else 1
        sc.pos += 1
    while True:
        start = sc.pos
        c = GaussianRational(1)
        explicit = False
        if sc.peek() == "(" or sc.starts_number():
            c = sc.coeff()
            explicit = True
        a = Fraction(0)
        if sc.peek() == "t":
            if smooth:
                sc.error("test functions on smooth coordinates have no t-power")
            a = sc.exponent_of_t()
            explicit = True
        monos = []
        while sc.peek() == "z":
            sc.pos += 1
            conj = False
            if sc.text.startswith("bar", sc.pos):
                if not smooth:
                    sc.error("conjugate variables are only allowed in test functions")
                sc.pos += 3
                conj = True
            i = _variable_index(sc, m)
            k = 1
            if sc.peek() == "^":
                sc.pos += 1
                pos = sc.pos
                k = sc.nat() if smooth else sc.integer()
                if smooth and k < 0:
                    sc.error("negative powers are not allowed in test functions", pos)
            monos.append((i, k, conj))
            explicit = True
        if not explicit:
            sc.skip()
            sc.error(f"expected a term, found {sc.peek() or 'end of input'!r}")
        raw.append((GaussianRational(sign) * c, a, monos, start))
        if sc.at_end():
            break
        op = sc.peek()
        if op not in ("+", "-"):
            sc.error(f"expected '+' or '-', found {op!r}")
        sc.pos += 1
        sign = -1 if op == "-" else 1
    return raw


def _dimension(raw, m: int | None) -> int:
    if m is not None:
        return m
    return max((i + 1 for _, _, monos, _ in raw for i, _, _ in monos), default=0)


def parse_polynomial(text: str, m: int | None = None) -> ExplodedPolynomial:
    """Parse an exploded polynomial.

    Args:
        text: the expression.
        m: number of variables; defaults to the largest index used.

    Raises:
        PolynomialSyntaxError: with the line and column of the problem.
        DuplicateExponentConflict: repeated exponent with different t-powers.
    """
    raw = _parse_terms(text, m, smooth=False)
    m = _dimension(raw, m)
    terms = []
    for c, a, monos, _ in raw:
        alpha = [0] * m
        for i, k, _ in monos:
            alpha[i] += k
        terms.append((c, a, tuple(alpha)))
    return ExplodedPolynomial(m, terms)


def parse_smooth(text: str, nvars: int | None = None) -> SmoothPolynomial:
    """Parse a polynomial in ``z_i`` and ``zbar_i`` (the smooth coordinates and conjugates)."""
    raw = _parse_terms(text, nvars, smooth=True)
    n = _dimension(raw, nvars)
    terms = []
    for c, _, monos, _ in raw:
        e, f = [0] * n, [0] * n
        for i, k, conj in monos:
            (f if conj else e)[i] += k
        terms.append(((tuple(e), tuple(f)), c))
    return SmoothPolynomial(n, terms)


def parse_point(text: str, m: int | None = None) -> tuple:
    """Parse ``z1=<coeff>t^<rat>,...`` into exploded values ordered by index.

    The ``t`` factor may be omitted for exponent zero. Every index from 1 to
    the dimension must appear exactly once.
    """
    sc = _Scanner(text)
    found = {}
    while True:
        sc.expect("z")
        pos = sc.pos
        i = _variable_index(sc, m)
        if i in found:
            sc.error(f"z{i + 1} is given twice", pos)
        sc.expect("=")
        c = sc.coeff()
        x = sc.exponent_of_t() if sc.peek() == "t" else Fraction(0)
        found[i] = ExplodedValue(c, x)
        if sc.at_end():
            break
        sc.expect(",")
    n = m if m is not None else max(found) + 1
    for i in range(n):
        if i not in found:
            sc.error(f"missing coordinate z{i + 1}", len(text))
    return tuple(found[i] for i in range(n))


def parse_vector(text: str) -> tuple:
    """Parse a comma separated list of rationals."""
    sc = _Scanner(text)
    out = [sc.rat()]
    while not sc.at_end():
        sc.expect(",")
        out.append(sc.rat())
    return tuple(out)


# Printing ----------------------------------------------------------------------------------

def _format_coeff(c: GaussianRational, bare: bool) -> tuple:
    """Return ``(negative, text)``; ``text`` is empty for a unit coefficient when ``bare`` is allowed."""
    if c.is_real:
        neg = c.re < 0
        mag = -c.re if neg else c.re
        if mag == 1 and bare:
            return neg, ""
        return neg, format_rational(mag)
    return False, f"({c})"


def _join(pieces) -> str:
    out = []
    for k, (neg, body) in enumerate(pieces):
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) or "0"


def format_polynomial(f: ExplodedPolynomial) -> str:
    """Canonical text of an exploded polynomial; reparses to an equal polynomial."""
    pieces = []
    for t in f.terms:
        has_rest = t.a != 0 or any(t.alpha)
        neg, coeff = _format_coeff(t.c, has_rest)
        parts = [coeff] if coeff else []
        if t.a != 0:
            parts.append(f"t^{format_rational(t.a)}")
        for i, k in enumerate(t.alpha):
            if k:
                parts.append(f"z{i + 1}" + (f"^{k}" if k != 1 else ""))
        pieces.append((neg, " ".join(parts)))
    return _join(pieces)


def format_smooth(f: SmoothPolynomial) -> str:
    """Canonical text of a test function polynomial."""
    pieces = []
    for (e, g), c in f.terms.items():
        has_rest = any(e) or any(g)
        neg, coeff = _format_coeff(c, has_rest)
        parts = [coeff] if coeff else []
        for name, exps in (("z", e), ("zbar", g)):
            for i, k in enumerate(exps):
                if k:
                    parts.append(f"{name}{i + 1}" + (f"^{k}" if k != 1 else ""))
        pieces.append((neg, " ".join(parts)))
    return _join(pieces)


def format_value(v: ExplodedValue) -> str:
    """Text of an exploded value in the point syntax, such as ``(1+1i)t^1/2``."""
    c = v.coeff
    coeff = format_rational(c.re) if c.is_real else f"({c})"
    return f"{coeff}t^{format_rational(v.exponent)}"
