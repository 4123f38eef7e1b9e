"""Exact arithmetic in finitely generated graded-commutative algebras.

Monomials are exponent vectors over a fixed, ordered generator list; every
polynomial is kept in canonical form (no zero coefficients, Koszul signs
resolved at multiplication time).  Coefficients are `fractions.Fraction`
in characteristic 0 and canonical residues 0..p-1 in characteristic p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional


class StructuralError(ValueError):
    """Operands belong to different generator tables or fields."""


class ContractViolation(ValueError):
    """An operation precondition (homogeneity, op/degree match) failed."""


class HypothesisViolation(ValueError):
    """A named mathematical hypothesis of an operation does not hold."""


class UnsupportedPresentation(ValueError):
    """Partial relation data appears where explicit data is required."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals (characteristic 0) or F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"characteristic must be 0 or a prime, got {self.characteristic}")

    @property
    def kind(self) -> str:
        return "rational" if self.characteristic == 0 else "prime-field"

    def normalize(self, c):
        if self.characteristic == 0:
            return Fraction(c)
        return int(c) % self.characteristic

    def inv(self, c):
        if self.characteristic == 0:
            return Fraction(1) / Fraction(c)
        return pow(int(c), self.characteristic - 2, self.characteristic)

    def parse(self, text: str):
        return self.normalize(Fraction(text))

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"


QQ = FieldSpec(0)
F2 = FieldSpec(2)
F5 = FieldSpec(5)


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    squares_to_zero: bool = False

    def __post_init__(self) -> None:
        if self.degree <= 0:
            raise ValueError(f"generator degree must be positive, got {self.degree}")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", self.name):
            raise ValueError(f"bad generator name {self.name!r}")

    @property
    def parity(self) -> str:
        return "odd" if self.degree % 2 else "even"


class Algebra:
    """Free graded-commutative algebra on an ordered generator list."""

    def __init__(self, field: FieldSpec, generators: Iterable[Generator]):
        gens = tuple(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise StructuralError("generator names must be distinct")
        if field.characteristic != 2:
            for g in gens:
                if g.degree % 2 == 1 and not g.squares_to_zero:
                    raise StructuralError(
                        f"odd generator {g.name} must square to zero over {field}"
                    )
        self.field = field
        self.generators = gens
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.degrees = tuple(g.degree for g in gens)
        self.odd = tuple(g.degree % 2 == 1 for g in gens)
        self.sqz = tuple(g.squares_to_zero for g in gens)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Algebra)
            and self.field == other.field
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.field, self.generators))

    def monomial_degree(self, exps: tuple) -> int:
        return sum(e * d for e, d in zip(exps, self.degrees))

    def zero(self) -> "Poly":
        return Poly(self, {})

    def unit(self) -> "Poly":
        return Poly(self, {(0,) * len(self.generators): self.field.normalize(1)})

    def gen(self, name: str) -> "Poly":
        i = self.index[name]
        exps = tuple(1 if j == i else 0 for j in range(len(self.generators)))
        return Poly(self, {exps: self.field.normalize(1)})

    def monomial(self, exps: tuple, coeff=1) -> "Poly":
        return self.poly({tuple(exps): coeff})

    def poly(self, terms: dict) -> "Poly":
        out = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.generators):
                raise StructuralError("exponent vector length mismatch")
            if any(e < 0 for e in exps):
                raise StructuralError("negative exponent")
            for i, e in enumerate(exps):
                if e >= 2 and self.sqz[i]:
                    raise StructuralError(
                        f"generator {self.generators[i].name} squares to zero; exponent {e} invalid"
                    )
            c = self.field.normalize(coeff)
            if c:
                out[exps] = self.field.normalize(out.get(exps, 0) + c) if exps in out else c
        return Poly(self, {e: c for e, c in out.items() if c})

    def monomials_of_degree(self, degree: int) -> list:
        """All canonical-form monomials of the given degree, lexicographically sorted."""
        n = len(self.generators)
        out = []

        def rec(i: int, remaining: int, acc: tuple):
            if remaining == 0:
                out.append(acc + (0,) * (n - i))
                return
            if i == n:
                return
            d = self.degrees[i]
            cap = 1 if self.sqz[i] else remaining // d
            for e in range(cap + 1):
                if e * d <= remaining:
                    rec(i + 1, remaining - e * d, acc + (e,))

        rec(0, degree, ())
        return sorted(out)


class Poly:
    """A graded-commutative polynomial in canonical form."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.algebra == other.algebra
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __neg__(self) -> "Poly":
        f = self.algebra.field
        return Poly(self.algebra, {e: f.normalize(-c) for e, c in self.terms.items()})

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        if self.algebra != other.algebra:
            raise StructuralError("polynomials over different generator tables")
        f = self.algebra.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = f.normalize(out.get(e, 0) + c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.algebra, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        f = self.algebra.field
        c = f.normalize(c)
        if not c:
            return self.algebra.zero()
        return Poly(self.algebra, {e: f.normalize(k * c) for e, k in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def degrees(self) -> set:
        return {self.algebra.monomial_degree(e) for e in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_degree(self) -> Optional[int]:
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ContractViolation("polynomial is not homogeneous")
        return ds.pop()

    def degree_component(self, degree: int) -> "Poly":
        return Poly(
            self.algebra,
            {e: c for e, c in self.terms.items() if self.algebra.monomial_degree(e) == degree},
        )

    def coefficient(self, exps: tuple):
        return self.terms.get(tuple(exps), self.algebra.field.normalize(0))

    def word_lengths(self) -> set:
        return {sum(e) for e in self.terms}

    def __repr__(self) -> str:
        return poly_to_text(self)


def mul(a: Poly, b: Poly) -> Poly:
    """Graded-commutative product with Koszul signs and square annihilation."""
    if a.algebra != b.algebra:
        raise StructuralError("operands over different generator tables")
    alg = a.algebra
    f = alg.field
    n = len(alg.generators)
    out: dict = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            exps = tuple(x + y for x, y in zip(ea, eb))
            dead = False
            for i in range(n):
                if exps[i] >= 2 and alg.sqz[i]:
                    dead = True
                    break
            if dead:
                continue
            crossings = 0
            for i in range(n):
                if alg.odd[i] and eb[i]:
                    for j in range(i + 1, n):
                        if alg.odd[j] and ea[j]:
                            crossings += eb[i] * ea[j]
            c = ca * cb
            if crossings % 2:
                c = -c
            s = f.normalize(out.get(exps, 0) + c)
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
    return Poly(alg, out)


def is_decomposable(p: Poly) -> bool:
    """True iff every monomial has word length >= 2 (input must be homogeneous)."""
    if p.is_zero:
        return True
    if not p.is_homogeneous:
        raise ContractViolation("is_decomposable requires a homogeneous polynomial")
    return all(sum(e) >= 2 for e in p.terms)


@dataclass(frozen=True)
class Relation:
    """A homogeneous relation: fully explicit, or partial (certified terms only)."""

    degree: int
    kind: str  # "explicit" | "partial"
    terms: Poly  # full body, or the certified part of a partial body
    decomposable_asserted: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("explicit", "partial"):
            raise ValueError(f"bad relation kind {self.kind!r}")
        if self.terms:
            for e in self.terms.terms:
                if self.terms.algebra.monomial_degree(e) != self.degree:
                    raise ContractViolation(
                        f"relation term of degree {self.terms.algebra.monomial_degree(e)} "
                        f"in a degree-{self.degree} relation"
                    )

    @property
    def explicit(self) -> bool:
        return self.kind == "explicit"


def quadratic_terms(rel: Relation) -> list:
    """Word-length-2 monomials of a relation body as ((Generator, Generator), coeff)."""
    alg = rel.terms.algebra
    out = []
    for exps, coeff in rel.terms.terms.items():
        if sum(exps) != 2:
            continue
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        out.append(((alg.generators[idx[0]], alg.generators[idx[1]]), coeff))
    out.sort(key=lambda t: (alg.index[t[0][0].name], alg.index[t[0][1].name]))
    return out


@dataclass(frozen=True)
class Presentation:
    algebra: Algebra
    relations: tuple = ()
    formal_dimension: Optional[int] = None

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @property
    def generators(self) -> tuple:
        return self.algebra.generators

    @property
    def all_explicit(self) -> bool:
        return all(r.explicit for r in self.relations)


def _rank(rows: list, field: FieldSpec) -> int:
    """Rank of a list of coefficient vectors, by exact Gaussian elimination."""
    pivots: dict = {}  # column -> reduced row
    rank = 0
    for row in rows:
        row = list(row)
        for col in sorted(pivots):
            c = row[col]
            if c:
                prow = pivots[col]
                for j in range(len(row)):
                    row[j] = field.normalize(row[j] - c * prow[j])
        lead = next((j for j, c in enumerate(row) if c), None)
        if lead is None:
            continue
        inv = field.inv(row[lead])
        pivots[lead] = [field.normalize(c * inv) for c in row]
        rank += 1
    return rank


def _ideal_rows(pres: Presentation, degree: int, basis_index: dict) -> list:
    alg = pres.algebra
    zero = alg.field.normalize(0)
    rows = []
    for rel in pres.relations:
        if rel.degree > degree:
            continue
        for m in alg.monomials_of_degree(degree - rel.degree):
            prod = alg.monomial(m) * rel.terms
            if prod.is_zero:
                continue
            row = [zero] * len(basis_index)
            for e, c in prod.terms.items():
                row[basis_index[e]] = c
            rows.append(row)
    return rows


def hilbert_function(pres: Presentation, up_to: int) -> tuple:
    """Dimension of each graded piece of the quotient, degrees 0..up_to.

    Exact degreewise linear algebra: the degree-d basis is the set of canonical
    monomials of degree d, and the ideal slice is spanned by all products
    m * rho with deg(m * rho) = d.
    """
    if not pres.all_explicit:
        raise UnsupportedPresentation("hilbert_function requires explicit relations")
    dims = []
    for d in range(up_to + 1):
        basis = pres.algebra.monomials_of_degree(d)
        index = {m: i for i, m in enumerate(basis)}
        rows = _ideal_rows(pres, d, index)
        dims.append(len(basis) - _rank(rows, pres.field))
    return tuple(dims)


def graded_dimension(pres: Presentation, degree: int) -> int:
    """Dimension of a single graded piece of the quotient."""
    if not pres.all_explicit:
        raise UnsupportedPresentation("graded dimension requires explicit relations")
    basis = pres.algebra.monomials_of_degree(degree)
    index = {m: i for i, m in enumerate(basis)}
    return len(basis) - _rank(_ideal_rows(pres, degree, index), pres.field)


def indecomposable_dimension(pres: Presentation, degree: int) -> int:
    """dim of (positive part)/(decomposables) in one degree, from the presentation."""
    if not pres.all_explicit:
        raise UnsupportedPresentation("indecomposable quotient requires explicit relations")
    if degree <= 0:
        return 0
    alg = pres.algebra
    basis = alg.monomials_of_degree(degree)
    index = {m: i for i, m in enumerate(basis)}
    rows = _ideal_rows(pres, degree, index)
    zero = alg.field.normalize(0)
    one = alg.field.normalize(1)
    for m in basis:
        if sum(m) >= 2:
            row = [zero] * len(basis)
            row[index[m]] = one
            rows.append(row)
    return len(basis) - _rank(rows, pres.field)


def _series_quotient(rel_degrees: list, gen_degrees: list, up_to: int) -> list:
    """Coefficients of prod(1 - t^r) / prod(1 - t^d) up to degree up_to."""
    coeffs = [0] * (up_to + 1)
    coeffs[0] = 1
    for r in rel_degrees:
        nxt = list(coeffs)
        for k in range(r, up_to + 1):
            nxt[k] -= coeffs[k - r]
        coeffs = nxt
    for d in gen_degrees:
        for k in range(d, up_to + 1):
            coeffs[k] += coeffs[k - d]
    return coeffs


def is_complete_intersection(pres: Presentation) -> bool:
    """Whether the relations cut the dimensions predicted by the series formula.

    Compares hilbert_function with prod(1 - t^{|rho_i|}) / prod(1 - t^{|x_j|})
    up to the formal dimension D = sum(|rho_i| - |x_j|) and checks vanishing in
    a window above D wide enough to force vanishing in all higher degrees.
    """
    for g in pres.generators:
        if g.degree % 2 == 1:
            raise HypothesisViolation("odd generator present; series formula requires even generators")
    for rel in pres.relations:
        if not rel.explicit:
            raise HypothesisViolation("partial relation present; complete-intersection check needs explicit bodies")
        if not is_decomposable(rel.terms):
            raise HypothesisViolation(f"relation of degree {rel.degree} is not decomposable")
    if len(pres.relations) != len(pres.generators):
        raise HypothesisViolation(
            f"relation count {len(pres.relations)} != generator count {len(pres.generators)}"
        )
    rel_degrees = [r.degree for r in pres.relations]
    gen_degrees = [g.degree for g in pres.generators]
    # cap at the recorded formal dimension when present, else the series degree
    D = sum(rel_degrees) - sum(gen_degrees)
    if pres.formal_dimension is not None:
        D = pres.formal_dimension
    if D < 0:
        return False
    window = max(gen_degrees, default=0)
    series = _series_quotient(rel_degrees, gen_degrees, D)
    dims = hilbert_function(pres, D + window)
    if list(dims[: D + 1]) != series:
        return False
    return all(x == 0 for x in dims[D + 1 :])


# ---------------------------------------------------------------------------
# canonical text form


def _coeff_text(c) -> str:
    return str(c)


def monomial_text(alg: Algebra, exps: tuple) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 0:
            continue
        name = alg.generators[i].name
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def poly_to_text(p: Poly) -> str:
    if p.is_zero:
        return "0"
    alg = p.algebra
    items = sorted(p.terms.items(), key=lambda t: (alg.monomial_degree(t[0]), t[0]))
    pieces = []
    for exps, coeff in items:
        mono = monomial_text(alg, exps)
        neg = alg.field.characteristic == 0 and coeff < 0
        mag = -coeff if neg else coeff
        if mono == "1":
            body = _coeff_text(mag)
        elif mag == alg.field.normalize(1):
            body = mono
        else:
            body = f"{_coeff_text(mag)}*{mono}"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


_TOKEN = re.compile(r"\s*([+\-*^()]|[0-9]+/[0-9]+|[0-9]+|[A-Za-z_][A-Za-z_0-9]*)")


def parse_poly(text: str, alg: Algebra) -> Poly:
    """Parse the canonical text form (sums of coeff*gen^e*... terms)."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad polynomial text at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        raise ValueError("empty polynomial text")
    result = alg.zero()
    i = 0
    n = len(alg.generators)

    def parse_term(i: int):
        coeff = Fraction(1)
        exps = [0] * n
        expect_factor = True
        while i < len(tokens):
            tok = tokens[i]
            if tok in "+-" and not expect_factor:
                break
            if tok == "*":
                i += 1
                expect_factor = True
                continue
            if re.fullmatch(r"[0-9]+(/[0-9]+)?", tok):
                coeff *= Fraction(tok)
                i += 1
                expect_factor = False
                continue
            if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok):
                if tok not in alg.index:
                    raise ValueError(f"unknown generator {tok!r}")
                e = 1
                i += 1
                if i < len(tokens) and tokens[i] == "^":
                    e = int(tokens[i + 1])
                    i += 2
                exps[alg.index[tok]] += e
                expect_factor = False
                continue
            raise ValueError(f"unexpected token {tok!r}")
        return i, coeff, tuple(exps)

    sign = 1
    while i < len(tokens):
        tok = tokens[i]
        if tok == "+":
            sign = 1
            i += 1
            continue
        if tok == "-":
            sign = -1
            i += 1
            continue
        i, coeff, exps = parse_term(i)
        if exps == (0,) * n and coeff == 0:
            sign = 1
            continue
        result = result + alg.monomial(exps, sign * coeff)
        sign = 1
    return result


# ---------------------------------------------------------------------------
# presentation serialization (one record per line; see README for the grammar)


def print_presentation(pres: Presentation) -> str:
    f = pres.field
    lines = []
    if f.characteristic == 0:
        lines.append("field rational")
    else:
        lines.append(f"field prime {f.characteristic}")
    if pres.formal_dimension is not None:
        lines.append(f"formal-dimension {pres.formal_dimension}")
    for g in pres.generators:
        line = f"generator {g.name} {g.degree}"
        if g.squares_to_zero:
            line += " squares-to-zero"
        lines.append(line)
    for rel in pres.relations:
        head = f"relation {rel.degree} {rel.kind}"
        if rel.kind == "partial" and rel.decomposable_asserted:
            head += " decomposable"
        lines.append(head)
        for exps, coeff in sorted(rel.terms.terms.items()):
            lines.append("term " + _coeff_text(coeff) + " " + " ".join(str(e) for e in exps))
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    field: Optional[FieldSpec] = None
    formal_dimension: Optional[int] = None
    gens: list = []
    rel_specs: list = []  # (degree, kind, asserted, [(coeff_text, exps)])
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "field":
                if words[1] == "rational":
                    field = FieldSpec(0)
                elif words[1] == "prime":
                    field = FieldSpec(int(words[2]))
                else:
                    raise ValueError(f"bad field kind {words[1]!r}")
            elif words[0] == "formal-dimension":
                formal_dimension = int(words[1])
            elif words[0] == "generator":
                sqz = "squares-to-zero" in words[3:]
                gens.append(Generator(words[1], int(words[2]), sqz))
            elif words[0] == "relation":
                kind = words[2]
                asserted = "decomposable" in words[3:]
                rel_specs.append((int(words[1]), kind, asserted, []))
            elif words[0] == "term":
                if not rel_specs:
                    raise ValueError("term before any relation")
                rel_specs[-1][3].append((words[1], tuple(int(w) for w in words[2:])))
            elif words[0] == "end":
                break
            else:
                raise ValueError(f"unknown record {words[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"presentation line {lineno}: {exc}") from exc
    if field is None:
        raise ValueError("presentation missing field record")
    alg = Algebra(field, gens)
    relations = []
    for degree, kind, asserted, terms in rel_specs:
        body = alg.zero()
        for coeff_text, exps in terms:
            body = body + alg.monomial(exps, field.parse(coeff_text))
        relations.append(Relation(degree, kind, body, decomposable_asserted=asserted))
    return Presentation(alg, tuple(relations), formal_dimension)
