"""Certificates, the odd-generator projective-plane criterion, and conclusions.

Every check produces either a Certificate (with a transcript of verified
preconditions) or a Refusal naming exactly one failed hypothesis.  A refusal
is never evidence of homotopy commutativity; criteria here are one-sided.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gradedalg import ContractViolation, Presentation

MACHINE = "machine-verified"
ASSERTED = "literature-asserted"

RATIONAL = "Rational"
STEENROD = "Steenrod"
PROJECTIVE = "PartialProjectivePlane"
RECORDED = "RecordedExternal"


class DataIncomplete(ValueError):
    """Catalog data required by a check is missing."""


@dataclass(frozen=True)
class TranscriptEntry:
    status: str  # MACHINE | ASSERTED
    outcome: str  # "pass" | "fail" | "info"
    description: str
    citation: str = ""

    def render(self) -> str:
        cite = f" ({self.citation})" if self.citation else ""
        return f"[{self.status}] {self.outcome}: {self.description}{cite}"


@dataclass(frozen=True)
class Certificate:
    space: str
    criterion: str  # RATIONAL | STEENROD | PROJECTIVE | RECORDED
    witness: tuple  # ordered (key, value) pairs
    transcript: tuple  # TranscriptEntry, ...

    def __post_init__(self):
        for e in self.transcript:
            if e.status not in (MACHINE, ASSERTED):
                raise ValueError(f"bad transcript status {e.status!r}")
        if self.criterion != RECORDED and not any(
            e.status == MACHINE for e in self.transcript
        ):
            raise ValueError("non-recorded certificates need a machine-verified entry")

    def witness_text(self) -> str:
        return "; ".join(f"{k}={v}" for k, v in self.witness)


@dataclass(frozen=True)
class Refusal:
    space: str
    criterion: str
    failed: str  # the one failed hypothesis
    transcript: tuple = ()
    exception_note: str = ""


@dataclass(frozen=True)
class Conclusion:
    space: str
    statement: str
    certificate: Certificate


def conclude_noncommutative(cert) -> Conclusion:
    """Non-trivial Whitehead product => loop space not homotopy commutative."""
    if not isinstance(cert, Certificate):
        raise ContractViolation("conclude_noncommutative requires a certificate, not a refusal")
    step = TranscriptEntry(
        ASSERTED,
        "pass",
        "a non-trivial Whitehead product adjoins to a non-trivial Samelson product in the loop space, "
        "so the loop space multiplication is not homotopy commutative",
        citation="Whitehead-Samelson adjunction",
    )
    enriched = Certificate(cert.space, cert.criterion, cert.witness, cert.transcript + (step,))
    return Conclusion(
        space=cert.space,
        statement=f"Omega({cert.space}) is not homotopy commutative",
        certificate=enriched,
    )


# ---------------------------------------------------------------------------
# total Steenrod square tables on odd-generated mod-2 rings


@dataclass(frozen=True)
class ExteriorActionData:
    """A mod-2 presentation together with a total-Sq table on its generators."""

    presentation: Presentation
    sq_table: dict  # generator name -> Poly (total square)
    citation: str = ""

    def __post_init__(self):
        if self.presentation.field.characteristic != 2:
            raise ContractViolation("total-Sq tables live over F2")


@dataclass(frozen=True)
class GeneratingMapWitness:
    """A recorded generating map from a suspension onto the indecomposables."""

    source: str  # e.g. "Sigma HP^2"
    base: str  # the B with source = Sigma B
    target: str
    cell_degrees: tuple
    citation: str
    is_suspension: bool = True

    def __post_init__(self):
        if not self.is_suspension:
            raise ContractViolation("generating-map witnesses require a suspension source")


def validate_sq_action(data: ExteriorActionData) -> list:
    """Instability and unit checks on a total-Sq table; violations are data."""
    violations = []
    alg = data.presentation.algebra
    for g in data.presentation.generators:
        total = data.sq_table.get(g.name)
        if total is None:
            violations.append(f"no table entry for {g.name}")
            continue
        if total.degree_component(g.degree) != alg.gen(g.name):
            violations.append(f"Sq^0 component of Sq {g.name} is not {g.name}")
        for d in sorted(total.degrees()):
            if d < g.degree or d > 2 * g.degree:
                violations.append(
                    f"Sq {g.name} has a component of degree {d} outside {g.degree}..{2 * g.degree}"
                )
        square = alg.gen(g.name) * alg.gen(g.name)
        if total.degree_component(2 * g.degree) != square:
            violations.append(
                f"top component of Sq {g.name} differs from {g.name}^2"
            )
    return violations


def check_sq_linearity(data: ExteriorActionData) -> bool:
    """Whether every table value is a linear combination of generators."""
    return all(
        all(wl <= 1 for wl in poly.word_lengths())
        for poly in data.sq_table.values()
    )


def _is_power_of_two_minus_one(d: int) -> bool:
    return d >= 1 and ((d + 1) & d) == 0


def check_partial_projective_criterion(
    data: ExteriorActionData, g: GeneratingMapWitness
):
    """Certify [g,g] != 0 for a generating map out of a suspension.

    Hypotheses: odd generators only, linear total squares, suspension source,
    and minimal generator degree not of the form 2^k - 1.
    """
    space = g.target
    transcript = []
    gens = data.presentation.generators

    def refuse(why: str) -> Refusal:
        return Refusal(space, PROJECTIVE, why, tuple(transcript))

    violations = validate_sq_action(data)
    if violations:
        return refuse(f"invalid total-square table: {violations[0]}")
    transcript.append(
        TranscriptEntry(MACHINE, "pass", "total-square table is unital, instability-bounded, and square-consistent")
    )

    if not gens:
        return refuse("presentation has no generators")

    odd = [g_.degree % 2 == 1 for g_ in gens]
    if not all(odd):
        bad = gens[odd.index(False)]
        return refuse(f"generator {bad.name} has even degree {bad.degree}")
    transcript.append(
        TranscriptEntry(MACHINE, "pass", "all generators have odd degree")
    )

    if not check_sq_linearity(data):
        return refuse("a total square has a decomposable component")
    transcript.append(
        TranscriptEntry(
            MACHINE,
            "pass",
            "every total square is a linear combination of the generators",
            citation=data.citation,
        )
    )

    if sorted(g.cell_degrees) != sorted(g_.degree for g_ in gens):
        return refuse("generating map record inconsistent with generator degrees")
    transcript.append(
        TranscriptEntry(
            MACHINE,
            "pass",
            f"source cell degrees {tuple(sorted(g.cell_degrees))} match the indecomposables",
        )
    )
    transcript.append(
        TranscriptEntry(
            ASSERTED,
            "pass",
            f"{g.source} -> {g.target} is a generating map from a suspension of {g.base}",
            citation=g.citation,
        )
    )

    mindeg = min(g_.degree for g_ in gens)
    if _is_power_of_two_minus_one(mindeg):
        return refuse(f"minimal generator degree {mindeg} = 2^k - 1")
    transcript.append(
        TranscriptEntry(
            MACHINE,
            "pass",
            f"minimal generator degree {mindeg} is not of the form 2^k - 1",
        )
    )
    transcript.append(
        TranscriptEntry(
            ASSERTED,
            "pass",
            "a trivial [g,g] would extend g+g over the product and force a square-closed "
            "truncated polynomial ring on a class of non-2-power degree, which is impossible",
            citation="Toda: truncated polynomial rings admitting total squares; partial projective plane of the extension",
        )
    )
    witness = (
        ("kind", "self Whitehead product of a generating map"),
        ("map", f"{g.source} -> {g.target}"),
        ("min_degree", str(mindeg)),
        ("generators", ", ".join(g_.name for g_ in gens)),
    )
    return Certificate(space, PROJECTIVE, witness, tuple(transcript))
