"""The classification table as data: space families, criterion routing, reports.

Each irreducible symmetric space family carries constructors for its cohomology
data and a routing rule that assembles an ordered plan of criterion checks.
Running a plan yields a Certificate with a full transcript, or a Refusal; the
report generator runs desk-scale parameter ranges over the whole table.
"""

from __future__ import annotations

import os
import shlex
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .criteria import (
    ASSERTED,
    MACHINE,
    RATIONAL,
    RECORDED,
    STEENROD,
    Certificate,
    DataIncomplete,
    ExteriorActionData,
    GeneratingMapWitness,
    Refusal,
    TranscriptEntry,
    check_partial_projective_criterion,
    conclude_noncommutative,
)
from .gradedalg import (
    Algebra,
    FieldSpec,
    Generator,
    Poly,
    Presentation,
    Relation,
    is_complete_intersection,
    is_decomposable,
    parse_poly,
    parse_presentation,
    poly_to_text,
)
from .steenrod import (
    ClassifyingCrossCheck,
    hook_component_e_top,
    SteenrodCriterionInstance,
    SteenrodOp,
    check_steenrod_criterion,
    class_algebra,
    suspension_moore,
    suspension_quasi_projective,
    suspension_rp,
    suspension_sphere,
    torus_model,
    total_char_class_operation,
)
from .sullivan import (
    build_formal_model,
    find_rational_witness,
    pretty_model,
    transfer_witness,
)


class ParameterError(ValueError):
    """Parameters violate the classification-table constraints."""


class CatalogDataError(ValueError):
    """Malformed catalog data file."""


FAMILY_ORDER = (
    "AI", "AII", "AIII", "BDI", "DIII", "CI", "CII",
    "EI", "EII", "EIII", "EIV", "EV", "EVI", "EVII", "EVIII", "EIX",
    "FI", "FII", "G",
)

_PARAM_COUNT = {
    "AI": 1, "AII": 1, "AIII": 2, "BDI": 2, "DIII": 1, "CI": 1, "CII": 2,
}
_CONSTRAINT_DOC = {
    "AI": "n >= 2",
    "AII": "n >= 2",
    "AIII": "m, n >= 1",
    "BDI": "m, n >= 2",
    "DIII": "n >= 2",
    "CI": "n >= 2",
    "CII": "m, n >= 1",
}

DATA_ENV = "LOOPCOMM_DATA_DIR"


# ---------------------------------------------------------------------------
# catalog data files

_REQUIRED_KEYS = {
    "presentation": {"space", "file", "cite"},
    "fibration": {"space", "aux", "aux-label", "threshold", "cite"},
    "pullback": {"space", "model", "prime", "class", "value", "cite"},
    "action": {"space", "gen", "family", "k", "prime", "value", "cite"},
    "generating-map": {"space", "source-template", "cite"},
    "sq-table": {"space", "gen", "value", "cite"},
    "external": {"family", "cite"},
    "exception": {"space", "cite"},
}


class DataSet:
    """Parsed catalog data: presentations plus tagged fact records."""

    def __init__(self, presentations: dict, facts: list):
        self.presentations = presentations  # space -> (Presentation, citation)
        self.facts = facts  # list of (kind, dict)

    def presentation(self, space: str) -> Presentation:
        return self.presentations[space][0]

    def presentation_cite(self, space: str) -> str:
        return self.presentations[space][1]

    def find(self, kind: str, **match) -> list:
        out = []
        for k, rec in self.facts:
            if k == kind and all(rec.get(key) == val for key, val in match.items()):
                out.append(rec)
        return out

    def one(self, kind: str, **match) -> dict:
        recs = self.find(kind, **match)
        if len(recs) != 1:
            raise CatalogDataError(f"expected one {kind} record matching {match}, found {len(recs)}")
        return recs[0]


def _data_root():
    override = os.environ.get(DATA_ENV)
    if override:
        return override
    return resources.files("loopcomm") / "data"


def _read_text(root, *parts) -> str:
    if isinstance(root, str):
        path = os.path.join(root, *parts)
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    node = root
    for p in parts:
        node = node / p
    return node.read_text(encoding="utf-8")


_DATASET_CACHE: dict = {}


def load_dataset() -> DataSet:
    """Load and validate the embedded catalog data (env override honored)."""
    key = os.environ.get(DATA_ENV, "")
    if key in _DATASET_CACHE:
        return _DATASET_CACHE[key]
    root = _data_root()
    facts = []
    presentations = {}
    text = _read_text(root, "facts.txt")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            words = shlex.split(line)
            kind = words[0]
            rec = {}
            for w in words[1:]:
                k, sep, v = w.partition("=")
                if not sep or not k:
                    raise ValueError(f"bad key=value token {w!r}")
                rec[k] = v
        except ValueError as exc:
            raise CatalogDataError(f"facts.txt line {lineno}: {exc}") from exc
        if kind not in _REQUIRED_KEYS:
            raise CatalogDataError(f"facts.txt line {lineno}: unknown record kind {kind!r}")
        missing = _REQUIRED_KEYS[kind] - set(rec)
        if missing:
            raise CatalogDataError(f"facts.txt line {lineno}: missing keys {sorted(missing)}")
        facts.append((kind, rec))
    for kind, rec in facts:
        if kind != "presentation":
            continue
        body = _read_text(root, "presentations", rec["file"])
        try:
            pres = parse_presentation(body)
        except ValueError as exc:
            raise CatalogDataError(f"{rec['file']}: {exc}") from exc
        presentations[rec["space"]] = (pres, rec["cite"])
    ds = DataSet(presentations, facts)
    _DATASET_CACHE[key] = ds
    return ds


# ---------------------------------------------------------------------------
# instances and plans


@dataclass(frozen=True)
class SpaceInstance:
    family: str
    params: tuple
    label: str


@dataclass(frozen=True)
class TransferStep:
    threshold: int
    target: str
    citation: str


@dataclass(frozen=True)
class LiftStep:
    base: str
    target: str
    threshold: int
    source_dim: int
    citation: str


@dataclass(frozen=True)
class RationalStep:
    space: str
    presentation: Presentation
    citation: str
    transfer: Optional[TransferStep] = None
    label: str = "Rational"


@dataclass(frozen=True)
class SteenrodStep:
    instance: SteenrodCriterionInstance
    lift: Optional[LiftStep] = None
    crosscheck: Optional[ClassifyingCrossCheck] = None
    label: str = "Steenrod"


@dataclass(frozen=True)
class ProjectiveStep:
    data: ExteriorActionData
    witness: GeneratingMapWitness
    label: str = "PartialProjectivePlane"


@dataclass(frozen=True)
class RecordedStep:
    space: str
    statement: str
    citation: str
    label: str = "RecordedExternal"


@dataclass(frozen=True)
class CriterionPlan:
    steps: tuple
    exception_note: str = ""


def instantiate(family: str, params=()) -> SpaceInstance:
    """Validate parameters against the classification table and normalize them."""
    if family not in FAMILY_ORDER:
        raise ParameterError(f"unknown family {family!r}; valid ids: {', '.join(FAMILY_ORDER)}")
    params = tuple(int(p) for p in params)
    want = _PARAM_COUNT.get(family, 0)
    if len(params) != want:
        raise ParameterError(
            f"{family} takes {want} parameter(s)"
            + (f" ({_CONSTRAINT_DOC[family]})" if family in _CONSTRAINT_DOC else "")
        )
    if family in ("AI", "AII", "DIII", "CI") and params[0] < 2:
        raise ParameterError(f"{family} requires {_CONSTRAINT_DOC[family]}")
    if family == "AIII" and min(params) < 1:
        raise ParameterError("AIII requires m, n >= 1")
    if family == "BDI" and min(params) < 2:
        raise ParameterError("BDI requires m, n >= 2")
    if family == "CII" and min(params) < 1:
        raise ParameterError("CII requires m, n >= 1")
    if family == "AIII":
        params = tuple(sorted(params))
    elif family in ("BDI", "CII"):
        params = tuple(sorted(params, reverse=True))
    label = family if not params else f"{family}({','.join(str(p) for p in params)})"
    return SpaceInstance(family, params, label)


# -- constructors for parameterized data


def _cp_presentation(N: int) -> Presentation:
    alg = Algebra(FieldSpec(0), [Generator("x2", 2)])
    return Presentation(alg, (Relation(2 * (N + 1), "explicit", alg.monomial((N + 1,))),))


def _cp_mod2_data(N: int) -> ExteriorActionData:
    alg = Algebra(FieldSpec(2), [Generator("x2", 2)])
    pres = Presentation(alg, (Relation(2 * (N + 1), "explicit", alg.monomial((N + 1,))),))
    table = {"x2": alg.gen("x2") + alg.gen("x2") * alg.gen("x2")}
    return ExteriorActionData(pres, table, citation="total square of the projective-space generator")


def _ai_presentation(n: int) -> Presentation:
    gens = [Generator(f"v{i}", i, squares_to_zero=True) for i in range(2, n + 1)]
    return Presentation(Algebra(FieldSpec(2), gens))


def _restricted_action(model, class_name, family, prime, images, target_alg) -> Poly:
    """Total operation of a classifying-space class pushed through a restriction table."""
    total = total_char_class_operation(model, class_name, family, prime)
    calg = total.algebra
    out = target_alg.zero()
    for exps, coeff in total.terms.items():
        term = target_alg.unit().scale(coeff)
        for i, e in enumerate(exps):
            if e == 0:
                continue
            img = images.get(calg.generators[i].name)
            if img is None:
                raise DataIncomplete(
                    f"restriction image of {calg.generators[i].name} is not recorded"
                )
            for _ in range(e):
                term = term * img
            if term.is_zero:
                break
        out = out + term
    return out


def _power_candidates(n: int) -> list:
    """Operation degrees to try for the orthogonal-type criterion at rank n."""
    first = 2 if n % 4 in (0, 3) else 3
    out = [first]
    k = 4
    while k < n:
        if k not in out:
            out.append(k)
        k *= 2
    return out


_WU_CITE = "Wu formula computed by the splitting principle"
_RP_PULLBACK_CITE = "reflection-map restriction g*(w_i) = Sigma u^{i-1} (Whitehead)"


def _ai_steps(n: int) -> list:
    pres = _ai_presentation(n)
    alg = pres.algebra
    so = torus_model("so", n)
    images = {f"w{i}": alg.gen(f"v{i}") for i in range(2, n + 1)}
    action = {f"v{n}": _restricted_action(so, f"w{n}", "Sq", 2, images, alg)}
    steps = []
    for b in _power_candidates(n):
        inst = SteenrodCriterionInstance(
            space=f"AI({n})",
            presentation=pres,
            action=action,
            action_provenance="derived",
            action_citation=_WU_CITE + " in BSO(n), restricted along v_i = iota^*(w_i) (Mimura-Toda)",
            prime=2,
            op=SteenrodOp("Sq", b, 2),
            a=f"v{n}",
            b=f"v{b}",
            x=f"v{n}",
            source_a=suspension_rp(n - 1),
            source_b=suspension_rp(b - 1),
            pullback_a={f"v{i}": f"su{i - 1}" for i in range(2, n + 1)},
            pullback_b={
                f"v{i}": (f"su{i - 1}" if i - 1 <= b - 1 else None) for i in range(2, n + 1)
            },
            pullback_citation=_RP_PULLBACK_CITE,
        )
        steps.append(SteenrodStep(inst, label=f"Steenrod Sq^{b} on AI({n})"))
    return steps


def _bso_steps(m: int, n: int) -> list:
    model = torus_model("so", n)
    alg = class_algebra(model, 2)
    pres = Presentation(alg)
    action = {f"w{n}": total_char_class_operation(model, f"w{n}", "Sq", 2)}
    lift = LiftStep(
        base=f"BSO({n})",
        target=f"BDI({m},{n})",
        threshold=n,
        source_dim=n,
        citation=(
            "the classifying map of the tautological bundle BDI(m,n) -> BSO(n) is an "
            "n-equivalence for m >= n"
        ),
    )
    steps = []
    for b in _power_candidates(n):
        inst = SteenrodCriterionInstance(
            space=f"BSO({n})",
            presentation=pres,
            action=action,
            action_provenance="derived",
            action_citation=_WU_CITE + " in BSO(n)",
            prime=2,
            op=SteenrodOp("Sq", b, 2),
            a=f"w{n}",
            b=f"w{b}",
            x=f"w{n}",
            source_a=suspension_rp(n - 1),
            source_b=suspension_rp(b - 1),
            pullback_a={f"w{i}": f"su{i - 1}" for i in range(2, n + 1)},
            pullback_b={
                f"w{i}": (f"su{i - 1}" if i - 1 <= b - 1 else None) for i in range(2, n + 1)
            },
            pullback_citation=_RP_PULLBACK_CITE,
        )
        steps.append(SteenrodStep(inst, lift=lift, label=f"Steenrod Sq^{b} on BSO({n})"))
    return steps


def _smallest_odd_prime_divisor(n: int) -> Optional[int]:
    m = n
    while m % 2 == 0:
        m //= 2
    if m == 1:
        return None
    d = 3
    while d * d <= m:
        if m % d == 0:
            return d
        d += 2
    return m


def _csp_steps(m: int, n: int) -> list:
    p = _smallest_odd_prime_divisor(n)
    lift = LiftStep(
        base=f"BSp({n})",
        target=f"CII({m},{n})",
        threshold=4 * n + 2,
        source_dim=4 * n,
        citation="the classifying map CII(m,n) -> BSp(n) is a (4n+2)-equivalence for m >= n",
    )
    if p is not None:
        prime, op, b_index, diagonal = p, SteenrodOp("P", 1, p), (p - 1) // 2, False
        label = f"Steenrod P^1 (p={p}) on BSp({n})"
    elif n >= 2:
        prime, op, b_index, diagonal = 2, SteenrodOp("Sq", 4, 2), 1, False
        label = f"Steenrod Sq^4 on BSp({n})"
    else:
        # n = 1: the mod-2 instance would need a = b, which condition (2) forbids;
        # the diagonal odd-primary instance at p = 3 satisfies condition (3) instead.
        prime, op, b_index, diagonal = 3, SteenrodOp("P", 1, 3), 1, True
        label = "Steenrod P^1 (p=3) on BSp(1)"
    model = torus_model("sp", n)
    alg = class_algebra(model, prime)
    pres = Presentation(alg)
    action = {f"q{n}": total_char_class_operation(model, f"q{n}", op.family, prime)}
    source_a = suspension_quasi_projective(n, prime)
    source_b = source_a if diagonal and b_index == n else suspension_quasi_projective(b_index, prime)
    inst = SteenrodCriterionInstance(
        space=f"BSp({n})",
        presentation=pres,
        action=action,
        action_provenance="derived",
        action_citation="mod-p " + _WU_CITE + " in BSp(n)",
        prime=prime,
        op=op,
        a=f"q{n}",
        b=f"q{b_index}",
        x=f"q{n}",
        source_a=source_a,
        source_b=source_b,
        pullback_a={f"q{i}": f"sx{i}" for i in range(1, n + 1)},
        pullback_b={f"q{i}": (f"sx{i}" if i <= b_index else None) for i in range(1, n + 1)},
        diagonal=diagonal,
        pullback_citation="quasi-projective restriction g*(q_i) = Sigma x_i (James)",
    )
    return [SteenrodStep(inst, lift=lift, label=label)]


def _sphere_bottom_step(ds: DataSet, space: str, gen: str, zero_gens=()) -> SteenrodStep:
    """Diagonal bottom-cell instance at p = 5 with a classifying cross-check."""
    pres = ds.presentation(space)
    alg = pres.algebra
    rec = ds.one("action", space=space)
    op = SteenrodOp(rec["family"], int(rec["k"]), int(rec["prime"]))
    total = alg.gen(rec["gen"]) + parse_poly(rec["value"], alg)
    pb = ds.one("pullback", space=space)
    cc = ClassifyingCrossCheck(
        model=torus_model(pb["model"], 4),
        class_name=pb["class"],
        pullback={pb["class"]: parse_poly(pb["value"], alg)},
        citation=pb["cite"],
    )
    sphere = suspension_sphere(8)
    table = {gen: "s8"}
    table.update({g: None for g in zero_gens})
    inst = SteenrodCriterionInstance(
        space=space,
        presentation=pres,
        action={rec["gen"]: total},
        action_provenance="asserted",
        action_citation=rec["cite"],
        prime=int(rec["prime"]),
        op=op,
        a=gen,
        b=gen,
        x=gen,
        source_a=sphere,
        source_b=sphere,
        pullback_a=dict(table),
        pullback_b=dict(table),
        diagonal=True,
        pullback_citation=f"bottom cell S^8 -> {space} detecting {gen}",
    )
    return SteenrodStep(inst, crosscheck=cc, label=f"Steenrod {op.label} on {space}")


def _g_step(ds: DataSet) -> SteenrodStep:
    pres = ds.presentation("G")
    alg = pres.algebra
    images = {}
    for rec in ds.find("pullback", space="G"):
        images[rec["class"]] = parse_poly(rec["value"], alg)
    so4 = torus_model("so", 4)
    action = {"x3": _restricted_action(so4, "w3", "Sq", 2, images, alg)}
    inst = SteenrodCriterionInstance(
        space="G",
        presentation=pres,
        action=action,
        action_provenance="derived",
        action_citation=_WU_CITE + " in BSO(4), restricted along x_i = iota^*(w_i) (Borel-Hirzebruch)",
        prime=2,
        op=SteenrodOp("Sq", 2, 2),
        a="x3",
        b="x2",
        x="x3",
        source_a=suspension_moore(),
        source_b=suspension_sphere(2),
        pullback_a={"x2": "u2", "x3": "u3"},
        pullback_b={"x2": "s2", "x3": None},
        pullback_citation="restriction to the 3-skeleton S^2 cup_2 e^3 and its bottom cell",
    )
    return SteenrodStep(inst, label="Steenrod Sq^2 on G")


def _aii_data(n: int, ds: DataSet):
    degrees = [4 * i + 1 for i in range(1, n)]
    gens = [Generator(f"x{d}", d, squares_to_zero=True) for d in degrees]
    alg = Algebra(FieldSpec(2), gens)
    pres = Presentation(alg)
    table = {}
    for k in range(1, n):
        total = alg.gen(f"x{4 * k + 1}")
        for r in range(1, n - k):
            # x_{4k+1} corresponds to c_{2k+1}; the suspension keeps only the
            # linear coefficient of c_{2(k+r)+1} in Sq^{4r} c_{2k+1}
            gamma = hook_component_e_top(2 * k + 1, 2 * r) % 2
            if gamma:
                total = total + alg.gen(f"x{4 * (k + r) + 1}").scale(gamma)
        table[f"x{4 * k + 1}"] = total
    gm = ds.one("generating-map", space="AII")
    data = ExteriorActionData(
        pres,
        table,
        citation=(
            "total squares are linear: Wu formula for Chern classes via the splitting "
            "principle, transported by the cohomology suspension (decomposables die)"
        ),
    )
    witness = GeneratingMapWitness(
        source=f"Sigma HP^{n - 1}",
        base=f"HP^{n - 1}",
        target=f"AII({n})",
        cell_degrees=tuple(degrees),
        citation=gm["cite"],
    )
    return data, witness


def _eiv_data(ds: DataSet):
    pres = ds.presentation("EIV")
    alg = pres.algebra
    table = {}
    cites = []
    for rec in ds.find("sq-table", space="EIV"):
        table[rec["gen"]] = parse_poly(rec["value"], alg)
        cites.append(rec["cite"])
    gm = ds.one("generating-map", space="EIV")
    data = ExteriorActionData(pres, table, citation="; ".join(cites))
    witness = GeneratingMapWitness(
        source="Sigma OP^2",
        base="OP^2",
        target="EIV",
        cell_degrees=(9, 17),
        citation=gm["cite"],
    )
    return data, witness


def _rational_step(ds: DataSet, space: str, label: str) -> RationalStep:
    return RationalStep(
        space=label,
        presentation=ds.presentation(space),
        citation=ds.presentation_cite(space),
    )


def _rational_transfer_step(ds: DataSet, space: str, target_label: str) -> RationalStep:
    fib = ds.one("fibration", space=space)
    aux = fib["aux"]
    return RationalStep(
        space=fib["aux-label"],
        presentation=ds.presentation(aux),
        citation=ds.presentation_cite(aux),
        transfer=TransferStep(int(fib["threshold"]), target_label, fib["cite"]),
    )


def _recorded_step(ds: DataSet, family_key: str, space_label: str) -> RecordedStep:
    rec = ds.one("external", family=family_key)
    return RecordedStep(
        space=space_label,
        statement=f"Omega({space_label}) is not homotopy commutative (recorded external result)",
        citation=rec["cite"],
    )


def route(instance: SpaceInstance) -> CriterionPlan:
    """Assemble the ordered plan of criterion invocations for an instance."""
    ds = load_dataset()
    fam, params, label = instance.family, instance.params, instance.label

    if fam == "AI":
        n = params[0]
        if n == 2:
            rec = ds.one("external", family="AI-rank2")
            return CriterionPlan(
                (
                    RecordedStep(
                        label,
                        f"Omega({label}) is not homotopy commutative: AI(2) = S^2 carries "
                        "the non-trivial Whitehead square [1,1]",
                        rec["cite"],
                    ),
                )
            )
        return CriterionPlan(tuple(_ai_steps(n)))

    if fam == "AII":
        data, witness = _aii_data(params[0], ds)
        return CriterionPlan((ProjectiveStep(data, witness),))

    if fam == "AIII":
        m, n = params
        if m == 1:
            N = n  # AIII(1,n) is CP^n
            steps = [
                RationalStep(
                    space=f"CP^{N}",
                    presentation=_cp_presentation(N),
                    citation="truncated polynomial rational cohomology of complex projective space",
                )
            ]
            if N == 3:
                steps.append(
                    ProjectiveStep(
                        _cp_mod2_data(N),
                        GeneratingMapWitness(
                            source="S^2",
                            base="S^1",
                            target="CP^3",
                            cell_degrees=(2,),
                            citation="bottom cell of CP^3",
                        ),
                        label="PartialProjectivePlane on CP^3",
                    )
                )
                exc = ds.one("exception", space="CP3")
                return CriterionPlan(tuple(steps), exception_note=exc["cite"])
            steps.append(_recorded_step(ds, "AIII", label))
            return CriterionPlan(tuple(steps))
        return CriterionPlan((_recorded_step(ds, "AIII", label),))

    if fam == "BDI":
        m, n = params
        if n == 2:
            return CriterionPlan((_recorded_step(ds, "BDI-rank2", label),))
        return CriterionPlan(tuple(_bso_steps(m, n)))

    if fam in ("DIII", "CI", "EIII", "EVII"):
        return CriterionPlan((_recorded_step(ds, fam, label),))

    if fam == "CII":
        m, n = params
        return CriterionPlan(tuple(_csp_steps(m, n)))

    if fam == "EI":
        return CriterionPlan((_sphere_bottom_step(ds, "EI", "x8", zero_gens=("x9", "x17")),))
    if fam == "EII":
        return CriterionPlan((_rational_step(ds, "EII", label),))
    if fam == "EIV":
        data, witness = _eiv_data(ds)
        return CriterionPlan((ProjectiveStep(data, witness),))
    if fam == "EV":
        return CriterionPlan((_rational_step(ds, "EV", label),))
    if fam == "EVIII":
        return CriterionPlan((_rational_step(ds, "EVIII", label),))
    if fam in ("EVI", "EIX", "FI"):
        return CriterionPlan((_rational_transfer_step(ds, fam, label),))
    if fam == "FII":
        return CriterionPlan((_sphere_bottom_step(ds, "FII", "q"),))
    if fam == "G":
        return CriterionPlan((_g_step(ds),))
    raise ParameterError(f"no routing rule for family {fam!r}")


# ---------------------------------------------------------------------------
# running plans


def _run_rational(step: RationalStep):
    pres = step.presentation
    space = step.space
    transcript = [
        TranscriptEntry(
            MACHINE,
            "pass",
            f"rational coefficients; generators all even (degrees "
            f"{tuple(g.degree for g in pres.generators)}); "
            f"{len(pres.relations)} relations for {len(pres.generators)} generators",
        )
    ]
    for i, rel in enumerate(pres.relations):
        if rel.explicit:
            if not is_decomposable(rel.terms):
                return Refusal(space, RATIONAL, f"relation {i} is not decomposable", tuple(transcript))
            transcript.append(
                TranscriptEntry(MACHINE, "pass", f"relation {i} (degree {rel.degree}) is decomposable")
            )
        else:
            transcript.append(
                TranscriptEntry(
                    ASSERTED,
                    "pass",
                    f"relation {i} (degree {rel.degree}) is decomposable; certified terms: "
                    f"{poly_to_text(rel.terms)}",
                    citation=step.citation,
                )
            )
    if pres.all_explicit and pres.relations:
        if not is_complete_intersection(pres):
            return Refusal(space, RATIONAL, "relations are not a complete intersection", tuple(transcript))
        transcript.append(
            TranscriptEntry(MACHINE, "pass", "relations form a complete intersection (series comparison)")
        )
    elif pres.relations:
        transcript.append(
            TranscriptEntry(
                ASSERTED,
                "pass",
                "relations form a regular sequence (finite-dimensional cohomology)",
                citation=step.citation,
            )
        )
    model = build_formal_model(pres)
    transcript.append(
        TranscriptEntry(
            MACHINE,
            "pass",
            f"minimal model {pretty_model(model)}; stored differentials are cocycles",
        )
    )
    witness = find_rational_witness(model, space)
    if witness is None:
        lengths = sorted(
            wl
            for g in model.generators
            for wl in model.differential[g.name].word_lengths()
        )
        detail = f"; smallest differential word length is {lengths[0]}" if lengths else ""
        transcript.append(
            TranscriptEntry(MACHINE, "fail", "no differential carries a quadratic monomial" + detail)
        )
        return Refusal(space, RATIONAL, "no quadratic term in any differential", tuple(transcript))
    transcript.append(
        TranscriptEntry(
            MACHINE,
            "pass",
            f"differential of relation {witness.relation_index} contains the quadratic pair "
            f"{witness.pair}: non-trivial rational Whitehead pairing on homotopy in degrees "
            f"({witness.m},{witness.n}) with target degree {witness.target}",
            citation="quadratic part of a minimal-model differential detects rational Whitehead products",
        )
    )
    final_space = space
    if step.transfer is not None:
        t = step.transfer
        witness = transfer_witness(witness, t.threshold, t.target, t.citation)
        transcript.append(
            TranscriptEntry(
                MACHINE,
                "pass",
                f"witness degrees ({witness.m},{witness.n},{witness.target}) all >= threshold {t.threshold}",
            )
        )
        transcript.append(
            TranscriptEntry(
                ASSERTED,
                "pass",
                f"{space} -> {t.target} induces a rational homotopy isomorphism in degrees >= {t.threshold}",
                citation=t.citation,
            )
        )
        final_space = t.target
    payload = (
        ("pair", f"({witness.pair[0]}, {witness.pair[1]})"),
        ("degrees", f"({witness.m}, {witness.n})"),
        ("target", f"pi_{witness.target} (x) Q"),
        ("relation_index", str(witness.relation_index)),
    )
    return Certificate(final_space, RATIONAL, payload, tuple(transcript))


def _run_steenrod(step: SteenrodStep):
    result = check_steenrod_criterion(step.instance, step.crosscheck)
    if isinstance(result, Refusal) or step.lift is None:
        return result
    lift = step.lift
    transcript = result.transcript + (
        TranscriptEntry(
            ASSERTED,
            "pass",
            f"{lift.target} -> {lift.base} is a {lift.threshold}-equivalence",
            citation=lift.citation,
        ),
        TranscriptEntry(
            MACHINE,
            "pass",
            f"source dimension {lift.source_dim} <= {lift.threshold}: both maps lift, and the "
            f"lifted Whitehead product maps onto the verified non-trivial one",
        ),
    )
    witness = result.witness + (("lifted-from", lift.base),)
    return Certificate(lift.target, STEENROD, witness, transcript)


def _run_step(step):
    if isinstance(step, RationalStep):
        return _run_rational(step)
    if isinstance(step, SteenrodStep):
        return _run_steenrod(step)
    if isinstance(step, ProjectiveStep):
        return check_partial_projective_criterion(step.data, step.witness)
    if isinstance(step, RecordedStep):
        return Certificate(
            step.space,
            RECORDED,
            (("statement", step.statement),),
            (TranscriptEntry(ASSERTED, "pass", step.statement, citation=step.citation),),
        )
    raise TypeError(f"unknown plan step {step!r}")


def check(instance: SpaceInstance):
    """Run the instance's criterion plan; certificate on first success."""
    plan = route(instance)
    notes = []
    last = None
    for step in plan.steps:
        result = _run_step(step)
        if isinstance(result, Certificate):
            if notes:
                prefix = tuple(TranscriptEntry(MACHINE, "info", n) for n in notes)
                result = Certificate(result.space, result.criterion, result.witness, prefix + result.transcript)
            if result.space != instance.label:
                result = Certificate(
                    instance.label,
                    result.criterion,
                    result.witness + (("checked-on", result.space),),
                    result.transcript,
                )
            return result
        notes.append(
            f"plan step '{getattr(step, 'label', step.__class__.__name__)}' refused: {result.failed}"
        )
        last = result
    assert last is not None, "empty criterion plan"
    return Refusal(
        instance.label,
        last.criterion,
        last.failed,
        last.transcript + tuple(TranscriptEntry(MACHINE, "info", n) for n in notes[:-1]),
        exception_note=plan.exception_note,
    )


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class ReportRow:
    family: str
    params: str
    label: str
    criterion: str
    witness: str
    conclusion: str
    exception: bool
    note: str
    transcript: tuple


@dataclass(frozen=True)
class Report:
    rows: tuple

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "report",
            "rows": [
                {
                    "family": r.family,
                    "params": r.params,
                    "space": r.label,
                    "criterion": r.criterion,
                    "witness": r.witness,
                    "conclusion": r.conclusion,
                    "exception": r.exception,
                    "note": r.note,
                    "transcript": [
                        {
                            "status": e.status,
                            "outcome": e.outcome,
                            "description": e.description,
                            "citation": e.citation,
                        }
                        for e in r.transcript
                    ],
                }
                for r in self.rows
            ],
        }

    def render_text(self) -> str:
        headers = ("space", "criterion", "conclusion")
        table = [
            (r.label, r.criterion + ("*" if r.exception else ""), r.conclusion)
            for r in self.rows
        ]
        widths = [
            max(len(h), *(len(row[i]) for row in table)) if table else len(h)
            for i, h in enumerate(headers)
        ]
        lines = [
            "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
            "  ".join("-" * w for w in widths),
        ]
        for row in table:
            lines.append("  ".join(row[i].ljust(widths[i]) for i in range(len(headers))))
        notes = [r for r in self.rows if r.note]
        if notes:
            lines.append("")
            for r in notes:
                lines.append(f"* {r.label}: {r.note}")
        return "\n".join(lines) + "\n"


def _row_from_instance(instance: SpaceInstance) -> ReportRow:
    result = check(instance)
    params = ",".join(str(p) for p in instance.params) if instance.params else "-"
    if isinstance(result, Certificate):
        conclusion = conclude_noncommutative(result)
        return ReportRow(
            family=instance.family,
            params=params,
            label=instance.label,
            criterion=result.criterion,
            witness=result.witness_text(),
            conclusion=conclusion.statement,
            exception=False,
            note="",
            transcript=conclusion.certificate.transcript,
        )
    return ReportRow(
        family=instance.family,
        params=params,
        label=instance.label,
        criterion=result.criterion,
        witness="-",
        conclusion="no conclusion from the implemented criteria",
        exception=bool(result.exception_note),
        note=result.exception_note,
        transcript=result.transcript,
    )


def _family_level_row(family: str) -> ReportRow:
    ds = load_dataset()
    rec = ds.one("external", family=family)
    label = f"{family} (all parameters in range)"
    note = ""
    if family == "AIII":
        label = "AIII (all parameters, except CP^3)"
        note = "the CP^3 instance AIII(1,3) is the known exception; see its own row"
    statement = f"Omega({family}) is not homotopy commutative for every instance in range"
    return ReportRow(
        family=family,
        params="all",
        label=label,
        criterion=RECORDED,
        witness="recorded external result",
        conclusion=statement,
        exception=False,
        note=note,
        transcript=(TranscriptEntry(ASSERTED, "pass", statement, citation=rec["cite"]),),
    )


DEFAULT_RANGES = {
    "AI": [(n,) for n in range(2, 11)],
    "AII": [(n,) for n in range(2, 7)],
    "BDI": [(m, n) for n in range(2, 9) for m in range(n, 9)],
    "CII": [(m, n) for n in range(1, 7) for m in range(n, 7)],
}
_SINGLES = ("EI", "EII", "EIV", "EV", "EVI", "EVIII", "EIX", "FI", "FII", "G")
_HERMITIAN_FAMILY_ROWS = ("AIII", "DIII", "CI", "EIII", "EVII")


def report(families=None, max_param: Optional[int] = None) -> Report:
    """One row per instance over desk-scale ranges, in classification-table order."""
    wanted = set(families) if families else None
    rows = []
    for family in FAMILY_ORDER:
        if wanted is not None and family not in wanted:
            continue
        if family in DEFAULT_RANGES:
            for params in DEFAULT_RANGES[family]:
                if max_param is not None and any(p > max_param for p in params):
                    continue
                rows.append(_row_from_instance(instantiate(family, params)))
        elif family in _HERMITIAN_FAMILY_ROWS:
            rows.append(_family_level_row(family))
            if family == "AIII":
                rows.append(_row_from_instance(instantiate("AIII", (1, 3))))
        elif family in _SINGLES:
            rows.append(_row_from_instance(instantiate(family)))
    return Report(tuple(rows))
