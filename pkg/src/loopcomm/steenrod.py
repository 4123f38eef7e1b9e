"""Steenrod squares and odd-primary power operations via the splitting principle.

Characteristic-class formulas are never hard-coded: a class restricts to an
elementary symmetric polynomial in torus variables, the total operation is the
multiplicative substitution t -> t + t^p, and the answer is re-expressed in
elementary symmetric polynomials with rank truncation.  Suspension models
carry stable action tables derived from the same engine, and the six-condition
criterion consumes both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .criteria import (
    ASSERTED,
    MACHINE,
    STEENROD,
    Certificate,
    DataIncomplete,
    Refusal,
    TranscriptEntry,
)
from .gradedalg import (
    Algebra,
    ContractViolation,
    FieldSpec,
    Generator,
    Poly,
    Presentation,
    graded_dimension,
    indecomposable_dimension,
    is_decomposable,
    monomial_text,
    poly_to_text,
)


def binomial(m: int, t: int) -> int:
    """Generalized binomial coefficient (m may be negative)."""
    if t < 0:
        return 0
    num = 1
    for s in range(t):
        num *= m - s
    for s in range(2, t + 1):
        num //= s
    return num


# ---------------------------------------------------------------------------
# torus polynomials: dict exponent-tuple -> int


def tp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def tp_unit(nvars: int) -> dict:
    return {(0,) * nvars: 1}


def elementary(nvars: int, k: int, power: int = 1) -> dict:
    """Elementary symmetric polynomial e_k(t_1^power, ..., t_n^power)."""
    if k < 0 or k > nvars:
        return {}
    out = {}
    for subset in itertools.combinations(range(nvars), k):
        exps = [0] * nvars
        for j in subset:
            exps[j] = power
        out[tuple(exps)] = 1
    return out


def total_operation_on_torus(poly: dict, family: str, prime: int, var_degree: int) -> dict:
    """Multiplicative extension of t -> t + t^prime, exact integer coefficients.

    Sq requires prime 2 (variables of degree 1 or 2); P requires an odd prime
    and degree-2 variables.
    """
    if family == "Sq":
        if prime != 2:
            raise ContractViolation("Sq operations live at the prime 2")
    elif family == "P":
        if prime == 2 or var_degree != 2:
            raise ContractViolation("power operations require an odd prime and degree-2 variables")
    else:
        raise ContractViolation(f"unknown operation family {family!r}")
    if var_degree not in (1, 2):
        raise ContractViolation("torus variables must have degree 1 or 2")
    out: dict = {}
    for exps, coeff in poly.items():
        # expand prod_j (t_j + t_j^p)^{e_j} one variable at a time
        partial = {exps: coeff}
        for j, e in enumerate(exps):
            if e == 0:
                continue
            nxt: dict = {}
            for pe, pc in partial.items():
                for c in range(e + 1):
                    b = binomial(e, c)
                    ne = list(pe)
                    ne[j] = e + c * (prime - 1)
                    ne = tuple(ne)
                    nxt[ne] = nxt.get(ne, 0) + pc * b
            partial = nxt
        for e, c in partial.items():
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def tp_degree_component(poly: dict, degree: int, var_degree: int) -> dict:
    return {e: c for e, c in poly.items() if sum(e) * var_degree == degree}


@lru_cache(maxsize=None)
def hook_component_e_top(j: int, c: int) -> int:
    """Coefficient of e_{j+c} in the e-expansion of m_{(2^c, 1^{j-c})}.

    This is the linear (indecomposable) coefficient of the weight-(j+c)
    component of the total operation on e_j; it is stable in the number of
    variables, so it is computed at the minimal rank j+c.
    """
    if c > j:
        return 0  # at most j factors of e_j can be squared
    n = j + c
    mono: dict = {}
    for twos in itertools.combinations(range(n), c):
        rest = [i for i in range(n) if i not in twos]
        for ones in itertools.combinations(rest, j - c):
            exps = [0] * n
            for i in twos:
                exps[i] = 2
            for i in ones:
                exps[i] = 1
            mono[tuple(exps)] = 1
    e_terms = express_symmetric(mono, n)
    top = tuple(1 if k == n - 1 else 0 for k in range(n))
    return e_terms.get(top, 0)


def symmetry_violation(poly: dict, nvars: int) -> Optional[tuple]:
    """The first adjacent transposition under which the polynomial moves, if any."""
    for i in range(nvars - 1):
        swapped = {}
        for e, c in poly.items():
            se = list(e)
            se[i], se[i + 1] = se[i + 1], se[i]
            swapped[tuple(se)] = c
        if swapped != poly:
            return (i, i + 1)
    return None


@lru_cache(maxsize=None)
def _e_product(nvars: int, e_exps: tuple) -> dict:
    out = tp_unit(nvars)
    for k, mult in enumerate(e_exps, start=1):
        for _ in range(mult):
            out = tp_mul(out, elementary(nvars, k))
    return out


def express_symmetric(poly: dict, nvars: int) -> dict:
    """Unique expression of a symmetric polynomial in e_1..e_n.

    Classical leading-term elimination: the lex-greatest monomial of a
    symmetric polynomial is a partition lambda, matched by the elementary
    monomial with multiplicities lambda_k - lambda_{k+1}.  Raises naming a
    violating transposition when the input is not symmetric.
    """
    bad = symmetry_violation(poly, nvars)
    if bad is not None:
        raise ContractViolation(f"input not symmetric: moves under transposition {bad}")
    work = dict(poly)
    out: dict = {}
    while work:
        lam = max(work)  # lex-greatest exponent vector; symmetric => a partition
        padded = list(lam) + [0]
        e_exps = tuple(padded[k] - padded[k + 1] for k in range(nvars))
        c = work[lam]
        out[e_exps] = out.get(e_exps, 0) + c
        prod = _e_product(nvars, e_exps)
        for e, pc in prod.items():
            v = work.get(e, 0) - c * pc
            if v:
                work[e] = v
            else:
                work.pop(e, None)
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class SteenrodOp:
    """One operation component: Sq^k at p = 2, or P^k at an odd prime."""

    family: str  # "Sq" | "P"
    k: int
    prime: int = 2

    def __post_init__(self):
        if self.family not in ("Sq", "P"):
            raise ContractViolation(f"unknown operation family {self.family!r}")
        if self.family == "Sq" and self.prime != 2:
            raise ContractViolation("Sq operations live at the prime 2")
        if self.family == "P" and self.prime == 2:
            raise ContractViolation("power operations live at odd primes")

    @property
    def shift(self) -> int:
        return self.k if self.family == "Sq" else 2 * self.k * (self.prime - 1)

    @property
    def label(self) -> str:
        if self.family == "Sq":
            return f"Sq^{self.k}"
        return f"P^{self.k} (p={self.prime})"


# ---------------------------------------------------------------------------
# classifying-space models


@dataclass(frozen=True)
class TorusModel:
    """Classifying-space cohomology presented through torus variables.

    Classes are e_i of the variables (class_power 1) or of their squares
    (class_power 2); kill_e1 encodes the vanishing first class of the
    special orthogonal convention.
    """

    group: str
    rank: int
    var_degree: int
    class_power: int
    class_prefix: str
    kill_e1: bool = False

    def class_degree(self, i: int) -> int:
        return self.var_degree * self.class_power * i

    def class_names(self) -> tuple:
        start = 2 if self.kill_e1 else 1
        return tuple(f"{self.class_prefix}{i}" for i in range(start, self.rank + 1))

    def class_index(self, name: str) -> int:
        if not name.startswith(self.class_prefix):
            raise LookupError(f"unknown class {name!r} in the {self.group}({self.rank}) model")
        try:
            i = int(name[len(self.class_prefix) :])
        except ValueError:
            raise LookupError(f"unknown class {name!r}") from None
        start = 2 if self.kill_e1 else 1
        if not start <= i <= self.rank:
            raise LookupError(f"no class {name!r} at rank {self.rank}")
        return i


_GROUPS = {
    "so": dict(var_degree=1, class_power=1, class_prefix="w", kill_e1=True),
    "su": dict(var_degree=2, class_power=1, class_prefix="c", kill_e1=False),
    "sp": dict(var_degree=2, class_power=2, class_prefix="q", kill_e1=False),
    "spin9": dict(var_degree=2, class_power=2, class_prefix="p", kill_e1=False),
    "psp4": dict(var_degree=2, class_power=2, class_prefix="q", kill_e1=False),
}
_FIXED_RANK = {"spin9": 4, "psp4": 4}


def torus_model(group: str, rank: int) -> TorusModel:
    if group not in _GROUPS:
        raise LookupError(f"unknown group tag {group!r}; expected one of {sorted(_GROUPS)}")
    fixed = _FIXED_RANK.get(group)
    if fixed is not None and rank != fixed:
        raise LookupError(f"{group} model has fixed rank {fixed}")
    if rank < 1:
        raise LookupError("rank must be positive")
    return TorusModel(group=group, rank=rank, **_GROUPS[group])


@lru_cache(maxsize=None)
def class_algebra(model: TorusModel, prime: int) -> Algebra:
    gens = [
        Generator(name, model.class_degree(model.class_index(name)))
        for name in model.class_names()
    ]
    return Algebra(FieldSpec(prime), gens)


def _classes_from_e(model: TorusModel, e_terms: dict, prime: int) -> Poly:
    alg = class_algebra(model, prime)
    names = model.class_names()
    offset = 2 if model.kill_e1 else 1
    out = alg.zero()
    for e_exps, coeff in e_terms.items():
        if model.kill_e1 and e_exps[0]:
            continue  # w1 = 0
        exps = [0] * len(names)
        for k, mult in enumerate(e_exps, start=1):
            if mult and k >= offset:
                exps[k - offset] = mult
        out = out + alg.monomial(tuple(exps), coeff)
    return out


def _op_compatible(model: TorusModel, op: SteenrodOp) -> None:
    if op.family == "P" and model.var_degree != 2:
        raise ContractViolation(
            f"power operations are not defined on the degree-1 variables of the {model.group} model"
        )


@lru_cache(maxsize=None)
def total_char_class_operation(model: TorusModel, class_name: str, family: str, prime: int) -> Poly:
    """Full total operation of a characteristic class, in characteristic classes."""
    i = model.class_index(class_name)
    if family == "P" and model.var_degree != 2:
        raise ContractViolation("power operations need degree-2 variables")
    f = elementary(model.rank, i, power=model.class_power)
    total = total_operation_on_torus(f, family, prime, model.var_degree)
    if model.class_power == 2:
        # odd-exponent terms can only carry coefficients divisible by p
        total = {e: c % prime for e, c in total.items() if c % prime}
        collapsed = {}
        for exps, c in total.items():
            if any(e % 2 for e in exps):
                raise ContractViolation("expected even exponents in a squared-class model")
            s = tuple(e // 2 for e in exps)
            collapsed[s] = collapsed.get(s, 0) + c
        total = collapsed
    e_terms = express_symmetric(total, model.rank)
    return _classes_from_e(model, e_terms, prime)


def char_class_operation(model: TorusModel, class_name: str, op: SteenrodOp) -> Poly:
    """One operation component on a characteristic class, with rank truncation."""
    _op_compatible(model, op)
    i = model.class_index(class_name)
    total = total_char_class_operation(model, class_name, op.family, op.prime)
    return total.degree_component(model.class_degree(i) + op.shift)


# ---------------------------------------------------------------------------
# suspension models


class SuspensionModel:
    """Cohomology of a suspension: graded classes, zero products, stable actions.

    `actions` maps (class, family, k) to a tuple of (coeff, class) pairs; all
    absent keys act by zero, and the k = 0 component is the identity.
    """

    def __init__(self, base: str, classes, actions: dict, citation: str = ""):
        self.base = base
        self.classes = tuple(classes)
        self.degree = dict(self.classes)
        self.actions = dict(actions)
        self.citation = citation

    def act(self, class_name: str, family: str, k: int) -> tuple:
        if k == 0:
            return ((1, class_name),)
        return self.actions.get((class_name, family, k), ())

    def replace(self, classes=None, actions=None) -> "SuspensionModel":
        return SuspensionModel(
            self.base,
            self.classes if classes is None else classes,
            self.actions if actions is None else actions,
            self.citation,
        )


@lru_cache(maxsize=None)
def suspension_rp(m: int) -> SuspensionModel:
    """Sigma RP^m: classes Sigma u^j (degree j+1), Sq^k Sigma u^j = C(j,k) Sigma u^{j+k}."""
    classes = [(f"su{j}", j + 1) for j in range(1, m + 1)]
    actions = {}
    for j in range(1, m + 1):
        for k in range(1, m - j + 1):
            if binomial(j, k) % 2:
                actions[(f"su{j}", "Sq", k)] = ((1, f"su{j + k}"),)
    return SuspensionModel(f"Sigma RP^{m}", classes, actions, citation="Cartan iteration of Sq u = u + u^2")


@lru_cache(maxsize=None)
def suspension_quasi_projective(m: int, prime: int) -> SuspensionModel:
    """Sigma Q_m: classes Sigma x_i (degree 4i); actions induced from BSp(m)."""
    classes = [(f"sx{i}", 4 * i) for i in range(1, m + 1)]
    actions = {}
    model = torus_model("sp", m)
    for i in range(1, m + 1):
        if prime == 2:
            for c in range(1, m - i + 1):
                coeff = char_class_operation(model, f"q{i}", SteenrodOp("Sq", 4 * c, 2))
                gamma = coeff.coefficient(
                    tuple(1 if j == i + c - 1 else 0 for j in range(m))
                )
                if gamma:
                    actions[(f"sx{i}", "Sq", 4 * c)] = ((int(gamma), f"sx{i + c}"),)
        else:
            half = (prime - 1) // 2
            kmax = (m - i) // half if half else 0
            for k in range(1, kmax + 1):
                coeff = char_class_operation(model, f"q{i}", SteenrodOp("P", k, prime))
                tgt = i + k * half
                gamma = coeff.coefficient(
                    tuple(1 if j == tgt - 1 else 0 for j in range(m))
                )
                if gamma:
                    actions[(f"sx{i}", "P", k)] = ((int(gamma), f"sx{tgt}"),)
    return SuspensionModel(
        f"Sigma Q_{m}",
        classes,
        actions,
        citation="stable action transported from mod-p operations on symplectic classes",
    )


@lru_cache(maxsize=None)
def suspension_sphere(k: int) -> SuspensionModel:
    return SuspensionModel(f"S^{k}", [(f"s{k}", k)], {}, citation="single cell")


def suspension_moore() -> SuspensionModel:
    """Sigma RP^2 = S^2 cup_2 e^3: bottom Bockstein is the only action."""
    return SuspensionModel(
        "S^2 cup_2 e^3",
        [("u2", 2), ("u3", 3)],
        {("u2", "Sq", 1): ((1, "u3"),)},
        citation="Bockstein of the mod-2 Moore space",
    )


def evaluate_on_suspension(model: SuspensionModel, class_name: str, op: SteenrodOp) -> tuple:
    """Stable action of one operation component; () means zero."""
    if class_name not in model.degree:
        return ()
    return model.act(class_name, op.family, op.k)


def product_slice_vanishes(
    model_a: SuspensionModel, model_b: SuspensionModel, op: SteenrodOp, degree: int
) -> tuple:
    """Check theta = 0 on the full degree slice of a product of suspensions.

    Returns (basis, violations): basis is the Kunneth basis of the slice, and
    violations lists (element, nonzero image terms) after Cartan expansion.
    """
    unit = ("1", 0)
    cls_a = [unit] + list(model_a.classes)
    cls_b = [unit] + list(model_b.classes)
    basis = [
        (na, nb)
        for na, da in cls_a
        for nb, db in cls_b
        if da + db == degree and not (na == "1" and nb == "1")
    ]
    p = op.prime
    violations = []
    for na, nb in basis:
        acc: dict = {}
        for j in range(op.k + 1):
            if na == "1":
                left = ((1, "1"),) if j == 0 else ()
            else:
                left = model_a.act(na, op.family, j)
            if nb == "1":
                right = ((1, "1"),) if op.k - j == 0 else ()
            else:
                right = model_b.act(nb, op.family, op.k - j)
            for c1, n1 in left:
                for c2, n2 in right:
                    key = (n1, n2)
                    acc[key] = (acc.get(key, 0) + c1 * c2) % p
        nonzero = {k: v for k, v in acc.items() if v}
        if nonzero:
            violations.append(((na, nb), nonzero))
    return basis, violations


# ---------------------------------------------------------------------------
# the six-condition criterion


@dataclass(frozen=True)
class SteenrodCriterionInstance:
    """Everything the six-condition Whitehead-product check consumes.

    a is detected by the first map (table pullback_a, source source_a) and b by
    the second; `diagonal` records that the two maps, sources and classes are
    literally equal (the odd-primary equal-degree case).
    """

    space: str
    presentation: Presentation
    action: dict  # generator name -> total operation Poly
    action_provenance: str
    action_citation: str
    prime: int
    op: SteenrodOp
    a: str
    b: str
    x: str
    source_a: SuspensionModel
    source_b: SuspensionModel
    pullback_a: dict  # generator name -> suspension class name, or None for zero
    pullback_b: dict
    diagonal: bool = False
    pullback_citation: str = ""


@dataclass(frozen=True)
class ClassifyingCrossCheck:
    """Recompute a recorded space-level action from the classifying space."""

    model: TorusModel
    class_name: str
    pullback: dict  # classifying class name -> space Poly (recorded images)
    citation: str = ""


def _gen_degree(pres: Presentation, name: str) -> int:
    return pres.algebra.generators[pres.algebra.index[name]].degree


def _product_monomial(pres: Presentation, a: str, b: str):
    alg = pres.algebra
    n = len(alg.generators)
    exps = [0] * n
    exps[alg.index[a]] += 1
    exps[alg.index[b]] += 1
    i = alg.index[a]
    if a == b and alg.sqz[i]:
        return None
    return tuple(exps)


def _run_crosscheck(inst: SteenrodCriterionInstance, cc: ClassifyingCrossCheck, theta_x: Poly):
    """Compare the recorded action against the splitting-principle computation."""
    entries = []
    computed = char_class_operation(cc.model, cc.class_name, inst.op)
    calg = computed.algebra
    space_alg = inst.presentation.algebra
    resolved = space_alg.zero()
    surfaced = []
    for exps, coeff in sorted(computed.terms.items()):
        image = space_alg.unit().scale(coeff)
        status = "resolved"
        for i, e in enumerate(exps):
            if e == 0:
                continue
            cname = calg.generators[i].name
            img = cc.pullback.get(cname)
            if img is None:
                cdeg = calg.generators[i].degree
                if graded_dimension(inst.presentation, cdeg) == 0:
                    img = space_alg.zero()  # restriction killed by an empty degree
                else:
                    status = "unresolved"
                    break
            for _ in range(e):
                image = image * img
        if status == "unresolved":
            surfaced.append(monomial_text(calg, exps) if coeff == 1 else f"{coeff}*{monomial_text(calg, exps)}")
        else:
            resolved = resolved + image
    entries.append(
        TranscriptEntry(
            MACHINE,
            "info",
            f"classifying-space cross-check: {inst.op.label} {cc.class_name} = {poly_to_text(computed)} "
            f"in the {cc.model.group}({cc.model.rank}) model",
        )
    )
    if surfaced:
        entries.append(
            TranscriptEntry(
                MACHINE,
                "info",
                "cross-check terms with unrecorded restriction images, surfaced unresolved: "
                + ", ".join(surfaced),
                citation=cc.citation,
            )
        )
    if resolved == theta_x:
        entries.append(
            TranscriptEntry(
                MACHINE,
                "pass",
                "resolved part of the cross-check equals the recorded action"
                + (" modulo the surfaced terms" if surfaced else ""),
                citation=cc.citation,
            )
        )
    else:
        entries.append(
            TranscriptEntry(
                MACHINE,
                "fail",
                f"cross-check discrepancy reported: resolved image {poly_to_text(resolved)} "
                f"differs from recorded action {poly_to_text(theta_x)}",
                citation=cc.citation,
            )
        )
    return entries


def check_steenrod_criterion(
    inst: SteenrodCriterionInstance, crosscheck: Optional[ClassifyingCrossCheck] = None
):
    """Mechanically verify the six conditions; certificate or first refusal."""
    pres = inst.presentation
    da, db, dx = (_gen_degree(pres, n) for n in (inst.a, inst.b, inst.x))
    if dx + inst.op.shift != da + db:
        raise ContractViolation(
            f"degree mismatch: |theta(x)| = {dx + inst.op.shift} but |a| + |b| = {da + db}"
        )
    if inst.op.prime != inst.prime:
        raise ContractViolation("operation prime differs from the instance prime")
    transcript = [
        TranscriptEntry(
            MACHINE,
            "pass",
            f"degrees consistent: |{inst.op.label} {inst.x}| = {dx + inst.op.shift} = |{inst.a}| + |{inst.b}|",
        )
    ]

    def refuse(cond: str, why: str) -> Refusal:
        transcript.append(TranscriptEntry(MACHINE, "fail", why))
        return Refusal(inst.space, STEENROD, f"condition ({cond}): {why}", tuple(transcript))

    # (1) non-zero pullbacks of a and b
    img_a = inst.pullback_a.get(inst.a)
    if img_a is None:
        return refuse("1", f"{inst.a} pulls back to zero on {inst.source_a.base}")
    if inst.source_a.degree.get(img_a) != da:
        return refuse("1", f"pullback table sends {inst.a} to {img_a} of the wrong degree")
    img_b = inst.pullback_b.get(inst.b)
    if img_b is None:
        return refuse("1", f"{inst.b} pulls back to zero on {inst.source_b.base}")
    if inst.source_b.degree.get(img_b) != db:
        return refuse("1", f"pullback table sends {inst.b} to {img_b} of the wrong degree")
    transcript.append(
        TranscriptEntry(
            MACHINE,
            "pass",
            f"(1) {inst.a} restricts to {img_a} on {inst.source_a.base}; "
            f"{inst.b} restricts to {img_b} on {inst.source_b.base}",
            citation=inst.pullback_citation,
        )
    )

    # (2) at p = 2 the second map must kill a
    if inst.prime == 2:
        if inst.pullback_b.get(inst.a) is not None:
            return refuse("2", f"{inst.a} does not pull back to zero on {inst.source_b.base}")
        transcript.append(
            TranscriptEntry(MACHINE, "pass", f"(2) {inst.a} restricts to zero on {inst.source_b.base}")
        )

    # (3) equal odd-primary degrees force the diagonal instance
    if inst.prime != 2 and da == db:
        if not inst.diagonal:
            return refuse("3", "|a| = |b| at an odd prime requires equal sources, maps and classes")
        transcript.append(
            TranscriptEntry(
                MACHINE, "pass", "(3) |a| = |b| at an odd prime with identical sources, maps and classes"
            )
        )

    # (4) one-dimensional indecomposables in degree |a|
    qdim = indecomposable_dimension(pres, da)
    if qdim != 1:
        return refuse("4", f"indecomposable quotient has dimension {qdim} != 1 in degree {da}")
    transcript.append(
        TranscriptEntry(
            MACHINE, "pass", f"(4) indecomposable quotient of H^{da}({inst.space}) has dimension 1"
        )
    )

    # (5) theta(x) decomposable with a non-zero (a, b) coefficient
    total = inst.action.get(inst.x)
    if total is None:
        raise DataIncomplete(f"no operation action recorded for {inst.x} on {inst.space}")
    theta_x = total.degree_component(dx + inst.op.shift)
    if not is_decomposable(theta_x):
        return refuse("5", f"{inst.op.label} {inst.x} = {poly_to_text(theta_x)} is not decomposable")
    mono = _product_monomial(pres, inst.a, inst.b)
    coeff = theta_x.coefficient(mono) if mono is not None else 0
    if not coeff:
        return refuse(
            "5",
            f"{inst.op.label} {inst.x} = {poly_to_text(theta_x)} has no {inst.a}*{inst.b} term",
        )
    transcript.append(
        TranscriptEntry(
            MACHINE if inst.action_provenance == "derived" else ASSERTED,
            "pass",
            f"(5) {inst.op.label} {inst.x} = {poly_to_text(theta_x)} is decomposable and the "
            f"{inst.a}*{inst.b} coefficient is {coeff}",
            citation=inst.action_citation,
        )
    )

    # (6) theta kills the whole degree-|x| slice of the product of suspensions
    basis, violations = product_slice_vanishes(inst.source_a, inst.source_b, inst.op, dx)
    basis_text = ", ".join(f"{a}(x){b}" for a, b in basis) or "(empty)"
    if violations:
        (ca, cb), img = violations[0]
        img_text = ", ".join(f"{v}*{m}(x){n}" for (m, n), v in sorted(img.items()))
        transcript.append(
            TranscriptEntry(
                MACHINE,
                "fail",
                f"(6) {inst.op.label}({ca}(x){cb}) = {img_text} != 0 in "
                f"H^*({inst.source_a.base} x {inst.source_b.base})",
            )
        )
        return Refusal(
            inst.space,
            STEENROD,
            f"condition (6): {inst.op.label} does not vanish on H^{dx} of "
            f"{inst.source_a.base} x {inst.source_b.base} (element {ca}(x){cb})",
            tuple(transcript),
        )
    transcript.append(
        TranscriptEntry(
            MACHINE,
            "pass",
            f"(6) {inst.op.label} vanishes on the degree-{dx} slice of "
            f"H^*({inst.source_a.base} x {inst.source_b.base}); Kunneth basis: {basis_text}",
        )
    )

    if crosscheck is not None:
        transcript.extend(_run_crosscheck(inst, crosscheck, theta_x))

    witness = (
        ("operation", inst.op.label),
        ("x", inst.x),
        ("a", f"{inst.a} detected on {inst.source_a.base}"),
        ("b", f"{inst.b} detected on {inst.source_b.base}"),
        ("product", f"[{inst.source_a.base} -> {inst.space}, {inst.source_b.base} -> {inst.space}] != 0"),
    )
    return Certificate(inst.space, STEENROD, witness, tuple(transcript))
