"""Field assignments per type, the loop-presentation relation suite, and the
symbolic verifier.

``realize_fields`` instantiates the published field tables (with a handful of
corrections that the relation checks force; see data/source_errata.json).
``relation_suite`` enumerates every defining relation of the loop-like
presentation for one instance, ``verify`` checks each one through the Wick
engine and classifies the residual as exact, mod-null (all residual monomials
carry a cbar factor and the central part vanishes) or fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Sequence, Tuple

from .scalars import GaussianRational, ZERO, ONE, I, HALF
from .rootdata import RootDatum, EVEN, ODD, serre_exponent, self_bracket_imposed, \
    VANISHING, DOUBLE, FOLDED
from .oscillator import GeneratorSet, FieldSymbol, COMBINATION, IDENTIFIED
from .wick import (LocalField, DistributionExpr, bracket_quadratic,
                   bracket_nested, Monomial)

EXACT = "exact"
MOD_NULL = "mod_null"
FAIL = "fail"


class LevelInconsistencyError(ValueError):
    pass


@dataclass
class FieldAssignment:
    gens: GeneratorSet
    xs_plus: Tuple[LocalField, ...]
    xs_minus: Tuple[LocalField, ...]
    alphas: Tuple[LocalField, ...]

    @property
    def datum(self) -> RootDatum:
        return self.gens.datum

    def x(self, i: int, sign: int) -> LocalField:
        return self.xs_plus[i] if sign > 0 else self.xs_minus[i]


def realize_fields(type_tag: str, m: int, n: int,
                   beta_model: str = COMBINATION,
                   ghost_norm: GaussianRational = GaussianRational(-2)
                   ) -> FieldAssignment:
    gens = GeneratorSet(type_tag, m, n, beta_model, ghost_norm)
    builder = {"A": _fields_a, "B": _fields_b, "C": _fields_c, "D": _fields_d}
    xs_plus, xs_minus, alphas = builder[type_tag](gens)
    assignment = FieldAssignment(gens, tuple(xs_plus), tuple(xs_minus),
                                 tuple(alphas))
    datum = gens.datum
    for i in range(datum.r + 1):
        for lf in (assignment.xs_plus[i], assignment.xs_minus[i]):
            parity = lf.parity()
            expected = 1 if datum.parities[i] == ODD else 0
            assert parity == expected, (
                f"x_{i} parity {parity} != root parity {expected}")
        assert assignment.alphas[i].parity() in (0, None)
    return assignment


def _field(gens: GeneratorSet, *entries) -> LocalField:
    """Build a LocalField from (coeff, symbol, symbol) with beta expanded."""
    expanded = []
    for coeff, u, v in entries:
        for cu, u2 in gens.expand_symbol(u):
            for cv, v2 in gens.expand_symbol(v):
                expanded.append((coeff * cu * cv, u2, v2))
    return LocalField.of(expanded)


def _fields_a(gens: GeneratorSet):
    m, n = gens.m, gens.n
    r = gens.datum.r
    eps = lambda i, s=False: gens.symbol("eps", i, s)
    dl = lambda j, s=False: gens.symbol("del", j, s)
    bsym = FieldSymbol("beta", 0, False, 0)  # marker; _field expands it
    xp: List[LocalField] = [LocalField.zero()] * (r + 1)
    xm: List[LocalField] = [LocalField.zero()] * (r + 1)
    al: List[LocalField] = [LocalField.zero()] * (r + 1)
    xp[0] = _field(gens, (I, dl(n + 1), bsym.star()))
    xm[0] = _field(gens, (I, bsym, dl(n + 1, True)))
    al[0] = _field(gens, (ONE, dl(n + 1), dl(n + 1, True)),
                   (-ONE, bsym, bsym.star()))
    for i in range(1, m + 1):
        xp[i] = _field(gens, (I, eps(i), eps(i + 1, True)))
        # published table repeats x_i^+ here; the corrected partner is forced
        # by relation 4' reproducing alpha_i
        xm[i] = _field(gens, (I, eps(i + 1), eps(i, True)))
        al[i] = _field(gens, (ONE, eps(i), eps(i, True)),
                       (-ONE, eps(i + 1), eps(i + 1, True)))
    xp[m + 1] = _field(gens, (ONE, eps(m + 1), dl(1, True)))
    xm[m + 1] = _field(gens, (ONE, eps(m + 1, True), dl(1)))
    al[m + 1] = _field(gens, (ONE, eps(m + 1), eps(m + 1, True)),
                       (-ONE, dl(1), dl(1, True)))
    for i in range(m + 2, r + 1):
        a = i - m - 1
        xp[i] = _field(gens, (ONE, dl(a), dl(a + 1, True)))
        xm[i] = _field(gens, (ONE, dl(a, True), dl(a + 1)))
        al[i] = _field(gens, (ONE, dl(a), dl(a, True)),
                       (-ONE, dl(a + 1), dl(a + 1, True)))
    return xp, xm, al


def _fields_b(gens: GeneratorSet):
    m, n = gens.m, gens.n
    r = gens.datum.r
    eps = lambda i, s=False: gens.symbol("eps", i, s)
    dl = lambda j, s=False: gens.symbol("del", j, s)
    bsym = FieldSymbol("beta", 0, False, 0)
    e = gens.symbol("e")
    xp = [LocalField.zero()] * (r + 1)
    xm = [LocalField.zero()] * (r + 1)
    al = [LocalField.zero()] * (r + 1)
    xp[0] = _field(gens, (HALF, bsym.star(), bsym.star()))
    xm[0] = _field(gens, (HALF, bsym, bsym))
    al[0] = _field(gens, (GaussianRational(-2), bsym, bsym.star()))
    for i in range(1, n):
        xp[i] = _field(gens, (ONE, eps(i), eps(i + 1, True)))
        xm[i] = _field(gens, (-ONE, eps(i + 1), eps(i, True)))
        al[i] = _field(gens, (ONE, eps(i), eps(i, True)),
                       (-ONE, eps(i + 1), eps(i + 1, True)))
    if m == 0:
        xp[n] = _field(gens, (ONE, eps(n), e))
        xm[n] = _field(gens, (ONE, eps(n, True), e))
        al[n] = _field(gens, (ONE, eps(n), eps(n, True)))
        return xp, xm, al
    xp[n] = _field(gens, (ONE, eps(n), dl(1, True)))
    xm[n] = _field(gens, (ONE, dl(1), eps(n, True)))
    al[n] = _field(gens, (ONE, eps(n), eps(n, True)),
                   (-ONE, dl(1), dl(1, True)))
    for i in range(n + 1, n + m):
        a = i - n
        xp[i] = _field(gens, (ONE, dl(a), dl(a + 1, True)))
        xm[i] = _field(gens, (ONE, dl(a, True), dl(a + 1)))
        al[i] = _field(gens, (ONE, dl(a), dl(a, True)),
                       (-ONE, dl(a + 1), dl(a + 1, True)))
    xp[n + m] = _field(gens, (ONE, dl(m), e))
    xm[n + m] = _field(gens, (ONE, dl(m, True), e))
    # published table labels this row i=n; it is the i=n+m entry
    al[n + m] = _field(gens, (ONE, dl(m), dl(m, True)))
    return xp, xm, al


def _fields_d(gens: GeneratorSet):
    m, n = gens.m, gens.n
    r = gens.datum.r
    dl = lambda j, s=False: gens.symbol("del", j, s)
    eps = lambda i, s=False: gens.symbol("eps", i, s)
    bsym = FieldSymbol("beta", 0, False, 0)
    xp = [LocalField.zero()] * (r + 1)
    xm = [LocalField.zero()] * (r + 1)
    al = [LocalField.zero()] * (r + 1)
    xp[0] = _field(gens, (HALF, bsym.star(), bsym.star()))
    xm[0] = _field(gens, (HALF, bsym, bsym))
    al[0] = _field(gens, (GaussianRational(-2), bsym, bsym.star()))
    for i in range(1, n):
        xp[i] = _field(gens, (ONE, eps(i), eps(i + 1, True)))
        xm[i] = _field(gens, (-ONE, eps(i + 1), eps(i, True)))
        al[i] = _field(gens, (ONE, eps(i), eps(i, True)),
                       (-ONE, eps(i + 1), eps(i + 1, True)))
    xp[n] = _field(gens, (ONE, eps(n), dl(1, True)))
    xm[n] = _field(gens, (ONE, dl(1), eps(n, True)))
    al[n] = _field(gens, (ONE, eps(n), eps(n, True)),
                   (-ONE, dl(1), dl(1, True)))
    for i in range(n + 1, n + m):
        a = i - n
        xp[i] = _field(gens, (ONE, dl(a), dl(a + 1, True)))
        xm[i] = _field(gens, (ONE, dl(a, True), dl(a + 1)))
        al[i] = _field(gens, (ONE, dl(a), dl(a, True)),
                       (-ONE, dl(a + 1), dl(a + 1, True)))
    xp[n + m] = _field(gens, (ONE, dl(m - 1), dl(m)))
    xm[n + m] = _field(gens, (ONE, dl(m - 1, True), dl(m, True)))
    al[n + m] = _field(gens, (ONE, dl(m - 1), dl(m - 1, True)),
                       (ONE, dl(m), dl(m, True)))
    return xp, xm, al


def _fields_c(gens: GeneratorSet):
    n = gens.n
    r = gens.datum.r
    eps = lambda s=False: gens.symbol("eps", 1, s)
    dl = lambda j, s=False: gens.symbol("del", j, s)
    bsym = FieldSymbol("beta", 0, False, 0)
    xp = [LocalField.zero()] * (r + 1)
    xm = [LocalField.zero()] * (r + 1)
    al = [LocalField.zero()] * (r + 1)
    xp[0] = _field(gens, (ONE, bsym.star(), eps(True)))
    xm[0] = _field(gens, (ONE, bsym, eps()))
    # published table carries the opposite sign on the eps term of alpha_0 and
    # alpha_1; relations 3'/4' force these
    al[0] = _field(gens, (-ONE, eps(), eps(True)),
                   (-ONE, bsym, bsym.star()))
    xp[1] = _field(gens, (ONE, eps(), dl(1, True)))
    xm[1] = _field(gens, (ONE, dl(1), eps(True)))
    al[1] = _field(gens, (ONE, eps(), eps(True)),
                   (-ONE, dl(1), dl(1, True)))
    for i in range(2, n + 1):
        xp[i] = _field(gens, (I, dl(i - 1), dl(i, True)))
        xm[i] = _field(gens, (I, dl(i), dl(i - 1, True)))
        al[i] = _field(gens, (ONE, dl(i - 1), dl(i - 1, True)),
                       (-ONE, dl(i), dl(i, True)))
    xp[n + 1] = _field(gens, (HALF, dl(n), dl(n)))
    xm[n + 1] = _field(gens, (HALF, dl(n, True), dl(n, True)))
    al[n + 1] = _field(gens, (GaussianRational(2), dl(n), dl(n, True)))
    return xp, xm, al


# ---------------------------------------------------------------------------
# relation templates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationTemplate:
    id: str
    kind: str  # "2" | "3" | "4x" | "4d" | "5self" | "5serre"
    i: int
    j: int = -1
    sign: int = 1
    depth: int = 1


def relation_suite(datum: RootDatum, depth_cap: int = 6) -> List[RelationTemplate]:
    """Every check of the loop presentation for one instance.

    The self-bracket [x_i, x_i] = 0 is only emitted where it is actually a
    defining relation (not for an odd non-isotropic node whose doubled root
    exists, i.e. the tail of B(0,n)).
    """
    out: List[RelationTemplate] = []
    rng = range(datum.r + 1)
    for i in rng:
        for j in rng:
            out.append(RelationTemplate(f"2'({i},{j})", "2", i, j))
    for i in rng:
        for j in rng:
            for sign, tag in ((1, "+"), (-1, "-")):
                out.append(RelationTemplate(f"3'{tag}({i},{j})", "3", i, j, sign))
    for i in rng:
        for j in rng:
            if i == j:
                out.append(RelationTemplate(f"4'({i},{i})", "4d", i, i))
            else:
                out.append(RelationTemplate(f"4'({i},{j})", "4x", i, j))
    for i in rng:
        if self_bracket_imposed(datum, i):
            for sign, tag in ((1, "+"), (-1, "-")):
                out.append(RelationTemplate(f"5'self{tag}({i})", "5self", i, i, sign))
    for i in rng:
        for j in rng:
            if i == j:
                continue
            template = serre_exponent(datum, i, j)
            if template.depth > depth_cap:
                raise ValueError(
                    f"serre depth {template.depth} exceeds cap {depth_cap}")
            for sign, tag in ((1, "+"), (-1, "-")):
                out.append(RelationTemplate(
                    f"5'{template.kind}{tag}({i},{j};d={template.depth})",
                    "5serre", i, j, sign, template.depth))
    return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class RelationCheck:
    id: str
    status: str
    lhs: DistributionExpr
    rhs: DistributionExpr
    residual: DistributionExpr

    def as_dict(self) -> dict:
        return {"id": self.id, "status": self.status,
                "residual": self.residual.render()}


def monomial_in_null_ideal(mono: Monomial) -> bool:
    """Whether a quadratic monomial carries a cbar or cbar* factor."""
    return any(sym.family == "cbar" for sym in mono)


def classify_residual(expr: DistributionExpr) -> str:
    """exact / mod_null / fail for a simplified residual.

    mod_null requires every field monomial to lie in the null ideal and every
    central coefficient (including all derivative-delta terms) to vanish.
    """
    if expr.is_zero():
        return EXACT
    for (_, _deltas), lf in expr.terms.items():
        if not lf.central.is_zero():
            return FAIL
        for mono in lf.terms:
            if not monomial_in_null_ideal(mono):
                return FAIL
    return MOD_NULL


def extract_level(assignment: FieldAssignment) -> GaussianRational:
    """The unique scalar K matching every derivative-delta coefficient of
    relations 2' and 4'; raises LevelInconsistencyError when they disagree."""
    datum = assignment.datum
    pairing = assignment.gens.pairing
    witnesses: List[Tuple[str, GaussianRational]] = []
    for i in range(datum.r + 1):
        for j in range(datum.r + 1):
            target = GaussianRational(
                datum.simple_roots[i].form(datum.simple_roots[j]))
            if target.is_zero():
                continue
            lhs = bracket_quadratic(pairing, assignment.alphas[i],
                                    assignment.alphas[j])
            witnesses.append((f"2'({i},{j})",
                              lhs.derivative_delta_coefficient() / target))
    for i in range(datum.r + 1):
        factor = _diagonal_factor(datum, i)
        lhs = bracket_quadratic(pairing, assignment.xs_plus[i],
                                assignment.xs_minus[i])
        witnesses.append((f"4'({i},{i})",
                          lhs.derivative_delta_coefficient() / factor))
    if not witnesses:
        raise LevelInconsistencyError("no relation constrains the level")
    base_id, base = witnesses[0]
    for check_id, value in witnesses[1:]:
        if value != base:
            raise LevelInconsistencyError(
                f"level {base} from {base_id} conflicts with {value} "
                f"from {check_id}")
    return base


def _diagonal_factor(datum: RootDatum, i: int) -> GaussianRational:
    norm = datum.simple_roots[i].form(datum.simple_roots[i])
    if norm == 0:
        return GaussianRational(-1)
    return GaussianRational(-2) / GaussianRational(norm)


def _rhs_for(template: RelationTemplate, assignment: FieldAssignment,
             level: GaussianRational) -> DistributionExpr:
    datum = assignment.datum
    z, w = "z", "w"
    if template.kind == "2":
        target = GaussianRational(datum.simple_roots[template.i].form(
            datum.simple_roots[template.j])) * level
        if target.is_zero():
            return DistributionExpr.zero((z, w))
        return DistributionExpr((z, w), {(w, ((z, w, 1),)):
                                         LocalField(central=target)})
    if template.kind == "3":
        coeff = GaussianRational(datum.simple_roots[template.i].form(
            datum.simple_roots[template.j])) * template.sign
        target_field = assignment.x(template.j, template.sign).scale(coeff)
        if target_field.is_zero():
            return DistributionExpr.zero((z, w))
        return DistributionExpr((z, w), {(w, ((z, w, 0),)): target_field})
    if template.kind == "4x":
        return DistributionExpr.zero((z, w))
    if template.kind == "4d":
        factor = _diagonal_factor(datum, template.i)
        terms = {}
        alpha = assignment.alphas[template.i].scale(factor)
        if not alpha.is_zero():
            terms[(w, ((z, w, 0),))] = alpha
        central = factor * level
        if not central.is_zero():
            terms[(w, ((z, w, 1),))] = LocalField(central=central)
        return DistributionExpr((z, w), terms)
    if template.kind == "5self":
        return DistributionExpr.zero((z, w))
    if template.kind == "5serre":
        variables = tuple(f"z{k}" for k in range(1, template.depth + 1)) + (w,)
        return DistributionExpr.zero(variables)
    raise ValueError(f"unknown template kind {template.kind!r}")


def _lhs_for(template: RelationTemplate,
             assignment: FieldAssignment) -> DistributionExpr:
    pairing = assignment.gens.pairing
    if template.kind == "2":
        return bracket_quadratic(pairing, assignment.alphas[template.i],
                                 assignment.alphas[template.j])
    if template.kind == "3":
        return bracket_quadratic(pairing, assignment.alphas[template.i],
                                 assignment.x(template.j, template.sign))
    if template.kind in ("4x", "4d"):
        return bracket_quadratic(pairing, assignment.xs_plus[template.i],
                                 assignment.xs_minus[template.j])
    if template.kind == "5self":
        xi = assignment.x(template.i, template.sign)
        return bracket_quadratic(pairing, xi, xi)
    if template.kind == "5serre":
        xi = assignment.x(template.i, template.sign)
        xj = assignment.x(template.j, template.sign)
        expr = bracket_quadratic(pairing, xi, xj, z=f"z{template.depth}", w="w")
        for k in range(template.depth - 1, 0, -1):
            expr = bracket_nested(pairing, xi, f"z{k}", expr)
        return expr
    raise ValueError(f"unknown template kind {template.kind!r}")


def verify(assignment: FieldAssignment,
           suite: Optional[Sequence[RelationTemplate]] = None,
           level: Optional[GaussianRational] = None) -> List[RelationCheck]:
    """Run every template; failures are data, not exceptions."""
    if suite is None:
        suite = relation_suite(assignment.datum)
    if level is None:
        level = extract_level(assignment)
    checks = []
    for template in suite:
        lhs = _lhs_for(template, assignment)
        rhs = _rhs_for(template, assignment, level)
        residual = lhs - rhs
        checks.append(RelationCheck(template.id, classify_residual(residual),
                                    lhs, rhs, residual))
    return checks


# ---------------------------------------------------------------------------
# the central tower
# ---------------------------------------------------------------------------


@dataclass
class CentralTowerReport:
    image: LocalField
    nonzero: bool
    checks: List[RelationCheck]

    def as_dict(self) -> dict:
        return {
            "image": self.image.render(),
            "nonzero": self.nonzero,
            "checks": [c.as_dict() for c in self.checks],
        }


def central_tower(assignment: FieldAssignment) -> CentralTowerReport:
    """Form alpha_0 + sum theta_i alpha_i and check it brackets to zero.

    The image is the realized cbar direction: nonzero exactly in the
    combination model, where its brackets close modulo the null ideal.
    """
    datum = assignment.datum
    pairing = assignment.gens.pairing
    image = assignment.alphas[0]
    for coeff, alpha in zip(datum.theta_coeffs, assignment.alphas[1:]):
        image = image + alpha.scale(GaussianRational(coeff))
    checks: List[RelationCheck] = []
    zero = DistributionExpr.zero(("z", "w"))
    partners = [(f"cbar~x{i}+", assignment.xs_plus[i]) for i in range(datum.r + 1)]
    partners += [(f"cbar~x{i}-", assignment.xs_minus[i]) for i in range(datum.r + 1)]
    partners += [(f"cbar~alpha{i}", assignment.alphas[i]) for i in range(datum.r + 1)]
    for check_id, other in partners:
        lhs = bracket_quadratic(pairing, image, other)
        checks.append(RelationCheck(check_id, classify_residual(lhs),
                                    lhs, zero, lhs))
    return CentralTowerReport(image, not image.is_zero(), checks)


# ---------------------------------------------------------------------------
# whole-instance report
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    type_tag: str
    m: int
    n: int
    beta_model: str
    ghost_norm: GaussianRational
    level: GaussianRational
    checks: List[RelationCheck]
    tower: CentralTowerReport

    @property
    def counts(self) -> Dict[str, int]:
        out = {EXACT: 0, MOD_NULL: 0, FAIL: 0}
        for check in self.checks:
            out[check.status] += 1
        return out

    @property
    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "schema": "verify-report/1",
            "type": self.type_tag,
            "m": self.m,
            "n": self.n,
            "beta_model": self.beta_model,
            "ghost_norm": str(self.ghost_norm),
            "level": str(self.level),
            "counts": self.counts,
            "checks": [c.as_dict() for c in self.checks],
            "central_tower": self.tower.as_dict(),
        }


def run_verification(type_tag: str, m: int, n: int,
                     beta_model: str = COMBINATION,
                     ghost_norm: GaussianRational = GaussianRational(-2)
                     ) -> VerificationReport:
    assignment = realize_fields(type_tag, m, n, beta_model, ghost_norm)
    level = extract_level(assignment)
    checks = verify(assignment, level=level)
    tower = central_tower(assignment)
    return VerificationReport(type_tag, m, n, beta_model, ghost_norm,
                              level, checks, tower)
