"""Symbolic superbracket calculus for normally ordered quadratic free fields.

The value of a bracket is a :class:`DistributionExpr`: a finite sum of
(local field at a variable) x (product of formal delta factors).  Brackets of
quadratics are computed generically from the contraction table with Koszul
signs; since contractions are pure first-order poles, double contractions are
scalars and no field times-derivative-delta term can ever appear.  The
representation enforces that closure.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .scalars import GaussianRational, ZERO, ONE
from .oscillator import FieldSymbol

Monomial = Tuple[FieldSymbol, FieldSymbol]
Pairing = Callable[[FieldSymbol, FieldSymbol], GaussianRational]

# delta factor (a, b, j) stands for the j-th divided-power derivative, taken
# in the second slot, of delta(a - b); reversing slots costs (-1)^j
DeltaFactor = Tuple[str, str, int]
TermKey = Tuple[str, Tuple[DeltaFactor, ...]]


def normal_order(u: FieldSymbol, v: FieldSymbol) -> Tuple[int, Optional[Monomial]]:
    """Canonical form of :uv: as (sign, monomial); odd squares are zero."""
    if u == v and u.parity == 1:
        return 1, None
    if v.sort_key() < u.sort_key():
        sign = -1 if (u.parity and v.parity) else 1
        return sign, (v, u)
    return 1, (u, v)


class LocalField:
    """central + finite sum of canonical normally ordered quadratic monomials."""

    __slots__ = ("terms", "central")

    def __init__(self, terms: Optional[Dict[Monomial, GaussianRational]] = None,
                 central: GaussianRational = ZERO):
        cleaned = {}
        if terms:
            for mono, coeff in terms.items():
                if not coeff.is_zero():
                    cleaned[mono] = coeff
        self.terms = cleaned
        self.central = central

    @staticmethod
    def zero() -> "LocalField":
        return LocalField()

    @staticmethod
    def of(entries: Iterable[Tuple[GaussianRational, FieldSymbol, FieldSymbol]],
           central: GaussianRational = ZERO) -> "LocalField":
        """Build from (coeff, u, v) entries, canonically reordering each :uv:."""
        terms: Dict[Monomial, GaussianRational] = {}
        for coeff, u, v in entries:
            sign, mono = normal_order(u, v)
            if mono is None:
                continue
            value = terms.get(mono, ZERO) + coeff * sign
            if value.is_zero():
                terms.pop(mono, None)
            else:
                terms[mono] = value
        return LocalField(terms, central)

    # -- algebra --------------------------------------------------------

    def __add__(self, other: "LocalField") -> "LocalField":
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            value = terms.get(mono, ZERO) + coeff
            if value.is_zero():
                terms.pop(mono, None)
            else:
                terms[mono] = value
        return LocalField(terms, self.central + other.central)

    def __sub__(self, other: "LocalField") -> "LocalField":
        return self + other.scale(GaussianRational(-1))

    def scale(self, factor: GaussianRational) -> "LocalField":
        if factor.is_zero():
            return LocalField.zero()
        return LocalField({m: c * factor for m, c in self.terms.items()},
                          self.central * factor)

    def map_symbols(self, expand: Callable[[FieldSymbol], Sequence[Tuple[GaussianRational, FieldSymbol]]]) -> "LocalField":
        """Substitute each symbol by a linear combination and recanonicalize."""
        entries = []
        for (u, v), coeff in self.terms.items():
            for cu, u2 in expand(u):
                for cv, v2 in expand(v):
                    entries.append((coeff * cu * cv, u2, v2))
        return LocalField.of(entries, self.central)

    def is_zero(self) -> bool:
        return not self.terms and self.central.is_zero()

    def is_central(self) -> bool:
        return not self.terms

    def parity(self) -> Optional[int]:
        """Common parity of the monomials; None for a purely central field."""
        parities = {(u.parity + v.parity) % 2 for u, v in self.terms}
        if not parities:
            return None
        if len(parities) > 1:
            raise ValueError("LocalField mixes parities")
        return parities.pop()

    def __eq__(self, other) -> bool:
        return (isinstance(other, LocalField) and self.terms == other.terms
                and self.central == other.central)

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.central))

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (u, v), coeff in sorted(
                self.terms.items(),
                key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())):
            parts.append(f"({coeff}):{u.render()} {v.render()}:")
        if not self.central.is_zero():
            parts.append(f"({self.central})")
        return " + ".join(parts)

    def __repr__(self):
        return f"LocalField({self.render()})"


# ---------------------------------------------------------------------------
# the generic quadratic bracket
# ---------------------------------------------------------------------------


def bracket_monomials(pairing: Pairing, left: Monomial, right: Monomial
                      ) -> Tuple[List[Tuple[GaussianRational, FieldSymbol, FieldSymbol]], GaussianRational]:
    """[:uv:(z), :xy:(w)] from contractions only.

    Returns (single-contraction entries evaluated at w, double-contraction
    scalar); the caller attaches delta(z-w) and d_w delta(z-w).  Signs are the
    Wick adjacency signs of the word u v x y: each transposition of two odd
    letters while extracting a contracted pair flips the sign.
    """
    u, v = left
    x, y = right
    pu, pv, px, py = u.parity, v.parity, x.parity, y.parity
    s1 = -1 if (px and pv) else 1                       # pull (u, x) together
    s2 = -1 if (py and (px + pv) % 2) else 1            # pull (u, y) together
    s3 = -1 if (pu and (pv + px) % 2) else 1            # pull (v, x) together
    s4 = -1 if ((pu * pv) + py * (px + pu)) % 2 else 1  # pull (v, y) together

    c_ux = pairing(u, x)
    c_uy = pairing(u, y)
    c_vx = pairing(v, x)
    c_vy = pairing(v, y)

    singles: List[Tuple[GaussianRational, FieldSymbol, FieldSymbol]] = []
    if not c_ux.is_zero():
        singles.append((c_ux * s1, v, y))
    if not c_uy.is_zero():
        singles.append((c_uy * s2, v, x))
    if not c_vx.is_zero():
        singles.append((c_vx * s3, u, y))
    if not c_vy.is_zero():
        singles.append((c_vy * s4, u, x))

    double = c_ux * c_vy * s1 + c_uy * c_vx * s2
    return singles, double


def bracket_fields(pairing: Pairing, a: LocalField, b: LocalField
                   ) -> Tuple[LocalField, GaussianRational]:
    """[A, B] split into (field part, derivative-delta scalar).

    Central summands of A and B drop out of the bracket.
    """
    entries: List[Tuple[GaussianRational, FieldSymbol, FieldSymbol]] = []
    double_total = ZERO
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            singles, double = bracket_monomials(pairing, ma, mb)
            scale = ca * cb
            for coeff, s1, s2 in singles:
                entries.append((scale * coeff, s1, s2))
            double_total = double_total + scale * double
    return LocalField.of(entries), double_total


# ---------------------------------------------------------------------------
# formal distribution expressions
# ---------------------------------------------------------------------------


class DistributionExpr:
    """Finite sum of (LocalField at var) x (product of delta factors).

    The variable tuple is ordered; the last variable is the anchor every
    delta chain resolves to.  Normal form: plain deltas connect each class
    member to the largest member of its class, fields are evaluated at that
    representative, and derivative-delta factors carry purely central fields.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str],
                 terms: Optional[Dict[TermKey, LocalField]] = None,
                 normalized: bool = False):
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "terms", dict(terms) if terms else {})
        if not normalized:
            self._normalize()

    def __setattr__(self, name, value):
        raise AttributeError("DistributionExpr is immutable; build a new one")

    # -- normal form ----------------------------------------------------

    def _normalize(self) -> None:
        order = {v: i for i, v in enumerate(self.variables)}
        merged: Dict[TermKey, LocalField] = {}
        for (eval_var, deltas), field in self.terms.items():
            if field.is_zero():
                continue
            sign = 1
            plain = [f for f in deltas if f[2] == 0]
            derivs = [f for f in deltas if f[2] > 0]

            parent: Dict[str, str] = {}

            def find(x: str) -> str:
                parent.setdefault(x, x)
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            def union(a: str, b: str) -> None:
                ra, rb = find(a), find(b)
                if ra != rb:
                    # keep the later variable as the class root
                    if order[ra] > order[rb]:
                        ra, rb = rb, ra
                    parent[ra] = rb

            for a, b, _ in plain:
                union(a, b)

            classes: Dict[str, List[str]] = {}
            for member in parent:
                classes.setdefault(find(member), []).append(member)
            new_deltas: List[DeltaFactor] = []
            for rep in sorted(classes, key=order.get):
                for member in sorted(classes[rep], key=order.get):
                    if member != rep:
                        new_deltas.append((member, rep, 0))

            for a, b, j in derivs:
                ra, rb = find(a), find(b)
                if ra == rb:
                    raise ValueError("delta factor collapsed onto one variable")
                if order[ra] > order[rb]:
                    ra, rb = rb, ra
                    if j % 2:
                        sign = -sign
                new_deltas.append((ra, rb, j))

            new_eval = find(eval_var)
            if derivs and not field.is_central():
                raise ValueError(
                    "internal error: field coefficient on a derivative delta")
            key = (new_eval, tuple(sorted(
                new_deltas, key=lambda f: (order[f[0]], order[f[1]], f[2]))))
            scaled = field if sign == 1 else field.scale(GaussianRational(-1))
            existing = merged.get(key)
            total = scaled if existing is None else existing + scaled
            if total.is_zero():
                merged.pop(key, None)
            else:
                merged[key] = total
        object.__setattr__(self, "terms", merged)

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(variables: Sequence[str]) -> "DistributionExpr":
        return DistributionExpr(variables, {}, normalized=True)

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "DistributionExpr") -> "DistributionExpr":
        if self.variables != other.variables:
            raise ValueError("cannot add expressions over different variables; "
                             "reorder first")
        terms = dict(self.terms)
        for key, field in other.terms.items():
            existing = terms.get(key)
            total = field if existing is None else existing + field
            if total.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = total
        return DistributionExpr(self.variables, terms, normalized=True)

    def __sub__(self, other: "DistributionExpr") -> "DistributionExpr":
        return self + other.scale(GaussianRational(-1))

    def scale(self, factor: GaussianRational) -> "DistributionExpr":
        if factor.is_zero():
            return DistributionExpr.zero(self.variables)
        return DistributionExpr(
            self.variables,
            {k: f.scale(factor) for k, f in self.terms.items()},
            normalized=True)

    def map_fields(self, fn: Callable[[LocalField], LocalField]) -> "DistributionExpr":
        return DistributionExpr(
            self.variables, {k: fn(f) for k, f in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, DistributionExpr)
                and self.variables == other.variables
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def rename(self, mapping: Dict[str, str],
               variables: Sequence[str]) -> "DistributionExpr":
        """Rename variables and re-normalize against the given order."""
        terms: Dict[TermKey, LocalField] = {}
        for (eval_var, deltas), field in self.terms.items():
            new_deltas = tuple((mapping.get(a, a), mapping.get(b, b), j)
                               for a, b, j in deltas)
            key = (mapping.get(eval_var, eval_var), new_deltas)
            terms[key] = terms.get(key, LocalField.zero()) + field
        return DistributionExpr(variables, terms)

    def reordered(self, variables: Sequence[str]) -> "DistributionExpr":
        """Same expression normalized against a permuted variable order."""
        if set(variables) != set(self.variables):
            raise ValueError("reordered needs a permutation of the variables")
        return DistributionExpr(variables, self.terms)

    def derivative_delta_coefficient(self) -> GaussianRational:
        """Total central coefficient of first-derivative single-delta terms."""
        total = ZERO
        for (eval_var, deltas), field in self.terms.items():
            if len(deltas) == 1 and deltas[0][2] == 1:
                total = total + field.central
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        order = {v: i for i, v in enumerate(self.variables)}
        parts = []
        for (eval_var, deltas), field in sorted(
                self.terms.items(),
                key=lambda kv: (tuple((order[a], order[b], j) for a, b, j in kv[0][1]),
                                order[kv[0][0]])):
            if field.is_central():
                text = f"({field.central})"
            else:
                text = f"[{field.render()}]({eval_var})"
            for a, b, j in deltas:
                if j == 0:
                    text += f" delta({a}-{b})"
                elif j == 1:
                    text += f" delta'({a}-{b})"
                else:
                    text += f" delta^({j})({a}-{b})"
            parts.append(text)
        return " + ".join(parts)

    def __repr__(self):
        return f"DistributionExpr({self.render()})"


def simplify(expr: DistributionExpr) -> DistributionExpr:
    """Idempotent normal form (construction already normalizes)."""
    return DistributionExpr(expr.variables, expr.terms)


# ---------------------------------------------------------------------------
# bracket entry points
# ---------------------------------------------------------------------------


def bracket_quadratic(pairing: Pairing, a: LocalField, b: LocalField,
                      z: str = "z", w: str = "w") -> DistributionExpr:
    """[A(z), B(w)] for quadratic local fields A, B."""
    field_part, double = bracket_fields(pairing, a, b)
    terms: Dict[TermKey, LocalField] = {}
    if not field_part.is_zero():
        terms[(w, ((z, w, 0),))] = field_part
    if not double.is_zero():
        terms[(w, ((z, w, 1),))] = LocalField(central=double)
    return DistributionExpr((z, w), terms)


def bracket_elementary(pairing: Pairing, u: FieldSymbol, v: FieldSymbol,
                       z: str = "z", w: str = "w") -> DistributionExpr:
    """[u(z), v(w)] = <u,v> delta(z-w) for degree-one fields."""
    value = pairing(u, v)
    terms: Dict[TermKey, LocalField] = {}
    if not value.is_zero():
        terms[(w, ((z, w, 0),))] = LocalField(central=value)
    return DistributionExpr((z, w), terms)


def bracket_nested(pairing: Pairing, a: LocalField, new_var: str,
                   expr: DistributionExpr) -> DistributionExpr:
    """[A(new_var), expr] distributing over the terms of expr."""
    if new_var in expr.variables:
        raise ValueError(f"variable {new_var!r} already in use")
    variables = (new_var,) + expr.variables
    terms: Dict[TermKey, LocalField] = {}

    def put(key: TermKey, field: LocalField) -> None:
        existing = terms.get(key)
        total = field if existing is None else existing + field
        if total.is_zero():
            terms.pop(key, None)
        else:
            terms[key] = total

    for (eval_var, deltas), field in expr.terms.items():
        if field.is_central():
            continue  # bracket against a central coefficient vanishes
        field_part, double = bracket_fields(pairing, a, field)
        if not field_part.is_zero():
            put((eval_var, deltas + ((new_var, eval_var, 0),)), field_part)
        if not double.is_zero():
            put((eval_var, deltas + ((new_var, eval_var, 1),)),
                LocalField(central=double))
    return DistributionExpr(variables, terms)


def bracket_expr_field(pairing: Pairing, expr: DistributionExpr,
                       b: LocalField, new_var: str) -> DistributionExpr:
    """[expr, B(new_var)] with the new variable appended as the anchor."""
    if new_var in expr.variables:
        raise ValueError(f"variable {new_var!r} already in use")
    variables = expr.variables + (new_var,)
    terms: Dict[TermKey, LocalField] = {}
    for (eval_var, deltas), field in expr.terms.items():
        if field.is_central():
            continue
        field_part, double = bracket_fields(pairing, field, b)
        if not field_part.is_zero():
            key = (new_var, deltas + ((eval_var, new_var, 0),))
            terms[key] = terms.get(key, LocalField.zero()) + field_part
        if not double.is_zero():
            key = (new_var, deltas + ((eval_var, new_var, 1),))
            terms[key] = terms.get(key, LocalField.zero()) + LocalField(central=double)
    return DistributionExpr(variables, terms)
