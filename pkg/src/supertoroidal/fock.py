"""Exact sparse oscillator action on the truncated Fock module.

This is the independent oracle for the symbolic verifier: every mode operator
acts exactly (locally finite, no truncation error) on states spanned by
creation modes, and the loop-presentation relations are re-checked at the
level of operators on a finite probe window.

Mode conventions.  Zero modes are classified as forced by the brackets:
unstarred zero modes annihilate the vacuum, starred zero modes create, and
the elementary brackets [u(k), v(l)] = <u,v> delta_{k,-l} hold exactly.  That
classification makes the starred labels a unit shift of a plain
negative-modes-create Fock space, so the weight-one mode of a quadratic picks
up the shift: X(k) sums NO(u(p)v(q)) over p + q = k - 1 + (number of starred
factors).  Without the shift the composite relations provably fail (the
central terms cancel identically), so the shift is what realizes the loop
relations verbatim in the published mode labels.

The ghost has no starred partner, hence no consistent unit shift: its
bracket-compatible sector pairs e(k) with e(-1-k) and has no distinguished
zero mode (``ghost_sector="shifted"``, the default, under which every
relation holds exactly).  The published description with e(0) acting as the
scalar sqrt(-1) and [e(k), e(l)] = -2 delta_{k,-l} is the other sector
(``ghost_sector="zero-mode-scalar"``); it is kept available, and the oracle
reports the finite central defects it produces instead of hiding them.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .scalars import GaussianRational, ZERO, ONE, I
from .oscillator import GeneratorSet, FieldSymbol, COMBINATION
from .wick import LocalField
from .realize import (FieldAssignment, RelationTemplate, EXACT, FAIL,
                      _diagonal_factor)

FOCK_ADAPTED = "fock-adapted"
MODE_SPLIT = "mode-split"

GHOST_SHIFTED = "shifted"
GHOST_ZERO_MODE_SCALAR = "zero-mode-scalar"

MOD_NULL_ACTION = "mod_null_action"

# a basis state is a sorted tuple of (symbol_id, mode) creation factors
State = Tuple[Tuple[int, int], ...]
Vector = Dict[State, GaussianRational]

VACUUM: State = ()


class FockSpace:
    """Oscillator module of one generator set, with exact mode actions."""

    def __init__(self, gens: GeneratorSet, ordering: str = FOCK_ADAPTED,
                 ghost_sector: str = GHOST_SHIFTED):
        if ordering not in (FOCK_ADAPTED, MODE_SPLIT):
            raise ValueError(f"unknown ordering {ordering!r}")
        if ghost_sector not in (GHOST_SHIFTED, GHOST_ZERO_MODE_SCALAR):
            raise ValueError(f"unknown ghost sector {ghost_sector!r}")
        self.gens = gens
        self.ordering = ordering
        self.ghost_sector = ghost_sector
        fields: List[FieldSymbol] = []
        for base in gens.fock_families:
            fields.append(base)
            if base.family != "e":
                fields.append(base.star())
        fields.sort(key=FieldSymbol.sort_key)
        self.fields: Tuple[FieldSymbol, ...] = tuple(fields)
        self.sym_id: Dict[FieldSymbol, int] = {s: i for i, s in enumerate(fields)}
        self.parity: Tuple[int, ...] = tuple(s.parity for s in fields)
        self.starred: Tuple[bool, ...] = tuple(s.starred for s in fields)
        self.is_ghost: Tuple[bool, ...] = tuple(s.family == "e" for s in fields)
        self.is_cbar: Tuple[bool, ...] = tuple(s.family == "cbar" for s in fields)
        n = len(fields)
        self.pair: List[List[GaussianRational]] = [
            [gens.pairing(fields[a], fields[b]) for b in range(n)]
            for a in range(n)
        ]
        self._elementary_cache: Dict[Tuple[int, int], "ElementaryOp"] = {}
        self._composite_cache: Dict[Tuple[str, int], "CompositeOp"] = {}
        self._app_cache: Dict[Tuple[int, int, State],
                              List[Tuple[GaussianRational, State]]] = {}

    # -- state helpers ---------------------------------------------------

    def energy(self, state: State) -> int:
        return sum(-mode for _, mode in state if mode < 0)

    def zero_degree(self, state: State) -> int:
        return sum(1 for _, mode in state if mode == 0)

    def state_has_cbar(self, state: State) -> bool:
        return any(self.is_cbar[sid] for sid, _ in state)

    def render_state(self, state: State) -> str:
        if not state:
            return "|0>"
        parts = [f"{self.fields[sid].render()}({mode})" for sid, mode in state]
        return " ".join(parts) + " |0>"

    def is_creator(self, sid: int, mode: int) -> bool:
        if self.is_ghost[sid]:
            return mode <= -1
        if self.starred[sid]:
            return mode <= 0
        return mode <= -1

    def is_scalar_mode(self, sid: int, mode: int) -> bool:
        return (self.is_ghost[sid] and mode == 0
                and self.ghost_sector == GHOST_ZERO_MODE_SCALAR)

    def partner_mode(self, sid: int, mode: int) -> int:
        """Creator mode an annihilator u(mode) contracts against."""
        if self.is_ghost[sid] and self.ghost_sector == GHOST_SHIFTED:
            return -1 - mode
        return -mode

    # -- elementary mode action -------------------------------------------

    def apply_elementary(self, sid: int, mode: int, state: State
                         ) -> List[Tuple[GaussianRational, State]]:
        """u(mode) applied to one basis state, exactly."""
        if self.is_scalar_mode(sid, mode):
            odd = sum(self.parity[s] for s, _ in state)
            coeff = I if odd % 2 == 0 else -I
            return [(coeff, state)]
        p_op = self.parity[sid]
        if self.is_creator(sid, mode):
            key = (sid, mode)
            pos = bisect_left(state, key)
            if p_op and pos < len(state) and state[pos] == key:
                return []  # odd square
            sign = 1
            if p_op:
                odd_before = sum(self.parity[s] for s, _ in state[:pos])
                if odd_before % 2:
                    sign = -1
            new_state = state[:pos] + (key,) + state[pos:]
            return [(GaussianRational(sign), new_state)]
        # annihilator: contract against each matching creator factor
        target = self.partner_mode(sid, mode)
        out: List[Tuple[GaussianRational, State]] = []
        sign = 1
        for j, (sid2, mode2) in enumerate(state):
            if mode2 == target:
                value = self.pair[sid][sid2]
                if not value.is_zero():
                    reduced = state[:j] + state[j + 1:]
                    out.append((value * sign, reduced))
            if p_op and self.parity[sid2]:
                sign = -sign
        return out

    def apply_elementary_cached(self, sid: int, mode: int, state: State
                                ) -> List[Tuple[GaussianRational, State]]:
        key = (sid, mode, state)
        got = self._app_cache.get(key)
        if got is None:
            got = self.apply_elementary(sid, mode, state)
            self._app_cache[key] = got
        return got

    # -- operators ---------------------------------------------------------

    def elementary(self, sym: FieldSymbol, mode: int) -> "Operator":
        """The mode operator of one symbol; beta resolves by linearity."""
        if sym.family == "beta" and self.gens.beta_model == COMBINATION:
            parts = [(c, self.elementary(s, mode))
                     for c, s in self.gens.expand_symbol(sym)]
            return LinearOp(parts, sym.parity)
        sid = self.sym_id.get(sym)
        if sid is None:
            raise ValueError(f"symbol {sym.render()} not in this Fock space")
        op = self._elementary_cache.get((sid, mode))
        if op is None:
            op = ElementaryOp(self, sid, mode)
            self._elementary_cache[(sid, mode)] = op
        return op

    def composite_mode(self, field: LocalField, mode: int,
                       key: Optional[str] = None) -> "CompositeOp":
        """X(mode) = sum of NO(u(p)v(q)) over p + q = mode - 1 + #stars.

        The star shift per monomial converts the published mode labels
        (starred zero modes create) back to the plain weight-one splitting;
        see the module docstring.  Purely central fields have no weight-one
        mode content and are rejected.
        """
        if not field.central.is_zero():
            raise ValueError("composite_mode needs a central-free field")
        if key is not None:
            cached = self._composite_cache.get((key, mode))
            if cached is not None:
                return cached
        op = CompositeOp(self, field, mode)
        if key is not None:
            self._composite_cache[(key, mode)] = op
        return op

    # -- probe windows -------------------------------------------------------

    def basis_window(self, emax: int, zmax: int) -> List[State]:
        """All states with energy <= emax and zero-mode degree <= zmax."""
        creators: List[Tuple[int, int, int, int, int]] = []
        for sid, sym in enumerate(self.fields):
            if sym.starred:
                creators.append((sid, 0, self.parity[sid], 0, 1))
            for k in range(1, emax + 1):
                creators.append((sid, -k, self.parity[sid], k, 0))
        creators.sort(key=lambda c: (c[0], c[1]))
        out: List[State] = []

        def rec(idx: int, acc: List[Tuple[int, int]], e_left: int, z_left: int):
            if idx == len(creators):
                out.append(tuple(acc))
                return
            sid, mode, parity, energy, zdeg = creators[idx]
            rec(idx + 1, acc, e_left, z_left)
            count = 0
            while True:
                count += 1
                if parity and count > 1:
                    break
                if energy * count > e_left or zdeg * count > z_left:
                    break
                rec(idx + 1, acc + [(sid, mode)] * count,
                    e_left - energy * count, z_left - zdeg * count)
            return

        rec(0, [], emax, zmax)
        out.sort()
        return out


class Operator:
    """Base: exact linear operator with a per-state cache."""

    parity: int

    def __init__(self):
        self._cache: Dict[State, Vector] = {}

    def _apply(self, state: State) -> Vector:
        raise NotImplementedError

    def apply_state(self, state: State) -> Vector:
        cached = self._cache.get(state)
        if cached is None:
            cached = self._apply(state)
            self._cache[state] = cached
        return cached

    def apply_vec(self, vec: Vector) -> Vector:
        out: Vector = {}
        for state, coeff in vec.items():
            for s2, c2 in self.apply_state(state).items():
                _accumulate(out, s2, coeff * c2)
        return out


def _accumulate(vec: Vector, state: State, coeff: GaussianRational) -> None:
    total = vec.get(state, ZERO) + coeff
    if total.is_zero():
        vec.pop(state, None)
    else:
        vec[state] = total


def vec_sub(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    for state, coeff in b.items():
        _accumulate(out, state, -coeff)
    return out


def vec_scale(a: Vector, factor: GaussianRational) -> Vector:
    if factor.is_zero():
        return {}
    return {s: c * factor for s, c in a.items()}


class ElementaryOp(Operator):
    def __init__(self, space: FockSpace, sid: int, mode: int):
        super().__init__()
        self.space = space
        self.sid = sid
        self.mode = mode
        self.parity = space.parity[sid]

    def _apply(self, state: State) -> Vector:
        out: Vector = {}
        for coeff, s2 in self.space.apply_elementary(self.sid, self.mode, state):
            _accumulate(out, s2, coeff)
        return out


class LinearOp(Operator):
    def __init__(self, parts: Sequence[Tuple[GaussianRational, Operator]],
                 parity: int):
        super().__init__()
        self.parts = list(parts)
        self.parity = parity

    def _apply(self, state: State) -> Vector:
        out: Vector = {}
        for coeff, op in self.parts:
            for s2, c2 in op.apply_state(state).items():
                _accumulate(out, s2, coeff * c2)
        return out


class CompositeOp(Operator):
    def __init__(self, space: FockSpace, field: LocalField, mode: int):
        super().__init__()
        self.space = space
        self.field = field
        self.mode = mode
        parity = field.parity()
        self.parity = 0 if parity is None else parity
        self.rows = []
        for (u, v), coeff in field.terms.items():
            shift = int(u.starred) + int(v.starred)
            self.rows.append((coeff, space.sym_id[u], space.sym_id[v], shift))

    def _apply(self, state: State) -> Vector:
        space = self.space
        e_in = space.energy(state)
        out: Vector = {}
        for coeff, u_sid, v_sid, shift in self.rows:
            pu, pv = space.parity[u_sid], space.parity[v_sid]
            koszul = -1 if (pu and pv) else 1
            total = self.mode - 1 + shift
            lo = min(total - e_in, 0)
            hi = max(e_in, 0)
            for p in range(lo, hi + 1):
                q = total - p
                if space.ordering == MODE_SPLIT:
                    swap = p >= 0
                else:
                    u_annihilates = not space.is_creator(u_sid, p) \
                        and not space.is_scalar_mode(u_sid, p)
                    swap = u_annihilates and space.is_creator(v_sid, q)
                if swap:
                    first, second = (v_sid, q), (u_sid, p)
                    factor = coeff * koszul
                else:
                    first, second = (u_sid, p), (v_sid, q)
                    factor = coeff
                for c2, s2 in space.apply_elementary_cached(second[0], second[1], state):
                    for c3, s3 in space.apply_elementary_cached(first[0], first[1], s2):
                        _accumulate(out, s3, factor * c2 * c3)
        return out


class BracketOp(Operator):
    """[A, B] as an operator, with the super sign."""

    def __init__(self, a: Operator, b: Operator):
        super().__init__()
        self.a = a
        self.b = b
        self.parity = (a.parity + b.parity) % 2
        self.sign = -1 if (a.parity and b.parity) else 1

    def _apply(self, state: State) -> Vector:
        forward = self.a.apply_vec(self.b.apply_state(state))
        backward = self.b.apply_vec(self.a.apply_state(state))
        if self.sign == 1:
            return vec_sub(forward, backward)
        out = dict(forward)
        for s, c in backward.items():
            _accumulate(out, s, c)
        return out


# ---------------------------------------------------------------------------
# building the module for an instance
# ---------------------------------------------------------------------------


def build_fock(type_tag: str, m: int, n: int, beta_model: str = COMBINATION,
               ordering: str = FOCK_ADAPTED,
               ghost_norm: GaussianRational = GaussianRational(-2),
               ghost_sector: str = GHOST_SHIFTED) -> FockSpace:
    gens = GeneratorSet(type_tag, m, n, beta_model, ghost_norm)
    return FockSpace(gens, ordering, ghost_sector)


class InstanceOracle:
    """Mode operators of one realized instance on one Fock space."""

    def __init__(self, space: FockSpace, assignment: FieldAssignment):
        if space.gens.datum != assignment.datum or \
                space.gens.beta_model != assignment.gens.beta_model:
            raise ValueError("Fock space and assignment instances differ")
        self.space = space
        self.assignment = assignment

    def alpha(self, i: int, mode: int) -> Operator:
        return self.space.composite_mode(self.assignment.alphas[i], mode,
                                         key=f"alpha{i}")

    def x(self, i: int, sign: int, mode: int) -> Operator:
        tag = "+" if sign > 0 else "-"
        return self.space.composite_mode(self.assignment.x(i, sign), mode,
                                         key=f"x{i}{tag}")


@dataclass
class OracleReport:
    id: str
    k: int
    l: int
    status: str
    residual_states: int
    worst_residual: str

    def as_dict(self) -> dict:
        return {"id": self.id, "k": self.k, "l": self.l, "status": self.status,
                "residual_states": self.residual_states,
                "worst_residual": self.worst_residual}


def _vector_status(space: FockSpace, residuals: Vector) -> str:
    if not residuals:
        return EXACT
    if all(space.state_has_cbar(state) for state in residuals):
        return MOD_NULL_ACTION
    return FAIL


def _residual_summary(space: FockSpace, residual: Vector) -> Tuple[int, str]:
    if not residual:
        return 0, "0"
    state = sorted(residual)[0]
    return len(residual), f"{space.render_state(state)}: {residual[state]}"


def relation_oracle(oracle: InstanceOracle, template: RelationTemplate,
                    k: int, l: int, window: Sequence[State],
                    level: GaussianRational) -> OracleReport:
    """Mode-level check of relations 2/3/4 (and Serre nests) on a window."""
    space = oracle.space
    datum = oracle.assignment.datum
    i, j = template.i, template.j
    residual_union: Vector = {}

    def record(res: Vector) -> None:
        # union of residual supports over the window, one representative
        # coefficient per support state for the report
        for s2, c2 in res.items():
            if s2 not in residual_union:
                residual_union[s2] = c2

    if template.kind == "2":
        op = BracketOp(oracle.alpha(i, k), oracle.alpha(j, l))
        scalar = GaussianRational(
            datum.simple_roots[i].form(datum.simple_roots[j])) * level * k \
            if k == -l else ZERO
        for state in window:
            res = op.apply_state(state)
            if not scalar.is_zero():
                res = vec_sub(res, {state: scalar})
            record(res)
    elif template.kind == "3":
        op = BracketOp(oracle.alpha(i, k), oracle.x(j, template.sign, l))
        coeff = GaussianRational(
            datum.simple_roots[i].form(datum.simple_roots[j])) * template.sign
        rhs_op = oracle.x(j, template.sign, k + l)
        for state in window:
            res = op.apply_state(state)
            if not coeff.is_zero():
                res = vec_sub(res, vec_scale(rhs_op.apply_state(state), coeff))
            record(res)
    elif template.kind in ("4x", "4d"):
        op = BracketOp(oracle.x(i, 1, k), oracle.x(j, -1, l))
        if template.kind == "4d":
            factor = _diagonal_factor(datum, i)
            rhs_op = oracle.alpha(i, k + l)
            central = factor * level * k if k == -l else ZERO
            for state in window:
                res = vec_sub(op.apply_state(state),
                              vec_scale(rhs_op.apply_state(state), factor))
                if not central.is_zero():
                    res = vec_sub(res, {state: central})
                record(res)
        else:
            for state in window:
                record(op.apply_state(state))
    elif template.kind == "5serre":
        inner = BracketOp(oracle.x(i, template.sign, k),
                          oracle.x(j, template.sign, l))
        nest: Operator = inner
        for _ in range(template.depth - 1):
            nest = BracketOp(oracle.x(i, template.sign, k), nest)
        for state in window:
            record(nest.apply_state(state))
    else:
        raise ValueError(f"no mode-level template for kind {template.kind!r}")

    status = _vector_status(space, residual_union)
    count, worst = _residual_summary(space, residual_union)
    return OracleReport(template.id, k, l, status, count, worst)


def elementary_expected(space: FockSpace, u: FieldSymbol, v: FieldSymbol,
                        k: int, l: int) -> GaussianRational:
    """The defining bracket value [u(k), v(l)] on this module.

    Starred/unstarred pairs satisfy the published <u,v> delta_{k,-l}; the
    ghost pair is gated at k + l = -1 in the shifted sector and at k = -l in
    the zero-mode-scalar sector.
    """
    value = space.gens.pairing(u, v)
    if value.is_zero():
        return ZERO
    if u.family == "e" and v.family == "e" \
            and space.ghost_sector == GHOST_SHIFTED:
        return value if k + l == -1 else ZERO
    return value if k == -l else ZERO


def elementary_oracle(space: FockSpace, kmax: int, window: Sequence[State],
                      include_beta: bool = True) -> List[dict]:
    """Check every elementary bracket relation on the window."""
    symbols: List[FieldSymbol] = list(space.fields)
    if include_beta and space.gens.beta_model == COMBINATION:
        symbols.append(FieldSymbol("beta", 0, False, 0))
        symbols.append(FieldSymbol("beta", 0, True, 0))
    rows = []
    for u in symbols:
        for v in symbols:
            failures = 0
            witness = "0"
            for k in range(-kmax, kmax + 1):
                op_u = space.elementary(u, k)
                for l in range(-kmax, kmax + 1):
                    op = BracketOp(op_u, space.elementary(v, l))
                    scalar = elementary_expected(space, u, v, k, l)
                    for state in window:
                        res = op.apply_state(state)
                        if not scalar.is_zero():
                            res = vec_sub(res, {state: scalar})
                        if res:
                            failures += 1
                            if witness == "0":
                                s0 = sorted(res)[0]
                                witness = (f"k={k} l={l} "
                                           f"{space.render_state(s0)}: {res[s0]}")
            rows.append({"u": u.render(), "v": v.render(),
                         "status": EXACT if failures == 0 else FAIL,
                         "failures": failures, "witness": witness})
    return rows


def measure_level(oracle: InstanceOracle) -> Tuple[str, GaussianRational]:
    """Read the level off [A_i(1), A_j(-1)] acting on the vacuum.

    Prefers a pair with i, j >= 1 (no radical contamination); the vacuum
    coefficient of the result divided by (alpha_i|alpha_j) is the level.
    """
    datum = oracle.assignment.datum
    chosen = None
    fallback = None
    for i in range(datum.r + 1):
        for j in range(datum.r + 1):
            value = datum.simple_roots[i].form(datum.simple_roots[j])
            if value == 0:
                continue
            if i >= 1 and j >= 1:
                chosen = (i, j, value)
                break
            if fallback is None:
                fallback = (i, j, value)
        if chosen is not None:
            break
    if chosen is None:
        chosen = fallback
    if chosen is None:
        raise ValueError("no pair with nonzero pairing")
    i, j, value = chosen
    op = BracketOp(oracle.alpha(i, 1), oracle.alpha(j, -1))
    result = op.apply_state(VACUUM)
    vacuum_coeff = result.get(VACUUM, ZERO)
    return f"[A{i}(1),A{j}(-1)]", vacuum_coeff / GaussianRational(value)


def ordering_difference(gens: GeneratorSet, field: LocalField, mode: int,
                        probes: Sequence[State],
                        ghost_sector: str = GHOST_SHIFTED) -> Vector:
    """X(mode) under fock-adapted minus under mode-split, on probe states.

    The difference can only be a finite central shift concentrated in paired
    zero modes; on canonically ordered monomials it vanishes identically,
    which this function lets the tests confirm.
    """
    space_f = FockSpace(gens, FOCK_ADAPTED, ghost_sector)
    space_m = FockSpace(gens, MODE_SPLIT, ghost_sector)
    op_f = space_f.composite_mode(field, mode)
    op_m = space_m.composite_mode(field, mode)
    diff: Vector = {}
    for state in probes:
        for s2, c2 in vec_sub(op_f.apply_state(state),
                              op_m.apply_state(state)).items():
            _accumulate(diff, s2, c2)
    return diff
