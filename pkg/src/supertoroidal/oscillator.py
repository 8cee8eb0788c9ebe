"""Free-field generator sets and the super pairing <.,.>.

For each type one gets a finite set of oscillator symbols (eps_i, del_j,
beta, optionally cbar and the ghost e, each with a starred partner except e)
together with the pairing that is simultaneously the contraction coefficient
of the symbolic calculus and the mode-bracket coefficient on the Fock module:

    <b*, a> = (a, b)
    <a, b*> = -(-1)^{p(a)p(b)} (a, b)
    <a, b> = <a*, b*> = 0
    <e, e> = ghost_norm (-2 by default), <e, anything else> = 0

Two readings of beta are supported.  ``combination`` keeps cbar as an honest
extra oscillator pair whose pairings against everything vanish (beta is then
eps1 - cbar, resp. eps1 - cbar/2, resp. del1 - cbar, only through the form).
``identified`` collapses cbar to zero, so beta *is* eps1 (del1 for type C).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .scalars import GaussianRational, ZERO
from .rootdata import EVEN, ODD, build_root_datum

COMBINATION = "combination"
IDENTIFIED = "identified"

# family order used for canonical normal ordering and rendering
_FAMILY_RANK = {"eps": 0, "del": 1, "beta": 2, "cbar": 3, "e": 4}


@dataclass(frozen=True)
class FieldSymbol:
    family: str  # "eps" | "del" | "beta" | "cbar" | "e"
    index: int  # 0 for beta/cbar/e
    starred: bool
    parity: int  # 0 even, 1 odd

    def star(self) -> "FieldSymbol":
        if self.family == "e":
            raise ValueError("the ghost e has no starred partner")
        return FieldSymbol(self.family, self.index, not self.starred, self.parity)

    def unstarred(self) -> "FieldSymbol":
        return FieldSymbol(self.family, self.index, False, self.parity)

    def sort_key(self) -> Tuple[int, int, int]:
        return (1 if self.starred else 0, _FAMILY_RANK[self.family], self.index)

    def render(self) -> str:
        if self.family in ("beta", "cbar", "e"):
            base = self.family
        else:
            base = f"{self.family}{self.index}"
        return base + ("*" if self.starred else "")

    def __repr__(self):
        return f"FieldSymbol({self.render()})"


class GeneratorSet:
    """The active oscillator alphabet of one realization instance."""

    def __init__(self, type_tag: str, m: int, n: int, beta_model: str,
                 ghost_norm: GaussianRational):
        if beta_model not in (COMBINATION, IDENTIFIED):
            raise ValueError(f"unknown beta model {beta_model!r}")
        self.type_tag = type_tag
        self.m = m
        self.n = n
        self.beta_model = beta_model
        self.ghost_norm = ghost_norm
        self.datum = build_root_datum(type_tag, m, n)

        eps_parity, del_parity = {
            "A": (0, 1), "B": (0, 1), "D": (0, 1), "C": (1, 0),
        }[type_tag]
        self._parity = {"eps": eps_parity, "del": del_parity,
                        "beta": 0, "cbar": 0, "e": 1}

        if type_tag == "A":
            eps_range, del_range, has_ghost = m + 1, n + 1, False
        elif type_tag == "B":
            eps_range, del_range, has_ghost = n, m, True
        elif type_tag == "D":
            eps_range, del_range, has_ghost = n, m, False
        else:  # C
            eps_range, del_range, has_ghost = 1, n, False
        self.eps_range = eps_range
        self.del_range = del_range
        self.has_ghost = has_ghost

        base: List[FieldSymbol] = []
        for i in range(1, eps_range + 1):
            base.append(FieldSymbol("eps", i, False, eps_parity))
        for j in range(1, del_range + 1):
            base.append(FieldSymbol("del", j, False, del_parity))
        if beta_model == COMBINATION:
            base.append(FieldSymbol("beta", 0, False, 0))
            base.append(FieldSymbol("cbar", 0, False, 0))
        if has_ghost:
            base.append(FieldSymbol("e", 0, False, 1))
        self.unstarred_symbols: Tuple[FieldSymbol, ...] = tuple(base)

        symbols: List[FieldSymbol] = []
        for s in base:
            symbols.append(s)
            if s.family != "e":
                symbols.append(s.star())
        self.symbols: Tuple[FieldSymbol, ...] = tuple(
            sorted(symbols, key=FieldSymbol.sort_key))
        self._known = set(self.symbols)

        # base symbol beta resolves to: itself (combination) or eps1/del1
        if beta_model == COMBINATION:
            self._beta = FieldSymbol("beta", 0, False, 0)
            self._cbar: Optional[FieldSymbol] = FieldSymbol("cbar", 0, False, 0)
        else:
            anchor = ("del", 1) if type_tag == "C" else ("eps", 1)
            self._beta = FieldSymbol(anchor[0], anchor[1], False,
                                     self._parity[anchor[0]])
            self._cbar = None

        self._form_cache: Dict[Tuple[FieldSymbol, FieldSymbol], GaussianRational] = {}

    # -- symbol helpers -------------------------------------------------

    @property
    def beta_symbol(self) -> FieldSymbol:
        return self._beta

    @property
    def cbar_symbol(self) -> Optional[FieldSymbol]:
        return self._cbar

    def beta_expansion(self, starred: bool = False):
        """beta written in the oscillator basis actually carried by monomials.

        combination: eps1 - cbar (A), eps1 - cbar/2 (B/D), del1 - cbar (C);
        identified: just eps1 (resp. del1).  Stored quadratic monomials never
        contain a bare beta factor, so the pairing restricted to the basis has
        exactly one radical line (cbar) in combination mode.
        """
        anchor_family = "del" if self.type_tag == "C" else "eps"
        anchor = FieldSymbol(anchor_family, 1, starred, self._parity[anchor_family])
        if self.beta_model == IDENTIFIED:
            return [(GaussianRational(1), anchor)]
        from fractions import Fraction
        share = Fraction(1, 2) if self.type_tag in ("B", "D") else Fraction(1)
        cbar = FieldSymbol("cbar", 0, starred, 0)
        return [(GaussianRational(1), anchor),
                (GaussianRational(-share), cbar)]

    def expand_symbol(self, sym: FieldSymbol):
        """Linear combination of basis symbols a CLI/user symbol stands for."""
        if sym.family == "beta":
            return self.beta_expansion(starred=sym.starred)
        return [(GaussianRational(1), sym)]

    @property
    def fock_families(self) -> Tuple[FieldSymbol, ...]:
        """Unstarred oscillator families the Fock module is built on."""
        return tuple(s for s in self.unstarred_symbols if s.family != "beta")

    def symbol(self, family: str, index: int = 0, starred: bool = False) -> FieldSymbol:
        if family == "beta" and self.beta_model == IDENTIFIED:
            s = self._beta
            return s.star() if starred else s
        sym = FieldSymbol(family, index, starred, self._parity[family])
        if sym not in self._known:
            raise ValueError(f"symbol {sym.render()} not in the "
                             f"{self.datum.instance_name()} generator set")
        return sym

    def parity_of(self, family: str) -> int:
        return self._parity[family]

    # -- the underlying even form (a, b) on unstarred symbols ----------

    def form(self, a: FieldSymbol, b: FieldSymbol) -> GaussianRational:
        assert not a.starred and not b.starred
        key = (a, b)
        cached = self._form_cache.get(key)
        if cached is None:
            cached = self._form_uncached(a, b)
            self._form_cache[key] = cached
        return cached

    def _form_uncached(self, a: FieldSymbol, b: FieldSymbol) -> GaussianRational:
        fa, fb = a.family, b.family
        if fa == "e" or fb == "e":
            return ZERO  # <e,e> lives only in the super pairing
        if fa == "cbar" or fb == "cbar":
            return ZERO  # radical direction
        if fa == fb == "eps":
            return GaussianRational(1 if a.index == b.index else 0)
        if fa == fb == "del":
            return GaussianRational(-1 if a.index == b.index else 0)
        if fa == fb == "beta":
            return GaussianRational(-1 if self.type_tag == "C" else 1)
        if "beta" in (fa, fb):
            other = b if fa == "beta" else a
            if self.type_tag == "C":
                return GaussianRational(-1 if (other.family, other.index) == ("del", 1) else 0)
            return GaussianRational(1 if (other.family, other.index) == ("eps", 1) else 0)
        return ZERO  # eps against del

    # -- the super pairing <u, v> ---------------------------------------

    def pairing(self, u: FieldSymbol, v: FieldSymbol) -> GaussianRational:
        if u not in self._known or v not in self._known:
            missing = u if u not in self._known else v
            raise ValueError(f"unknown symbol {missing.render()} for "
                             f"{self.datum.instance_name()}")
        if u.family == "e" or v.family == "e":
            if u.family == v.family == "e":
                return self.ghost_norm
            return ZERO
        if u.starred == v.starred:
            return ZERO
        if u.starred:  # <b*, a> = (a, b)
            return self.form(v, u.unstarred())
        # <a, b*> = -(-1)^{p(a)p(b)} (a, b)
        value = self.form(u, v.unstarred())
        sign = -1 if (u.parity * v.parity) % 2 == 0 else 1
        return value * sign
