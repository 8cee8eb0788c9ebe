"""Affine simple-root data for the classical families A(m,n), B(m,n), C(n), D(m,n).

Roots live in an exact ambient space with labelled orthogonal directions:
``eps`` directions of square norm +1 and ``del`` directions of square norm -1
(the ``del`` basis absorbs the usual sqrt(-1) rescaling, so everything here is
rational).  The ambient Gram form is the source of truth for every derived
quantity; the published reference Cartan patterns are kept only as fixtures
for the crosscheck, and disagreements are reported as structured errata rather
than patched.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .scalars import GaussianRational

Label = Tuple[str, int]  # ("eps", i) or ("del", j)

EVEN = "even"
ODD = "odd"


class AmbientVector:
    """Immutable exact vector over labelled eps/del coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords: Dict[Label, Fraction]):
        cleaned = {k: Fraction(v) for k, v in coords.items() if Fraction(v) != 0}
        object.__setattr__(self, "coords", dict(sorted(cleaned.items())))

    def __setattr__(self, name, value):
        raise AttributeError("AmbientVector is immutable")

    def __add__(self, other: "AmbientVector") -> "AmbientVector":
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, Fraction(0)) + v
        return AmbientVector(out)

    def __sub__(self, other: "AmbientVector") -> "AmbientVector":
        return self + other.scale(-1)

    def scale(self, factor) -> "AmbientVector":
        f = Fraction(factor)
        return AmbientVector({k: v * f for k, v in self.coords.items()})

    def form(self, other: "AmbientVector") -> Fraction:
        """Invariant bilinear form: (eps_i|eps_j) = +delta, (del_i|del_j) = -delta."""
        total = Fraction(0)
        for label, value in self.coords.items():
            o = other.coords.get(label)
            if o is not None:
                total += value * o * (1 if label[0] == "eps" else -1)
        return total

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other) -> bool:
        return isinstance(other, AmbientVector) and self.coords == other.coords

    def __hash__(self):
        return hash(tuple(self.coords.items()))

    def render(self) -> str:
        if not self.coords:
            return "0"
        parts = []
        for (kind, idx), value in self.coords.items():
            name = f"{kind}{idx}"
            if value == 1:
                text = name
            elif value == -1:
                text = f"-{name}"
            else:
                text = f"{value}*{name}"
            parts.append(text)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"AmbientVector({self.render()})"


def eps(i: int) -> AmbientVector:
    return AmbientVector({("eps", i): Fraction(1)})


def dell(j: int) -> AmbientVector:
    return AmbientVector({("del", j): Fraction(1)})


@dataclass(frozen=True)
class RootDatum:
    type_tag: str
    m: int
    n: int
    r: int
    simple_roots: Tuple[AmbientVector, ...]  # alpha_0 .. alpha_r
    parities: Tuple[str, ...]
    d: Tuple[Fraction, ...]
    beta: AmbientVector
    radical: AmbientVector  # the cbar direction
    theta_coeffs: Tuple[int, ...]  # theta = sum_{i>=1} coeff_i alpha_i

    @property
    def theta(self) -> AmbientVector:
        out = AmbientVector({})
        for coeff, root in zip(self.theta_coeffs, self.simple_roots[1:]):
            out = out + root.scale(coeff)
        return out

    def instance_name(self) -> str:
        if self.type_tag == "C":
            return f"C({self.n})"
        return f"{self.type_tag}({self.m},{self.n})"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def build_root_datum(type_tag: str, m: int, n: int) -> RootDatum:
    """Construct the distinguished affine simple-root datum of one type.

    Parameter ranges: A needs m,n >= 0; B needs m >= 0, n >= 1; C needs n >= 1
    (m is ignored and must be 0); D needs m >= 2, n >= 1.  A(m,m) is accepted:
    the datum is the naive unquotiented one, which is all the free-field side
    ever consumes.
    """
    if type_tag == "A":
        _require(m >= 0, f"A(m,n) needs m >= 0, got m={m}")
        _require(n >= 0, f"A(m,n) needs n >= 0, got n={n}")
        return _build_a(m, n)
    if type_tag == "B":
        _require(m >= 0, f"B(m,n) needs m >= 0, got m={m}")
        _require(n >= 1, f"B(m,n) needs n >= 1, got n={n}")
        return _build_b(m, n)
    if type_tag == "C":
        _require(m == 0, f"C(n) takes no m parameter (got m={m})")
        _require(n >= 1, f"C(n) needs n >= 1, got n={n}")
        return _build_c(n)
    if type_tag == "D":
        _require(m >= 2, f"D(m,n) needs m >= 2, got m={m}")
        _require(n >= 1, f"D(m,n) needs n >= 1, got n={n}")
        return _build_d(m, n)
    raise ValueError(f"unknown type tag {type_tag!r}; expected one of A, B, C, D")


def _finish(type_tag, m, n, r, roots, parities, d, beta, cbar, theta_coeffs):
    datum = RootDatum(
        type_tag=type_tag,
        m=m,
        n=n,
        r=r,
        simple_roots=tuple(roots),
        parities=tuple(parities),
        d=tuple(Fraction(x) for x in d),
        beta=beta,
        radical=cbar,
        theta_coeffs=tuple(theta_coeffs),
    )
    assert len(datum.simple_roots) == r + 1
    assert len(datum.d) == r + 1
    assert len(datum.theta_coeffs) == r
    assert datum.simple_roots[0] == cbar - datum.theta
    return datum


def _build_a(m: int, n: int) -> RootDatum:
    r = m + n + 1
    cbar = eps(0) + dell(n + 2)
    beta = eps(1) - cbar
    roots: List[AmbientVector] = [AmbientVector({})] * (r + 1)
    for i in range(1, m + 1):
        roots[i] = eps(i) - eps(i + 1)
    roots[m + 1] = eps(m + 1) - dell(1)
    for j in range(1, n + 1):
        roots[m + 1 + j] = dell(j) - dell(j + 1)
    theta_coeffs = [1] * r
    roots[0] = cbar - (eps(1) - dell(n + 1))
    parities = [ODD if i in (0, m + 1) else EVEN for i in range(r + 1)]
    d = [Fraction(1)] + [Fraction(1)] * (m + 1) + [Fraction(-1)] * n
    return _finish("A", m, n, r, roots, parities, d, beta, cbar, theta_coeffs)


def _build_b(m: int, n: int) -> RootDatum:
    r = m + n
    cbar = eps(0) + dell(m + 1)
    beta = eps(1) - cbar.scale(Fraction(1, 2))
    roots = [AmbientVector({})] * (r + 1)
    for i in range(1, n):
        roots[i] = eps(i) - eps(i + 1)
    if m == 0:
        roots[n] = eps(n)
        d = [Fraction(2)] + [Fraction(1)] * (n - 1) + [Fraction(1, 2)]
    else:
        roots[n] = eps(n) - dell(1)
        for j in range(1, m):
            roots[n + j] = dell(j) - dell(j + 1)
        roots[n + m] = dell(m)
        d = (
            [Fraction(2)]
            + [Fraction(1)] * n
            + [Fraction(-1)] * (m - 1)
            + [Fraction(-1, 2)]
        )
    roots[0] = cbar - eps(1).scale(2)
    theta_coeffs = [2] * r
    parities = [ODD if i == n else EVEN for i in range(r + 1)]
    return _finish("B", m, n, r, roots, parities, d, beta, cbar, theta_coeffs)


def _build_c(n: int) -> RootDatum:
    r = n + 1
    cbar = eps(0) + dell(n + 1)
    beta = dell(1) - cbar
    roots = [AmbientVector({})] * (r + 1)
    roots[1] = eps(1) - dell(1)
    for j in range(2, n + 1):
        roots[j] = dell(j - 1) - dell(j)
    roots[n + 1] = dell(n).scale(2)
    theta_coeffs = [1] + [2] * (n - 1) + [1]
    roots[0] = cbar - (eps(1) + dell(1))
    parities = [ODD if i in (0, 1) else EVEN for i in range(r + 1)]
    d = [Fraction(1), Fraction(1)] + [Fraction(-1)] * (n - 1) + [Fraction(-2)]
    return _finish("C", 0, n, r, roots, parities, d, beta, cbar, theta_coeffs)


def _build_d(m: int, n: int) -> RootDatum:
    r = m + n
    cbar = eps(0) + dell(m + 1)
    beta = eps(1) - cbar.scale(Fraction(1, 2))
    roots = [AmbientVector({})] * (r + 1)
    for i in range(1, n):
        roots[i] = eps(i) - eps(i + 1)
    roots[n] = eps(n) - dell(1)
    for j in range(1, m):
        roots[n + j] = dell(j) - dell(j + 1)
    roots[n + m] = dell(m - 1) + dell(m)
    theta_coeffs = [2] * (r - 2) + [1, 1]
    roots[0] = cbar - eps(1).scale(2)
    parities = [ODD if i == n else EVEN for i in range(r + 1)]
    d = [Fraction(2)] + [Fraction(1)] * n + [Fraction(-1)] * m
    return _finish("D", m, n, r, roots, parities, d, beta, cbar, theta_coeffs)


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------


def inner(datum: RootDatum, i: int, j: int) -> GaussianRational:
    """(alpha_i | alpha_j) from the ambient coordinates."""
    _check_index(datum, i)
    _check_index(datum, j)
    return GaussianRational(datum.simple_roots[i].form(datum.simple_roots[j]))


def cartan_entry(datum: RootDatum, i: int, j: int) -> GaussianRational:
    """a_ij = (alpha_i | alpha_j) / d_i."""
    _check_index(datum, i)
    _check_index(datum, j)
    value = datum.simple_roots[i].form(datum.simple_roots[j]) / datum.d[i]
    return GaussianRational(value)


def cartan_matrix(datum: RootDatum) -> List[List[Fraction]]:
    return [
        [datum.simple_roots[i].form(datum.simple_roots[j]) / datum.d[i]
         for j in range(datum.r + 1)]
        for i in range(datum.r + 1)
    ]


def _check_index(datum: RootDatum, i: int) -> None:
    if not 0 <= i <= datum.r:
        raise IndexError(f"simple-root index {i} out of range 0..{datum.r}")


def root_parity(datum: RootDatum, vector: AmbientVector) -> str:
    """Parity of a root: the eps-coordinate weight (i >= 1) mod 2.

    The cbar components eps0/del_top never count; they only enter alpha_0,
    whose parity is that of theta.
    """
    total = 0
    for (kind, idx), value in vector.coords.items():
        if kind == "eps" and idx >= 1:
            assert value.denominator == 1, "root with non-integer coordinate"
            total += abs(value.numerator)
    return ODD if total % 2 else EVEN


# ---------------------------------------------------------------------------
# positive systems and the dimension count
# ---------------------------------------------------------------------------


def positive_roots(datum: RootDatum) -> List[AmbientVector]:
    """The finite positive system, in a deterministic order.

    The published tables carry a handful of index slips (ranges swapped for
    type A, the odd short roots dropped for B(m,n) with m >= 1, stray indices
    for type D); the lists here are the corrected ones, pinned by the
    dimension oracle in the tests.
    """
    t, m, n = datum.type_tag, datum.m, datum.n
    out: List[AmbientVector] = []
    if t == "A":
        for i in range(1, m + 2):
            for j in range(i + 1, m + 2):
                out.append(eps(i) - eps(j))
        for k in range(1, n + 2):
            for l in range(k + 1, n + 2):
                out.append(dell(k) - dell(l))
        for i in range(1, m + 2):
            for k in range(1, n + 2):
                out.append(eps(i) - dell(k))
    elif t == "B":
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                out.append(eps(i) - eps(j))
                out.append(eps(i) + eps(j))
        for i in range(1, n + 1):
            out.append(eps(i))
            out.append(eps(i).scale(2))
        for k in range(1, m + 1):
            for l in range(k + 1, m + 1):
                out.append(dell(k) - dell(l))
                out.append(dell(k) + dell(l))
        for k in range(1, m + 1):
            out.append(dell(k))
        for i in range(1, n + 1):
            for k in range(1, m + 1):
                out.append(eps(i) - dell(k))
                out.append(eps(i) + dell(k))
    elif t == "C":
        for k in range(1, n + 1):
            for l in range(k + 1, n + 1):
                out.append(dell(k) - dell(l))
                out.append(dell(k) + dell(l))
        for k in range(1, n + 1):
            out.append(dell(k).scale(2))
        for k in range(1, n + 1):
            out.append(eps(1) - dell(k))
            out.append(eps(1) + dell(k))
    elif t == "D":
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                out.append(eps(i) - eps(j))
                out.append(eps(i) + eps(j))
        for i in range(1, n + 1):
            out.append(eps(i).scale(2))
        for k in range(1, m + 1):
            for l in range(k + 1, m + 1):
                out.append(dell(k) - dell(l))
                out.append(dell(k) + dell(l))
        for i in range(1, n + 1):
            for k in range(1, m + 1):
                out.append(eps(i) - dell(k))
                out.append(eps(i) + dell(k))
    assert len(set(out)) == len(out), "positive roots must be distinct"
    assert all(not v.is_zero() for v in out)
    return out


# ---------------------------------------------------------------------------
# Serre templates
# ---------------------------------------------------------------------------

VANISHING = "vanishing"
DOUBLE = "double"
FOLDED = "folded"


@dataclass(frozen=True)
class SerreTemplate:
    kind: str
    depth: int  # number of ad-applications of x_i on x_j


def serre_exponent(datum: RootDatum, i: int, j: int) -> SerreTemplate:
    """Which Serre-type relation binds x_i against x_j (i != j).

    Computed from the invariant form only: isotropic alpha_i gives the
    vanishing/double templates, non-isotropic alpha_i folds at depth
    1 - 2(alpha_i|alpha_j)/(alpha_i|alpha_i).
    """
    if i == j:
        raise ValueError("serre_exponent needs i != j")
    _check_index(datum, i)
    _check_index(datum, j)
    aii = datum.simple_roots[i].form(datum.simple_roots[i])
    aij = datum.simple_roots[i].form(datum.simple_roots[j])
    if aii == 0:
        if aij == 0:
            return SerreTemplate(VANISHING, 1)
        return SerreTemplate(DOUBLE, 2)
    depth = 1 - 2 * aij / aii
    assert depth.denominator == 1 and depth >= 1, f"bad folded depth {depth}"
    return SerreTemplate(FOLDED, int(depth))


def self_bracket_imposed(datum: RootDatum, i: int) -> bool:
    """Whether [x_i, x_i] = 0 is one of the defining relations.

    For an odd non-isotropic simple root whose double is a root (the tail
    node of B(0,n)), the self-bracket is a genuine root vector and no such
    relation is imposed.
    """
    _check_index(datum, i)
    if datum.parities[i] == EVEN:
        return True
    if datum.simple_roots[i].form(datum.simple_roots[i]) == 0:
        return True
    if i == 0:
        return True
    doubled = datum.simple_roots[i].scale(2)
    return doubled not in set(positive_roots(datum))


# ---------------------------------------------------------------------------
# reference Cartan patterns and the crosscheck
# ---------------------------------------------------------------------------


def reference_cartan_pattern(type_tag: str, m: int, n: int) -> List[List[Fraction]]:
    """The published reference Cartan pattern instantiated at (m, n).

    The patterns are generic pictures; at small rank their anchored border
    stamps can collide.  Overlapping bond-doubling stamps compose (diagram
    folding), which is what makes the B(0,1) instantiation come out as the
    quadruple bond [[2,-1],[-4,2]].  All other collisions resolve by applying
    the stamps in a fixed documented order.
    """
    datum_r = {"A": m + n + 1, "B": m + n, "C": n + 1, "D": m + n}[type_tag]
    size = datum_r + 1
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        mat[i][i] = Fraction(2)
        if i + 1 < size:
            mat[i][i + 1] = Fraction(-1)
            mat[i + 1][i] = Fraction(-1)

    def set_(i, j, v):
        if 0 <= i < size and 0 <= j < size:
            mat[i][j] = Fraction(v)

    if type_tag == "A":
        odd = m + 1
        set_(odd, odd, 0)
        set_(odd, odd + 1, 1)
        set_(0, datum_r, 1)
        set_(datum_r, 0, -1)
    elif type_tag == "B":
        if m == 0:
            # doubling stamps on the two anchored sub-diagonal bonds; they
            # stack when the anchors coincide (n = 1)
            mat[1][0] *= 2
            mat[n][n - 1] *= 2
        else:
            set_(1, 0, -2)
            set_(n, n, 0)
            set_(n, n + 1, 1)
            set_(n + m, n + m - 1, -2)
    elif type_tag == "C":
        set_(0, 0, 0)
        set_(0, 1, -2)
        set_(1, 0, -2)
        set_(1, 1, 0)
        set_(0, 2, -1)
        set_(1, 2, -1)
        set_(2, 0, -1)
        set_(2, 1, -1)
        set_(datum_r - 1, datum_r, -2)
    elif type_tag == "D":
        set_(1, 0, -2)
        set_(n, n, 0)
        set_(n, n + 1, 1)
        set_(datum_r - 2, datum_r, -1)
        set_(datum_r, datum_r - 2, -1)
        set_(datum_r - 1, datum_r, 0)
        set_(datum_r, datum_r - 1, 0)
    else:
        raise ValueError(f"unknown type tag {type_tag!r}")
    return mat


@dataclass(frozen=True)
class Erratum:
    i: int
    j: int
    computed: Fraction
    printed: Fraction

    def as_dict(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "computed": str(GaussianRational(self.computed)),
            "printed": str(GaussianRational(self.printed)),
        }


def appendix_crosscheck(datum: RootDatum) -> List[Erratum]:
    """Compare the computed Cartan matrix against the reference pattern.

    Returns the (i, j, computed, printed) mismatches; an empty list means
    exact entrywise agreement.
    """
    computed = cartan_matrix(datum)
    printed = reference_cartan_pattern(datum.type_tag, datum.m, datum.n)
    out = []
    for i in range(datum.r + 1):
        for j in range(datum.r + 1):
            if computed[i][j] != printed[i][j]:
                out.append(Erratum(i, j, computed[i][j], printed[i][j]))
    return out
