"""Graded-commutative cochain algebras over the rationals, truncated at a cap.

Two presentations are supported behind one interface.  A free presentation
takes generators with degrees and a differential on the generators; the
monomial basis is enumerated per degree (odd generators square to zero) and
the differential is extended as a degree +1 derivation.  A table
presentation takes explicit per-degree dimensions, structure constants and
differential matrices, and is validated against the graded axioms on
construction.

Every algebra carries an explicit degree cap.  Products or differentials
that would land above the cap raise DegreeCapError; nothing is ever
silently truncated.  The basis order is fixed (degree first, then
lexicographic in declaration order), so all coordinate output is
deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import AlgebraValidationError, DegreeCapError, ParseError
from .linalg import (
    Matrix,
    Vector,
    fr,
    solve,
    vec_is_zero,
    vector,
    zero_vector,
)

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# A parsed polynomial: list of (coefficient, ordered factor names).
PolyTerms = list[tuple[Fraction, tuple[str, ...]]]
PolyInput = Union[str, PolyTerms, None]


def _tokenize_poly(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            m = re.match(r"\d+(?:\s*/\s*\d+)?", text[i:])
            lit = m.group(0)
            tokens.append(("num", lit.replace(" ", ""), i))
            i += len(lit)
            continue
        m = NAME_RE.match(text, i)
        if m:
            tokens.append(("name", m.group(0), i))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r} in polynomial at column {i + 1}")
    return tokens


def parse_polynomial(text: str) -> PolyTerms:
    """Parse ``3/2*x*y - z`` style polynomials.

    The grammar is sums and differences of terms; a term is rational
    coefficients and names joined by explicit ``*``.  Returns a list of
    (coefficient, factor names in written order); zero-coefficient terms
    are dropped.
    """
    tokens = _tokenize_poly(text)
    if not tokens:
        raise ParseError("empty polynomial")
    terms: PolyTerms = []
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, None)

    while pos < len(tokens):
        sign = Fraction(1)
        kind, val, col = peek()
        while kind in ("+", "-"):
            if kind == "-":
                sign = -sign
            pos += 1
            kind, val, col = peek()
        coeff = sign
        factors: list[str] = []
        while True:
            kind, val, col = peek()
            if kind == "num":
                coeff *= Fraction(val)
            elif kind == "name":
                factors.append(val)
            elif kind is None:
                raise ParseError("polynomial ends after an operator")
            else:
                raise ParseError(
                    f"expected a coefficient or name at column {col + 1}, "
                    f"found {val!r}"
                )
            pos += 1
            kind, val, col = peek()
            if kind == "*":
                pos += 1
                continue
            break
        kind, val, col = peek()
        if kind not in ("+", "-", None):
            raise ParseError(
                f"expected '+', '-' or end of polynomial at column {col + 1}, "
                f"found {val!r}"
            )
        if coeff != 0:
            terms.append((coeff, tuple(factors)))
    return terms


@dataclass(frozen=True)
class GeneratorDecl:
    """A generator name with its cohomological degree (at least 1)."""

    name: str
    degree: int


@dataclass(frozen=True)
class TensorInfo:
    """Bookkeeping for algebras of the form ``base (x) Q[h]``.

    ``blocks[n]`` lists ``(j, base_degree, offset, size)`` for each power
    h^j contributing to degree n, in ascending j.  The basis of degree n
    is the concatenation of the base bases of the listed degrees.
    """

    base: "CochainAlgebra"
    hname: str
    blocks: tuple[tuple[tuple[int, int, int, int], ...], ...]

    def block(self, n: int, j: int) -> Optional[tuple[int, int, int, int]]:
        for entry in self.blocks[n]:
            if entry[0] == j:
                return entry
        return None

    def split_index(self, n: int, idx: int) -> tuple[int, int]:
        """Map a degree-n basis index to (h power, base index)."""
        for j, _bdeg, offset, size in self.blocks[n]:
            if offset <= idx < offset + size:
                return j, idx - offset
        raise IndexError(f"basis index {idx} out of range in degree {n}")

    def index(self, n: int, j: int, base_index: int) -> int:
        entry = self.block(n, j)
        if entry is None or not (0 <= base_index < entry[3]):
            raise IndexError(f"no basis vector (h^{j}, {base_index}) in degree {n}")
        return entry[2] + base_index


class Element:
    """A homogeneous element of a CochainAlgebra: a degree and coordinates."""

    __slots__ = ("algebra", "degree", "coords")

    def __init__(self, algebra: "CochainAlgebra", degree: int, coords: Iterable):
        coords = vector(coords)
        if not (0 <= degree <= algebra.cap):
            raise DegreeCapError(
                f"degree {degree} outside [0, cap={algebra.cap}]", required_cap=degree
            )
        if len(coords) != algebra.dim(degree):
            raise ValueError(
                f"coordinate length {len(coords)} != dim {algebra.dim(degree)} "
                f"in degree {degree}"
            )
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def is_zero(self) -> bool:
        return vec_is_zero(self.coords)

    def __add__(self, other: "Element") -> "Element":
        self._check_compatible(other)
        return Element(
            self.algebra,
            self.degree,
            tuple(a + b for a, b in zip(self.coords, other.coords)),
        )

    def __sub__(self, other: "Element") -> "Element":
        self._check_compatible(other)
        return Element(
            self.algebra,
            self.degree,
            tuple(a - b for a, b in zip(self.coords, other.coords)),
        )

    def __neg__(self) -> "Element":
        return self.scale(-1)

    def scale(self, c) -> "Element":
        c = fr(c)
        return Element(self.algebra, self.degree, tuple(c * a for a in self.coords))

    def bar(self) -> "Element":
        """Sign twist: ``(-1)^degree`` times the element."""
        return self if self.degree % 2 == 0 else self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def d(self) -> "Element":
        return self.algebra.differential(self)

    def _check_compatible(self, other: "Element"):
        if self.algebra is not other.algebra:
            raise ValueError("elements live in different algebras")
        if self.degree != other.degree:
            raise ValueError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.algebra is other.algebra
            and self.degree == other.degree
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.algebra), self.degree, self.coords))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            label = self.algebra.basis_label(self.degree, i)
            if label == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(label)
            elif c == -1:
                parts.append(f"-{label}")
            else:
                parts.append(f"{c}*{label}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"Element(deg={self.degree}, {self})"


def bar(a: Element) -> Element:
    return a.bar()


MulTable = Mapping[tuple[int, int, int, int], tuple[tuple[int, Fraction], ...]]
DiffTable = Mapping[tuple[int, int], tuple[tuple[int, Fraction], ...]]


class CochainAlgebra:
    """A graded-commutative differential algebra truncated at ``cap``.

    Instances come from build_free_cdga, build_table_algebra or
    tensor_polynomial_generator; the constructor itself is internal.
    Degrees run 0..cap.  The differential maps degree n to n+1 and is
    stored for n < cap only, so cocycles in degree cap cannot be verified;
    consumers treating cohomology must stop at cap-1.
    """

    def __init__(
        self,
        cap: int,
        kind: str,
        labels: Sequence[Sequence[str]],
        mul: MulTable,
        diff: DiffTable,
        unit_coords: Vector,
        names: Mapping[str, tuple[int, Vector]],
        generators: Optional[tuple[GeneratorDecl, ...]] = None,
        free_recipe=None,
        tensor_info: Optional[TensorInfo] = None,
    ):
        self.cap = cap
        self.kind = kind
        self._labels = tuple(tuple(l) for l in labels)
        self._mul = dict(mul)
        self._diff = dict(diff)
        self._unit_coords = unit_coords
        self._names = dict(names)
        self.generators = generators
        self._free_recipe = free_recipe
        self.tensor_info = tensor_info
        self._diff_matrices: dict[int, Matrix] = {}

    # -- basis bookkeeping -------------------------------------------------

    def dim(self, n: int) -> int:
        if not (0 <= n <= self.cap):
            raise DegreeCapError(
                f"degree {n} outside [0, cap={self.cap}]", required_cap=n
            )
        return len(self._labels[n])

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(l) for l in self._labels)

    def basis_label(self, n: int, i: int) -> str:
        return self._labels[n][i]

    def basis_labels(self, n: int) -> tuple[str, ...]:
        return self._labels[n]

    # -- element constructors ----------------------------------------------

    def element(self, degree: int, coords: Iterable) -> Element:
        return Element(self, degree, coords)

    def zero(self, degree: int) -> Element:
        return Element(self, degree, zero_vector(self.dim(degree)))

    def basis_element(self, n: int, i: int) -> Element:
        if not (0 <= i < self.dim(n)):
            raise IndexError(f"basis index {i} out of range in degree {n}")
        coords = [Fraction(0)] * self.dim(n)
        coords[i] = Fraction(1)
        return Element(self, n, coords)

    def unit(self) -> Element:
        return Element(self, 0, self._unit_coords)

    def named_element(self, name: str) -> Element:
        if name not in self._names:
            raise ParseError(f"unknown name {name!r} in this algebra")
        degree, coords = self._names[name]
        return Element(self, degree, coords)

    def has_name(self, name: str) -> bool:
        return name in self._names

    def name_degree(self, name: str) -> int:
        if name not in self._names:
            raise ParseError(f"unknown name {name!r} in this algebra")
        return self._names[name][0]

    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def generator(self, name: str) -> Element:
        return self.named_element(name)

    # -- arithmetic ----------------------------------------------------------

    def multiply(self, a: Element, b: Element) -> Element:
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements live in a different algebra")
        n = a.degree + b.degree
        if n > self.cap:
            raise DegreeCapError(
                f"product degree {n} exceeds cap {self.cap}", required_cap=n
            )
        out = [Fraction(0)] * self.dim(n)
        for i1, c1 in enumerate(a.coords):
            if c1 == 0:
                continue
            for i2, c2 in enumerate(b.coords):
                if c2 == 0:
                    continue
                for k, s in self._mul.get((a.degree, i1, b.degree, i2), ()):
                    out[k] += c1 * c2 * s
        return Element(self, n, out)

    def differential(self, a: Element) -> Element:
        if a.algebra is not self:
            raise ValueError("element lives in a different algebra")
        n = a.degree + 1
        if n > self.cap:
            raise DegreeCapError(
                f"differential lands in degree {n}, above cap {self.cap}",
                required_cap=n,
            )
        out = [Fraction(0)] * self.dim(n)
        for i, c in enumerate(a.coords):
            if c == 0:
                continue
            for j, s in self._diff.get((a.degree, i), ()):
                out[j] += c * s
        return Element(self, n, out)

    def diff_matrix(self, n: int) -> Matrix:
        """Matrix of d: degree n -> n+1, shape dim(n+1) x dim(n)."""
        if n + 1 > self.cap:
            raise DegreeCapError(
                f"no differential out of degree {n} at cap {self.cap}",
                required_cap=n + 1,
            )
        if n not in self._diff_matrices:
            cols = []
            for i in range(self.dim(n)):
                col = [Fraction(0)] * self.dim(n + 1)
                for j, s in self._diff.get((n, i), ()):
                    col[j] = s
                cols.append(tuple(col))
            self._diff_matrices[n] = Matrix.from_columns(cols, self.dim(n + 1))
        return self._diff_matrices[n]

    # -- polynomial input ----------------------------------------------------

    def from_polynomial(
        self, poly: PolyInput, expected_degree: Optional[int] = None
    ) -> Element:
        """Evaluate a polynomial in the algebra's names to an Element.

        Accepts the string grammar of parse_polynomial or its parsed form.
        The result must be homogeneous; the formal degree of every term
        (sum of factor degrees, independent of cancellation) must agree,
        and match ``expected_degree`` when given.  A polynomial with no
        nonzero terms needs ``expected_degree`` to fix its degree.
        """
        if poly is None:
            terms: PolyTerms = []
        elif isinstance(poly, str):
            terms = parse_polynomial(poly)
        else:
            terms = [(fr(c), tuple(fs)) for c, fs in poly]
        degree = expected_degree
        result: Optional[Element] = None
        for coeff, factors in terms:
            if coeff == 0:
                continue
            term_degree = 0
            term = self.unit().scale(coeff)
            for name in factors:
                g = self.named_element(name)
                term_degree += g.degree
                term = self.multiply(term, g)
            if degree is None:
                degree = term_degree
            elif term_degree != degree:
                raise AlgebraValidationError(
                    f"polynomial is not homogeneous: term of degree {term_degree} "
                    f"next to degree {degree}"
                )
            result = term if result is None else result + term
        if result is not None:
            return result
        if degree is None:
            raise AlgebraValidationError(
                "cannot infer the degree of a zero polynomial; "
                "pass an expected degree"
            )
        return self.zero(degree)

    def __repr__(self):
        return f"CochainAlgebra(kind={self.kind}, cap={self.cap}, dims={list(self.dims)})"


# --------------------------------------------------------------------------
# Free presentation
# --------------------------------------------------------------------------


def _enumerate_monomials(gens: Sequence[GeneratorDecl], cap: int):
    """Monomial exponent tuples by total degree 0..cap.

    Odd generators carry exponent at most 1.  Within a degree, monomials
    are ordered lexicographically (descending) on their exponent tuples,
    generators in declaration order, so x*y precedes x*z precedes y*z.
    """
    by_degree: list[list[tuple[int, ...]]] = [[] for _ in range(cap + 1)]

    def extend(idx: int, exps: tuple[int, ...], degree: int):
        if degree > cap:
            return
        if idx == len(gens):
            by_degree[degree].append(exps)
            return
        g = gens[idx]
        max_e = 1 if g.degree % 2 == 1 else (cap - degree) // g.degree
        for e in range(max_e + 1):
            extend(idx + 1, exps + (e,), degree + e * g.degree)

    extend(0, (), 0)
    for n in range(cap + 1):
        by_degree[n].sort(reverse=True)
    return by_degree


def _koszul_sign(
    gens: Sequence[GeneratorDecl], e: tuple[int, ...], f: tuple[int, ...]
) -> int:
    """Sign of merging the word of f into the word of e, or 0 on odd squares."""
    crossings = 0
    odd_tail = 0
    for j in range(len(gens) - 1, -1, -1):
        if gens[j].degree % 2 == 1:
            if e[j] and f[j]:
                return 0
            crossings += f[j] * odd_tail
            odd_tail += e[j]
    return -1 if crossings % 2 else 1


def _monomial_label(gens: Sequence[GeneratorDecl], exps: tuple[int, ...]) -> str:
    parts = []
    for g, e in zip(gens, exps):
        parts.extend([g.name] * e)
    return "*".join(parts) if parts else "1"


def build_free_cdga(
    generators: Sequence[Union[GeneratorDecl, tuple[str, int]]],
    differentials: Mapping[str, PolyInput],
    cap: int,
) -> CochainAlgebra:
    """Free graded-commutative algebra on the generators, with differential.

    ``differentials`` maps generator names to polynomials (string grammar
    or parsed terms) of degree one above the generator; omitted names get
    zero.  The differential is extended as a derivation and d(d(g)) = 0 is
    verified for every generator whose image stays within the cap; a
    violation reports the generator and the residue.
    """
    gens = tuple(
        g if isinstance(g, GeneratorDecl) else GeneratorDecl(g[0], g[1])
        for g in generators
    )
    if not gens:
        raise AlgebraValidationError("at least one generator is required")
    seen = set()
    for g in gens:
        if not NAME_RE.fullmatch(g.name):
            raise AlgebraValidationError(f"invalid generator name {g.name!r}")
        if g.name in seen:
            raise AlgebraValidationError(f"duplicate generator name {g.name!r}")
        seen.add(g.name)
        if not isinstance(g.degree, int) or g.degree < 1:
            raise AlgebraValidationError(
                f"generator {g.name!r} must have integer degree >= 1"
            )
    if cap < max(g.degree for g in gens):
        raise DegreeCapError(
            f"cap {cap} is below the top generator degree",
            required_cap=max(g.degree for g in gens),
        )
    for name in differentials:
        if name not in seen:
            raise AlgebraValidationError(
                f"differential given for unknown generator {name!r}"
            )

    by_degree = _enumerate_monomials(gens, cap)
    index: dict[tuple[int, ...], tuple[int, int]] = {}
    labels = []
    for n in range(cap + 1):
        labels.append([_monomial_label(gens, m) for m in by_degree[n]])
        for i, m in enumerate(by_degree[n]):
            index[m] = (n, i)

    mul: dict[tuple[int, int, int, int], tuple[tuple[int, Fraction], ...]] = {}
    for n1 in range(cap + 1):
        for n2 in range(cap + 1 - n1):
            for i1, e in enumerate(by_degree[n1]):
                for i2, f in enumerate(by_degree[n2]):
                    sign = _koszul_sign(gens, e, f)
                    if sign == 0:
                        continue
                    merged = tuple(a + b for a, b in zip(e, f))
                    _, k = index[merged]
                    mul[(n1, i1, n2, i2)] = ((k, Fraction(sign)),)

    unit_coords = vector([1] + [0] * (len(by_degree[0]) - 1))
    names = {}
    for g in gens:
        exps = tuple(1 if h.name == g.name else 0 for h in gens)
        n, i = index[exps]
        coords = [Fraction(0)] * len(by_degree[n])
        coords[i] = Fraction(1)
        names[g.name] = (n, vector(coords))

    # A differential-free shell is enough to evaluate the generator images
    # and run the derivation products.
    shell = CochainAlgebra(
        cap, "free", labels, mul, {}, unit_coords, names, generators=gens
    )

    d_of_gen: dict[str, Element] = {}
    normalized: dict[str, PolyTerms] = {}
    for g in gens:
        poly = differentials.get(g.name)
        if poly is None:
            continue
        if g.degree + 1 > cap:
            # d out of the top degree is not stored; only d = 0 fits.
            terms = parse_polynomial(poly) if isinstance(poly, str) else poly
            if any(c != 0 for c, _ in terms):
                raise DegreeCapError(
                    f"differential of {g.name!r} does not fit under cap {cap}",
                    required_cap=g.degree + 1,
                )
            continue
        try:
            el = shell.from_polynomial(poly, expected_degree=g.degree + 1)
        except AlgebraValidationError as exc:
            raise AlgebraValidationError(
                f"differential of {g.name!r} is ill-graded: {exc}"
            ) from exc
        except DegreeCapError as exc:
            raise DegreeCapError(
                f"differential of {g.name!r} does not fit under cap {cap}: {exc}",
                required_cap=exc.required_cap,
            ) from exc
        if not el.is_zero():
            d_of_gen[g.name] = el
            normalized[g.name] = [
                (c, f)
                for c, f in (
                    parse_polynomial(poly) if isinstance(poly, str) else poly
                )
            ]

    diff: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
    for n in range(cap):
        for i, exps in enumerate(by_degree[n]):
            word = []
            for gi, e in enumerate(exps):
                word.extend([gi] * e)
            total = shell.zero(n + 1)
            prefix_deg = 0
            for pos, gi in enumerate(word):
                gname = gens[gi].name
                dg = d_of_gen.get(gname)
                if dg is not None:
                    prefix = _word_element(shell, gens, index, word[:pos])
                    suffix = _word_element(shell, gens, index, word[pos + 1 :])
                    term = shell.multiply(shell.multiply(prefix, dg), suffix)
                    if prefix_deg % 2 == 1:
                        term = -term
                    total = total + term
                prefix_deg += gens[gi].degree
            if not total.is_zero():
                diff[(n, i)] = tuple(
                    (j, c) for j, c in enumerate(total.coords) if c != 0
                )

    algebra = CochainAlgebra(
        cap,
        "free",
        labels,
        mul,
        diff,
        unit_coords,
        names,
        generators=gens,
        free_recipe=(gens, normalized),
    )

    for g in gens:
        if g.degree + 2 <= cap:
            residue = algebra.differential(
                algebra.differential(algebra.named_element(g.name))
            )
            if not residue.is_zero():
                raise AlgebraValidationError(
                    f"d*d is nonzero on generator {g.name!r}: residue {residue}"
                )
    return algebra


def _word_element(shell, gens, index, word: list[int]) -> Element:
    exps = [0] * len(gens)
    for gi in word:
        exps[gi] += 1
    n, i = index[tuple(exps)]
    coords = [Fraction(0)] * shell.dim(n)
    coords[i] = Fraction(1)
    return Element(shell, n, coords)


def recap(a: CochainAlgebra, new_cap: int) -> CochainAlgebra:
    """Rebuild a free algebra at a different cap from its stored recipe."""
    if a._free_recipe is None:
        raise AlgebraValidationError("only free presentations can be re-capped")
    gens, diffs = a._free_recipe
    return build_free_cdga(gens, diffs, new_cap)


# --------------------------------------------------------------------------
# Table presentation
# --------------------------------------------------------------------------


def build_table_algebra(
    dims: Sequence[int],
    products: Mapping[tuple[int, int, int, int], Iterable[tuple[int, object]]],
    differentials: Optional[Mapping[tuple[int, int], Iterable[tuple[int, object]]]] = None,
    names: Optional[Sequence[Sequence[str]]] = None,
    validate: bool = True,
) -> CochainAlgebra:
    """Algebra from explicit per-degree dimensions and structure constants.

    ``dims[n]`` is the dimension in degree n; the cap is ``len(dims)-1``.
    ``products[(n1,i1,n2,i2)]`` lists ``(k, coefficient)`` pairs giving the
    product of basis vectors in degree n1+n2; missing keys mean zero.
    ``differentials[(n,i)]`` likewise gives d of a basis vector.  A
    two-sided unit must exist in degree 0 and, when ``validate`` is on,
    associativity, graded commutativity, the Leibniz rule and d*d = 0 are
    checked on all basis tuples within the cap; the first violation is
    reported with the offending labels.
    """
    if not dims:
        raise AlgebraValidationError("dims must cover at least degree 0")
    cap = len(dims) - 1
    if any((not isinstance(d, int)) or d < 0 for d in dims):
        raise AlgebraValidationError("dims must be nonnegative integers")

    if names is None:
        names_per_degree = [
            [f"e{n}_{i}" if dims[n] > 1 else f"e{n}" for i in range(dims[n])]
            for n in range(cap + 1)
        ]
    else:
        names_per_degree = [list(ns) for ns in names]
        if len(names_per_degree) != cap + 1 or any(
            len(ns) != dims[n] for n, ns in enumerate(names_per_degree)
        ):
            raise AlgebraValidationError("names must match dims degree by degree")
    flat = [nm for ns in names_per_degree for nm in ns]
    if len(set(flat)) != len(flat):
        raise AlgebraValidationError("basis names must be unique across degrees")
    for nm in flat:
        if not NAME_RE.fullmatch(nm):
            raise AlgebraValidationError(f"invalid basis name {nm!r}")

    mul: dict[tuple[int, int, int, int], tuple[tuple[int, Fraction], ...]] = {}
    for (n1, i1, n2, i2), entries in products.items():
        if not (0 <= n1 <= cap and 0 <= n2 <= cap and n1 + n2 <= cap):
            raise AlgebraValidationError(
                f"product key ({n1},{i1},{n2},{i2}) outside the cap"
            )
        if not (0 <= i1 < dims[n1] and 0 <= i2 < dims[n2]):
            raise AlgebraValidationError(
                f"product key ({n1},{i1},{n2},{i2}) indexes a missing basis vector"
            )
        cleaned = []
        for k, c in entries:
            c = fr(c)
            if not (0 <= k < dims[n1 + n2]):
                raise AlgebraValidationError(
                    f"product ({n1},{i1},{n2},{i2}) targets invalid index {k}"
                )
            if c != 0:
                cleaned.append((k, c))
        if cleaned:
            mul[(n1, i1, n2, i2)] = tuple(cleaned)

    diff: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
    for (n, i), entries in (differentials or {}).items():
        if not (0 <= n < cap) or not (0 <= i < dims[n]):
            raise AlgebraValidationError(
                f"differential key ({n},{i}) out of range (d must land within cap)"
            )
        cleaned = []
        for j, c in entries:
            c = fr(c)
            if not (0 <= j < dims[n + 1]):
                raise AlgebraValidationError(
                    f"differential of ({n},{i}) targets invalid index {j}"
                )
            if c != 0:
                cleaned.append((j, c))
        if cleaned:
            diff[(n, i)] = tuple(cleaned)

    name_map = {}
    for n, ns in enumerate(names_per_degree):
        for i, nm in enumerate(ns):
            coords = [Fraction(0)] * dims[n]
            coords[i] = Fraction(1)
            name_map[nm] = (n, vector(coords))

    unit_coords = _solve_unit(dims, mul, cap)
    algebra = CochainAlgebra(
        cap, "table", names_per_degree, mul, diff, unit_coords, name_map
    )
    if validate:
        problems = validate_algebra(algebra, limit=1)
        if problems:
            raise AlgebraValidationError(problems[0])
    return algebra


def _solve_unit(dims, mul, cap) -> Vector:
    """Find the two-sided unit in degree 0 by solving the defining system."""
    d0 = dims[0]
    if d0 == 0:
        raise AlgebraValidationError("no degree-0 component, so no unit")
    rows = []
    rhs = []
    for n in range(cap + 1):
        for j in range(dims[n]):
            for k in range(dims[n]):
                left = [Fraction(0)] * d0
                right = [Fraction(0)] * d0
                for i in range(d0):
                    for t, c in mul.get((0, i, n, j), ()):
                        if t == k:
                            left[i] += c
                    for t, c in mul.get((n, j, 0, i), ()):
                        if t == k:
                            right[i] += c
                want = Fraction(1 if j == k else 0)
                rows.append(left)
                rhs.append(want)
                rows.append(right)
                rhs.append(want)
    u = solve(Matrix(rows, cols=d0), tuple(rhs))
    if u is None:
        raise AlgebraValidationError("no two-sided unit exists in degree 0")
    return u


# --------------------------------------------------------------------------
# Structural validation scans
# --------------------------------------------------------------------------


def validate_algebra(a: CochainAlgebra, limit: Optional[int] = None) -> list[str]:
    """Scan the graded axioms on all basis tuples within the cap.

    Checks d*d = 0, graded commutativity, associativity, the Leibniz rule
    and neutrality of the unit.  Returns human-readable problem strings,
    empty when the algebra is sound; stops early after ``limit`` findings.
    """
    problems: list[str] = []

    def report(msg: str) -> bool:
        problems.append(msg)
        return limit is not None and len(problems) >= limit

    cap = a.cap
    for n in range(cap - 1):
        m = a.diff_matrix(n + 1).matmul(a.diff_matrix(n))
        if not m.is_zero():
            for i in range(a.dim(n)):
                if not vec_is_zero(m.column(i)):
                    if report(
                        f"d*d != 0 on basis vector {a.basis_label(n, i)!r} "
                        f"(degree {n})"
                    ):
                        return problems
                    break

    for n1 in range(cap + 1):
        for n2 in range(n1, cap + 1 - n1):
            sign = -1 if (n1 % 2 and n2 % 2) else 1
            for i1 in range(a.dim(n1)):
                for i2 in range(a.dim(n2)):
                    ab = a.multiply(a.basis_element(n1, i1), a.basis_element(n2, i2))
                    ba = a.multiply(a.basis_element(n2, i2), a.basis_element(n1, i1))
                    if ab != ba.scale(sign):
                        if report(
                            "graded commutativity fails on "
                            f"({a.basis_label(n1, i1)!r}, {a.basis_label(n2, i2)!r})"
                        ):
                            return problems

    for n1 in range(cap + 1):
        for n2 in range(cap + 1 - n1):
            for n3 in range(cap + 1 - n1 - n2):
                for i1 in range(a.dim(n1)):
                    e1 = a.basis_element(n1, i1)
                    for i2 in range(a.dim(n2)):
                        e2 = a.basis_element(n2, i2)
                        e12 = a.multiply(e1, e2)
                        for i3 in range(a.dim(n3)):
                            e3 = a.basis_element(n3, i3)
                            lhs = a.multiply(e12, e3)
                            rhs = a.multiply(e1, a.multiply(e2, e3))
                            if lhs != rhs:
                                if report(
                                    "associativity fails on ("
                                    f"{a.basis_label(n1, i1)!r}, "
                                    f"{a.basis_label(n2, i2)!r}, "
                                    f"{a.basis_label(n3, i3)!r})"
                                ):
                                    return problems

    for n1 in range(cap + 1):
        for n2 in range(cap - n1):
            for i1 in range(a.dim(n1)):
                e1 = a.basis_element(n1, i1)
                for i2 in range(a.dim(n2)):
                    e2 = a.basis_element(n2, i2)
                    lhs = a.differential(a.multiply(e1, e2))
                    rhs = a.multiply(a.differential(e1), e2)
                    term = a.multiply(e1, a.differential(e2))
                    rhs = rhs + (term.scale(-1) if n1 % 2 else term)
                    if lhs != rhs:
                        if report(
                            "Leibniz rule fails on "
                            f"({a.basis_label(n1, i1)!r}, {a.basis_label(n2, i2)!r})"
                        ):
                            return problems

    one = a.unit()
    for n in range(cap + 1):
        for i in range(a.dim(n)):
            e = a.basis_element(n, i)
            if a.multiply(one, e) != e or a.multiply(e, one) != e:
                if report(f"unit is not neutral on {a.basis_label(n, i)!r}"):
                    return problems
    return problems


# --------------------------------------------------------------------------
# Polynomial-generator extension (base (x) Q[h])
# --------------------------------------------------------------------------


def tensor_polynomial_generator(
    a: CochainAlgebra,
    name: str = "h",
    cap: Optional[int] = None,
    validate: bool = True,
) -> CochainAlgebra:
    """Adjoin a central polynomial generator of degree 2 with d = 0.

    The degree-n basis of the result is the concatenation over j >= 0 of
    the base bases in degree n-2j, tagged with h^j; products multiply base
    parts and add h exponents, and the differential acts on the base part
    alone.  Free bases are re-enumerated up to the new cap; table bases
    are taken as literally zero above their own cap, which keeps every
    axiom intact because all extra degrees are zero spaces.
    """
    if cap is None:
        cap = a.cap
    if cap < a.cap:
        raise DegreeCapError(
            f"extension cap {cap} is below the base cap {a.cap}", required_cap=a.cap
        )
    if not NAME_RE.fullmatch(name):
        raise AlgebraValidationError(f"invalid generator name {name!r}")
    if a.has_name(name):
        raise AlgebraValidationError(
            f"name {name!r} already exists in the base algebra"
        )

    if a.kind == "free" and cap > a.cap:
        base = recap(a, cap)
    else:
        base = a

    def bdim(k: int) -> int:
        return base.dim(k) if 0 <= k <= base.cap else 0

    blocks: list[tuple[tuple[int, int, int, int], ...]] = []
    for n in range(cap + 1):
        row = []
        offset = 0
        for j in range(n // 2 + 1):
            bdeg = n - 2 * j
            size = bdim(bdeg)
            row.append((j, bdeg, offset, size))
            offset += size
        blocks.append(tuple(row))

    labels: list[list[str]] = []
    for n in range(cap + 1):
        row = []
        for j, bdeg, _off, size in blocks[n]:
            for i in range(size):
                base_label = base.basis_label(bdeg, i)
                parts = ([] if base_label == "1" else [base_label]) + [name] * j
                row.append("*".join(parts) if parts else "1")
        labels.append(row)

    info = TensorInfo(base=base, hname=name, blocks=tuple(blocks))

    mul: dict[tuple[int, int, int, int], tuple[tuple[int, Fraction], ...]] = {}
    for n1 in range(cap + 1):
        for n2 in range(cap + 1 - n1):
            n = n1 + n2
            for j1, b1, off1, size1 in blocks[n1]:
                for j2, b2, off2, size2 in blocks[n2]:
                    if size1 == 0 or size2 == 0:
                        continue
                    target = info.block(n, j1 + j2)
                    if target is None or target[3] == 0:
                        continue
                    toff = target[2]
                    for i1 in range(size1):
                        for i2 in range(size2):
                            entries = (
                                base._mul.get((b1, i1, b2, i2), ())
                                if b1 + b2 <= base.cap
                                else ()
                            )
                            if entries:
                                mul[(n1, off1 + i1, n2, off2 + i2)] = tuple(
                                    (toff + k, c) for k, c in entries
                                )

    diff: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
    for n in range(cap):
        for j, bdeg, off, size in blocks[n]:
            target = info.block(n + 1, j)
            if target is None or target[3] == 0:
                continue
            toff = target[2]
            for i in range(size):
                entries = base._diff.get((bdeg, i), ()) if bdeg < base.cap else ()
                if entries:
                    diff[(n, off + i)] = tuple((toff + k, c) for k, c in entries)

    unit_block = info.block(0, 0)
    unit_coords = list(zero_vector(sum(b[3] for b in blocks[0])))
    for i, c in enumerate(base._unit_coords):
        unit_coords[unit_block[2] + i] = c

    names: dict[str, tuple[int, Vector]] = {}
    for nm in base.names():
        bdeg, bcoords = base._names[nm]
        if bdeg > cap:
            continue
        block = info.block(bdeg, 0)
        coords = [Fraction(0)] * sum(b[3] for b in blocks[bdeg])
        for i, c in enumerate(bcoords):
            coords[block[2] + i] = c
        names[nm] = (bdeg, vector(coords))
    hcoords = [Fraction(0)] * sum(b[3] for b in blocks[2])
    hblock = info.block(2, 1)
    for i, c in enumerate(base._unit_coords):
        hcoords[hblock[2] + i] = c
    names[name] = (2, vector(hcoords))

    result = CochainAlgebra(
        cap,
        "table",
        labels,
        mul,
        diff,
        vector(unit_coords),
        names,
        tensor_info=info,
    )
    if validate:
        problems = validate_algebra(result, limit=1)
        if problems:
            raise AlgebraValidationError(
                f"extension by {name!r} failed validation: {problems[0]}"
            )
    return result


# --------------------------------------------------------------------------
# Morphisms
# --------------------------------------------------------------------------


class AlgebraMorphism:
    """A degree-preserving map of cochain algebras given per-degree matrices.

    ``matrices[n]`` maps coordinates in source degree n to target degree n,
    for n up to the trust cap (the smaller of the two caps, or less when a
    retraction forgets high degrees).  Multiplicativity, unit preservation
    and commutation with the differentials are what build_morphism
    verifies; this class only stores and applies the data.
    """

    def __init__(
        self,
        source: CochainAlgebra,
        target: CochainAlgebra,
        matrices: Sequence[Matrix],
    ):
        self.source = source
        self.target = target
        self.matrices = tuple(matrices)
        for n, m in enumerate(self.matrices):
            if m.cols != source.dim(n) or m.rows != target.dim(n):
                raise ValueError(
                    f"matrix shape {m.rows}x{m.cols} wrong in degree {n}: "
                    f"want {target.dim(n)}x{source.dim(n)}"
                )

    @property
    def trust_cap(self) -> int:
        return len(self.matrices) - 1

    def matrix(self, n: int) -> Matrix:
        if not (0 <= n <= self.trust_cap):
            raise DegreeCapError(
                f"morphism has no degree-{n} component (trust cap "
                f"{self.trust_cap})",
                required_cap=n,
            )
        return self.matrices[n]

    def apply(self, el: Element) -> Element:
        if el.algebra is not self.source:
            raise ValueError("element does not live in the morphism source")
        return Element(
            self.target, el.degree, self.matrix(el.degree).matvec(el.coords)
        )

    def __repr__(self):
        return f"AlgebraMorphism(trust_cap={self.trust_cap})"


def validate_morphism(f: AlgebraMorphism, on_generators: bool = False) -> list[str]:
    """Check unit, multiplicativity and d-commutation within the trust cap."""
    problems = []
    src, tgt = f.source, f.target
    trust = f.trust_cap
    if f.apply(src.unit()) != tgt.unit():
        problems.append("morphism does not preserve the unit")

    if on_generators and src.generators is not None:
        for g in src.generators:
            if g.degree + 1 <= trust:
                ge = src.named_element(g.name)
                if f.apply(src.differential(ge)) != tgt.differential(f.apply(ge)):
                    problems.append(
                        f"morphism does not commute with d on generator {g.name!r}"
                    )
    else:
        for n in range(trust):
            lhs = f.matrix(n + 1).matmul(src.diff_matrix(n))
            rhs = tgt.diff_matrix(n).matmul(f.matrix(n))
            if lhs != rhs:
                for i in range(src.dim(n)):
                    if lhs.column(i) != rhs.column(i):
                        problems.append(
                            "morphism does not commute with d on "
                            f"{src.basis_label(n, i)!r}"
                        )
                        break

    for n1 in range(trust + 1):
        for n2 in range(trust + 1 - n1):
            for i1 in range(src.dim(n1)):
                e1 = src.basis_element(n1, i1)
                fe1 = f.apply(e1)
                for i2 in range(src.dim(n2)):
                    e2 = src.basis_element(n2, i2)
                    if f.apply(src.multiply(e1, e2)) != tgt.multiply(
                        fe1, f.apply(e2)
                    ):
                        problems.append(
                            "morphism is not multiplicative on "
                            f"({src.basis_label(n1, i1)!r}, "
                            f"{src.basis_label(n2, i2)!r})"
                        )
    return problems


def build_morphism(
    source: CochainAlgebra,
    target: CochainAlgebra,
    images: Optional[Mapping[str, Element]] = None,
    matrices: Optional[Sequence[Matrix]] = None,
    validate: bool = True,
) -> AlgebraMorphism:
    """Construct and verify a morphism of cochain algebras.

    For a free source pass generator ``images`` (target elements of the
    generator degrees); basis monomials map to ordered products of the
    images.  Otherwise pass explicit per-degree ``matrices``.  Validation
    rejects maps that fail to commute with the differential, fail
    multiplicativity, or move the unit.
    """
    trust = min(source.cap, target.cap)
    if images is not None:
        if source.generators is None:
            raise AlgebraValidationError(
                "generator images need a free source algebra"
            )
        gens = source.generators
        for g in gens:
            if g.name not in images:
                raise AlgebraValidationError(f"no image given for {g.name!r}")
            img = images[g.name]
            if img.algebra is not target:
                raise AlgebraValidationError(
                    f"image of {g.name!r} lives in the wrong algebra"
                )
            if img.degree != g.degree:
                raise AlgebraValidationError(
                    f"image of {g.name!r} has degree {img.degree}, want {g.degree}"
                )
        mats = []
        for n in range(trust + 1):
            cols = []
            for i in range(source.dim(n)):
                mono = source.basis_label(n, i)
                out = target.unit()
                if mono != "1":
                    for nm in mono.split("*"):
                        out = target.multiply(out, images[nm])
                cols.append(out.coords)
            mats.append(Matrix.from_columns(cols, target.dim(n)))
        f = AlgebraMorphism(source, target, mats)
        problems = validate_morphism(f, on_generators=True) if validate else []
    elif matrices is not None:
        f = AlgebraMorphism(source, target, matrices)
        problems = validate_morphism(f) if validate else []
    else:
        raise ValueError("pass either generator images or matrices")
    if problems:
        raise AlgebraValidationError(problems[0])
    return f


def identity_morphism(a: CochainAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(a, a, [Matrix.identity(a.dim(n)) for n in range(a.cap + 1)])


def tensor_embedding(a: CochainAlgebra, ext: CochainAlgebra) -> AlgebraMorphism:
    """The inclusion of the base into ``base (x) Q[h]`` (h power zero)."""
    info = ext.tensor_info
    if info is None:
        raise AlgebraValidationError("target is not a polynomial-generator extension")
    mats = []
    for n in range(min(a.cap, ext.cap) + 1):
        block = info.block(n, 0)
        size = 0 if block is None else block[3]
        if size != a.dim(n):
            raise AlgebraValidationError(
                f"base dimension mismatch in degree {n}: {a.dim(n)} vs {size}"
            )
        cols = []
        for i in range(a.dim(n)):
            col = [Fraction(0)] * ext.dim(n)
            col[block[2] + i] = Fraction(1)
            cols.append(tuple(col))
        mats.append(Matrix.from_columns(cols, ext.dim(n)))
    f = AlgebraMorphism(a, ext, mats)
    problems = validate_morphism(f)
    if problems:
        raise AlgebraValidationError(problems[0])
    return f


def tensor_retraction(ext: CochainAlgebra, a: CochainAlgebra) -> AlgebraMorphism:
    """Set h to zero: the left inverse of tensor_embedding on the base."""
    info = ext.tensor_info
    if info is None:
        raise AlgebraValidationError("source is not a polynomial-generator extension")
    mats = []
    for n in range(min(a.cap, ext.cap) + 1):
        block = info.block(n, 0)
        size = 0 if block is None else block[3]
        if size != a.dim(n):
            raise AlgebraValidationError(
                f"base dimension mismatch in degree {n}: {a.dim(n)} vs {size}"
            )
        rows = []
        for i in range(a.dim(n)):
            row = [Fraction(0)] * ext.dim(n)
            row[block[2] + i] = Fraction(1)
            rows.append(row)
        mats.append(Matrix(rows, cols=ext.dim(n)))
    f = AlgebraMorphism(ext, a, mats)
    problems = validate_morphism(f)
    if problems:
        raise AlgebraValidationError(problems[0])
    return f
