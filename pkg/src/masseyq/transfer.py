"""Euler-class machinery for circle actions and the transfer of products.

The central objects are an equivariant model of a fixed-point component
(the base algebra with a central degree-2 polynomial generator adjoined),
an Euler class built from weighted line bundle data, and a transfer datum
tying an ambient equivariant model to the fixed one through restriction
and pushforward maps.

Every check computes its conclusion along at least two independent routes
and raises ConsistencyError if the routes disagree, so a reported verdict
is always backed by cross-checked witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cdga import (
    AlgebraMorphism,
    CochainAlgebra,
    Element,
    PolyInput,
    identity_morphism,
    parse_polynomial,
    tensor_embedding,
    tensor_polynomial_generator,
    tensor_retraction,
    validate_morphism,
)
from .cohomology import (
    CohomologyClass,
    CohomologyRing,
    ContainmentReport,
    InducedMap,
    MasseyResult,
    check_scaling_law,
    cup,
    cup_matrix,
    ideal_degree_piece,
    triple_massey,
)
from .errors import (
    AlgebraValidationError,
    ConsistencyError,
    DegreeCapError,
    PremiseError,
    UndefinedProductError,
)
from .linalg import Matrix, kernel_basis, member, rank, solve

ClassInput = Union[str, list, CohomologyClass]


# --------------------------------------------------------------------------
# Equivariant setup
# --------------------------------------------------------------------------


def cartan_model_trivial(
    base: CochainAlgebra, hname: str = "h", cap: Optional[int] = None
) -> CochainAlgebra:
    """The equivariant model of a trivial circle action on the base."""
    return tensor_polynomial_generator(base, hname, cap=cap)


@dataclass
class EquivariantSetup:
    """A base algebra, its degree-2 extension, and the maps between them."""

    base: CochainAlgebra
    ext: CochainAlgebra
    base_ring: CohomologyRing
    ext_ring: CohomologyRing
    embed: InducedMap
    retract: InducedMap

    @property
    def hname(self) -> str:
        return self.ext.tensor_info.hname


def build_setup(
    base: CochainAlgebra, cap: Optional[int] = None, hname: str = "h"
) -> EquivariantSetup:
    ext = cartan_model_trivial(base, hname, cap)
    inner = ext.tensor_info.base
    base_ring = CohomologyRing(inner)
    ext_ring = CohomologyRing(ext)
    embed = InducedMap(tensor_embedding(inner, ext), base_ring, ext_ring)
    retract = InducedMap(tensor_retraction(ext, inner), ext_ring, base_ring)
    return EquivariantSetup(
        base=inner,
        ext=ext,
        base_ring=base_ring,
        ext_ring=ext_ring,
        embed=embed,
        retract=retract,
    )


def formal_degree(algebra: CochainAlgebra, poly: PolyInput) -> int:
    """Degree of a homogeneous polynomial read off the factor names alone."""
    terms = parse_polynomial(poly) if isinstance(poly, str) else list(poly)
    degrees = set()
    for coeff, factors in terms:
        if coeff == 0:
            continue
        degrees.add(sum(algebra.name_degree(nm) for nm in factors))
    if not degrees:
        raise AlgebraValidationError(
            "a zero polynomial has no degree and cannot name a product input"
        )
    if len(degrees) > 1:
        raise AlgebraValidationError(
            f"polynomial is not homogeneous: term degrees {sorted(degrees)}"
        )
    return degrees.pop()


def as_class(ring: CohomologyRing, value: ClassInput) -> CohomologyClass:
    if isinstance(value, CohomologyClass):
        if value.ring is not ring:
            raise ValueError("class belongs to a different ring")
        return value
    return ring.class_from_polynomial(value)


# --------------------------------------------------------------------------
# h-power block decomposition
# --------------------------------------------------------------------------


def h_components(el: Element) -> dict[int, Element]:
    """Split an element of an extension into base elements per h power.

    Blocks padded in above the stored base cap are zero by construction
    and are omitted.
    """
    info = el.algebra.tensor_info
    if info is None:
        raise AlgebraValidationError(
            "element does not live in a polynomial-generator extension"
        )
    base = info.base
    out = {}
    for j, bdeg, off, size in info.blocks[el.degree]:
        if bdeg > base.cap:
            continue
        out[j] = base.element(bdeg, el.coords[off : off + size])
    return out


def class_h_components(
    ext_ring: CohomologyRing,
    base_ring: CohomologyRing,
    cls: CohomologyClass,
) -> dict[int, CohomologyClass]:
    """The nonzero base-class coefficients of an extension class.

    The differential of an extension is block diagonal in the h power, so
    the harmonic representative splits into base cocycles, each of which
    is projected in the base ring; vanishing coefficients are omitted.
    """
    rep = ext_ring.lift(cls)
    out = {}
    for j, comp in h_components(rep).items():
        if comp.degree > base_ring.top:
            if not comp.is_zero():
                raise DegreeCapError(
                    f"h^{j} component lives in base degree {comp.degree}, "
                    f"above the base ring top {base_ring.top}",
                    required_cap=comp.degree + 1,
                )
            continue
        projected = base_ring.project(comp)
        if not projected.is_zero():
            out[j] = projected
    return out


# --------------------------------------------------------------------------
# Euler classes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedLineBundle:
    """An equivariant line bundle datum: base first Chern class and weight."""

    c1: PolyInput
    weight: int


@dataclass(frozen=True, eq=False)
class EulerClass:
    """An equivariant Euler class in an extension ring.

    For a sum of weighted line bundles the class is the product of the
    factors c1 + weight * h and ``weights`` records the weights; a class
    can also be given directly (weights None) as long as its top h-power
    coefficient is a nonzero degree-0 base class.
    """

    cls: CohomologyClass
    element: Element
    m: int
    weights: Optional[tuple[int, ...]]
    top_coefficient: CohomologyClass


def euler_class(
    setup: EquivariantSetup, bundles: Sequence[WeightedLineBundle]
) -> EulerClass:
    """Multiply out the Euler class of a sum of weighted line bundles."""
    if not bundles:
        raise AlgebraValidationError("at least one line bundle is required")
    ext = setup.ext
    h_el = ext.named_element(setup.hname)
    chi = ext.unit()
    weights = []
    for i, b in enumerate(bundles):
        if not isinstance(b.weight, int) or b.weight == 0:
            raise AlgebraValidationError(
                f"bundle {i} has weight {b.weight!r}; weights must be "
                "nonzero integers"
            )
        c1 = ext.from_polynomial(b.c1, expected_degree=2)
        if not c1.d().is_zero():
            raise AlgebraValidationError(
                f"bundle {i} first Chern class is not a cocycle"
            )
        for j, comp in h_components(c1).items():
            if j >= 1 and not comp.is_zero():
                raise AlgebraValidationError(
                    f"bundle {i} first Chern class must come from the base "
                    "(no h terms)"
                )
        chi = chi * (c1 + h_el.scale(b.weight))
        weights.append(b.weight)
    m = len(bundles)
    lead = Fraction(1)
    for k in weights:
        lead *= k
    top = h_components(chi).get(m)
    expected = setup.base.unit().scale(lead)
    if top is None or top != expected:
        raise ConsistencyError(
            "top h coefficient of the Euler class is not the product of "
            "the weights"
        )
    return EulerClass(
        cls=setup.ext_ring.project(chi),
        element=chi,
        m=m,
        weights=tuple(weights),
        top_coefficient=setup.base_ring.project(top),
    )


def euler_class_from_polynomial(
    setup: EquivariantSetup, poly: PolyInput, m: int
) -> EulerClass:
    """An Euler class given directly, e.g. for a disconnected fixed set."""
    if m < 1:
        raise AlgebraValidationError("m must be at least 1")
    el = setup.ext.from_polynomial(poly, expected_degree=2 * m)
    if not el.d().is_zero():
        raise AlgebraValidationError("Euler class polynomial is not a cocycle")
    top = h_components(el).get(m)
    if top is None or top.is_zero():
        raise AlgebraValidationError(
            f"Euler class must have a nonzero h^{m} coefficient"
        )
    return EulerClass(
        cls=setup.ext_ring.project(el),
        element=el,
        m=m,
        weights=None,
        top_coefficient=setup.base_ring.project(top),
    )


@dataclass(frozen=True)
class ZeroDivisorReport:
    """Result of checking that cup product with a class is injective."""

    ok: bool
    degrees_checked: tuple[int, ...]
    failed_degree: Optional[int] = None


def verify_not_zero_divisor(
    ring: CohomologyRing, chi: EulerClass
) -> ZeroDivisorReport:
    """Check degreewise that multiplication by the Euler class is injective.

    Covers every degree whose product still fits under the cap.  For a
    genuine Euler class this always holds, so a failure flags corrupted
    input data.
    """
    checked = []
    for n in range(ring.top - 2 * chi.m + 1):
        mat = cup_matrix(ring, chi.cls, n)
        checked.append(n)
        if rank(mat) != ring.class_dim(n):
            return ZeroDivisorReport(
                ok=False, degrees_checked=tuple(checked), failed_degree=n
            )
    return ZeroDivisorReport(ok=True, degrees_checked=tuple(checked))


# --------------------------------------------------------------------------
# The h-comparison membership certificate
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HComparisonReport:
    """Outcome of testing the witness against the scaled-generator ideal.

    ``fired`` means the linear system has no solution, certifying that
    the witness avoids the ideal.  When a solution exists the report
    carries it together with its consequences: the combination
    t = chi^2 x - u a - w b is killed by chi and must therefore vanish,
    and comparing top h coefficients of chi^2 x = u a + w b exhibits the
    base representative inside the base ideal of u and w.
    """

    fired: bool
    solution_a: Optional[CohomologyClass] = None
    solution_b: Optional[CohomologyClass] = None
    t_is_zero: Optional[bool] = None
    extracted: Optional[CohomologyClass] = None
    extraction_matches: Optional[bool] = None


def h_comparison_check(
    setup: EquivariantSetup,
    chi: EulerClass,
    z: CohomologyClass,
    chi_u: CohomologyClass,
    chi_w: CohomologyClass,
    u: CohomologyClass,
    w: CohomologyClass,
    x: CohomologyClass,
) -> HComparisonReport:
    """Decide membership of z = chi^3 x in the ideal of chi u and chi w.

    Solves z = (chi u) a + (chi w) b over the extension ring.  No
    solution certifies non-membership.  A solution is pushed through the
    comparison argument: chi is not a zero divisor, so chi^2 x = u a + w b
    on the nose, and reading off the h^(2m) coefficient writes the base
    class x inside the base ideal (u, w).
    """
    ring = setup.ext_ring
    nz = z.degree
    da = nz - chi_u.degree
    db = nz - chi_w.degree
    mat_a = cup_matrix(ring, chi_u, da)
    mat_b = cup_matrix(ring, chi_w, db)
    combined = Matrix.from_columns(
        list(mat_a.columns()) + list(mat_b.columns()), ring.class_dim(nz)
    )
    sol = solve(combined, z.coords)
    if sol is None:
        return HComparisonReport(fired=True)

    dim_a = ring.class_dim(da)
    a_cls = CohomologyClass(ring, da, sol[:dim_a])
    b_cls = CohomologyClass(ring, db, sol[dim_a:])

    x_ext = setup.embed.apply(x)
    u_ext = setup.embed.apply(u)
    w_ext = setup.embed.apply(w)
    chi2 = cup(chi.cls, chi.cls)
    t = cup(chi2, x_ext) - cup(u_ext, a_cls) - cup(w_ext, b_cls)
    if not cup(chi.cls, t).is_zero():
        raise ConsistencyError(
            "chi * (chi^2 x - u a - w b) should reproduce z - z = 0"
        )
    if not t.is_zero():
        raise ConsistencyError(
            "found a class killed by the Euler class although the "
            "zero-divisor check passed"
        )

    base_ring = setup.base_ring
    two_m = 2 * chi.m
    a_comp = class_h_components(ring, base_ring, a_cls).get(two_m)
    b_comp = class_h_components(ring, base_ring, b_cls).get(two_m)
    lam = class_h_components(ring, base_ring, chi2).get(two_m)

    extracted = None
    matches = None
    scalar = _unit_multiple(base_ring, lam)
    if scalar is not None and scalar != 0:
        rhs = base_ring.zero_class(x.degree)
        if a_comp is not None:
            rhs = rhs + cup(u, a_comp)
        if b_comp is not None:
            rhs = rhs + cup(w, b_comp)
        extracted = rhs.scale(Fraction(1) / scalar)
        matches = extracted == x
        if not matches:
            raise ConsistencyError(
                "h-coefficient comparison did not reproduce the base "
                "representative from the membership solution"
            )
    return HComparisonReport(
        fired=False,
        solution_a=a_cls,
        solution_b=b_cls,
        t_is_zero=True,
        extracted=extracted,
        extraction_matches=matches,
    )


def _unit_multiple(
    ring: CohomologyRing, cls: Optional[CohomologyClass]
) -> Optional[Fraction]:
    """The scalar c with cls = c * [1], or None if there is no such c."""
    if cls is None or cls.degree != 0:
        return None
    unit = ring.unit_class()
    pivot = next((k for k, c in enumerate(unit.coords) if c != 0), None)
    if pivot is None:
        return None
    scalar = cls.coords[pivot] / unit.coords[pivot]
    if cls.coords != unit.scale(scalar).coords:
        return None
    return scalar


# --------------------------------------------------------------------------
# The Euler-scaled product check
# --------------------------------------------------------------------------


@dataclass(eq=False)
class EulerScaledReport:
    """Full audit trail of the Euler-scaled triple product check."""

    setup: EquivariantSetup
    chi: EulerClass
    degrees: tuple[int, int, int]
    ext_cap: int
    zero_divisor: ZeroDivisorReport
    base_result: MasseyResult
    embedded_result: MasseyResult
    h0_containment: ContainmentReport
    embed_functoriality: ContainmentReport
    embedded_nonvanishing_direct: bool
    embedded_nonvanishing_via_base: bool
    chain: tuple[ContainmentReport, ContainmentReport, ContainmentReport]
    scaled_result: MasseyResult
    witness: CohomologyClass
    witness_in_scaled: bool
    ideal_member: bool
    machinery: HComparisonReport
    verdict: str


def required_cap(
    base: CochainAlgebra, u: ClassInput, v: ClassInput, w: ClassInput, m: int
) -> int:
    """Smallest extension cap with room for chi^3 x and its verification.

    chi has degree 2m, so the fully scaled product lives in degree
    6m + |u| + |v| + |w| - 1 and the membership checks need one degree
    above it.
    """
    if isinstance(u, CohomologyClass):
        p, q, r = u.degree, v.degree, w.degree
    else:
        p = formal_degree(base, u)
        q = formal_degree(base, v)
        r = formal_degree(base, w)
    return 6 * m + p + q + r


def check_euler_scaled_massey(
    base: CochainAlgebra,
    u: ClassInput,
    v: ClassInput,
    w: ClassInput,
    bundles: Optional[Sequence[WeightedLineBundle]] = None,
    chi_polynomial: Optional[PolyInput] = None,
    m: Optional[int] = None,
    hname: str = "h",
    min_cap: Optional[int] = None,
) -> EulerScaledReport:
    """Check that a non-vanishing triple product survives Euler scaling.

    Starting from a non-vanishing product <u, v, w> over the base (the
    premise; PremiseError otherwise), this verifies the full chain in the
    degree-2 extension: the embedded product is non-vanishing by two
    routes, multiplying the Euler class into each slot in turn keeps the
    cosets nested, and the witness chi^3 x lies in the fully scaled
    product but outside the ideal of the scaled outer classes, so the
    scaled product cannot vanish.  The cap is sized automatically from
    the input degrees and never truncates the given base presentation.
    """
    if bundles is not None and (chi_polynomial is not None or m is not None):
        raise ValueError("pass bundles or an explicit class with m, not both")
    if bundles is None and (chi_polynomial is None or m is None):
        raise ValueError("pass bundles, or chi_polynomial together with m")

    mm = len(bundles) if bundles is not None else m
    required = required_cap(base, u, v, w, mm)
    cap = max(required, min_cap or 0, base.cap)
    setup = build_setup(base, cap, hname)

    if bundles is not None:
        chi = euler_class(setup, bundles)
    else:
        chi = euler_class_from_polynomial(setup, chi_polynomial, m)

    zero_divisor = verify_not_zero_divisor(setup.ext_ring, chi)
    if not zero_divisor.ok:
        raise ConsistencyError(
            "Euler class acts as a zero divisor out of degree "
            f"{zero_divisor.failed_degree}"
        )

    u_cls = _port_class(setup.base_ring, setup.base, u)
    v_cls = _port_class(setup.base_ring, setup.base, v)
    w_cls = _port_class(setup.base_ring, setup.base, w)

    try:
        base_result = triple_massey(u_cls, v_cls, w_cls)
    except AlgebraValidationError as exc:
        raise PremiseError(f"the base triple product is not available: {exc}")
    if not base_result.defined:
        raise PremiseError(
            f"the base triple product is not defined: {base_result.reason}"
        )
    if base_result.vanishes:
        raise PremiseError(
            "the base triple product vanishes; there is nothing to scale"
        )

    U = setup.embed.apply(u_cls)
    V = setup.embed.apply(v_cls)
    W = setup.embed.apply(w_cls)
    embedded_result = triple_massey(U, V, W)
    if not embedded_result.defined:
        raise ConsistencyError(
            "embedded triple product must be defined when the base one is"
        )
    direct_nonvanish = not embedded_result.vanishes

    retracted = setup.retract.apply_coset(
        embedded_result.coset, embedded_result.degree
    )
    point_ok = base_result.coset.contains(retracted.point)
    direction_ok = base_result.coset.direction.contains_subspace(
        retracted.direction
    )
    h0_containment = ContainmentReport(
        holds=point_ok and direction_ok,
        scaled=retracted,
        target=base_result.coset,
        point_in_target=point_ok,
        direction_in_target=direction_ok,
    )
    via_base = h0_containment.holds and not base_result.vanishes
    if direct_nonvanish != via_base:
        raise ConsistencyError(
            "direct zero test and base-projection route disagree about the "
            "embedded product"
        )

    pushed = setup.embed.apply_coset(base_result.coset, base_result.degree)
    embed_point_ok = embedded_result.coset.contains(pushed.point)
    embed_dir_ok = embedded_result.coset.direction.contains_subspace(
        pushed.direction
    )
    embed_functoriality = ContainmentReport(
        holds=embed_point_ok and embed_dir_ok,
        scaled=pushed,
        target=embedded_result.coset,
        point_in_target=embed_point_ok,
        direction_in_target=embed_dir_ok,
    )
    if not embed_functoriality.holds:
        raise ConsistencyError(
            "the embedded image of the base product must land inside the "
            "extension's product"
        )

    chain1, _, _ = check_scaling_law(chi.cls, U, V, W, 1)
    chi_u = cup(chi.cls, U)
    chain2, _, _ = check_scaling_law(chi.cls, chi_u, V, W, 2)
    chi_v = cup(chi.cls, V)
    chain3, _, scaled_result = check_scaling_law(chi.cls, chi_u, chi_v, W, 3)
    chi_w = cup(chi.cls, W)
    for step, report in enumerate((chain1, chain2, chain3), start=1):
        if not report.holds:
            raise ConsistencyError(
                f"scaling containment fails at step {step} of the chain"
            )

    x_ext = setup.embed.apply(base_result.rep_class)
    z = cup(chi.cls, cup(chi.cls, cup(chi.cls, x_ext)))
    witness_in_scaled = scaled_result.coset.contains(z.coords)
    if not witness_in_scaled:
        raise ConsistencyError(
            "chi^3 times the base representative must lie in the fully "
            "scaled product"
        )

    piece = ideal_degree_piece(setup.ext_ring, [chi_u, chi_w], z.degree)
    ideal_member = member(z.coords, piece)

    machinery = h_comparison_check(
        setup, chi, z, chi_u, chi_w, u_cls, w_cls, base_result.rep_class
    )

    if machinery.fired == ideal_member:
        raise ConsistencyError(
            "membership solve and ideal-piece test disagree about the witness"
        )
    if machinery.fired != (not scaled_result.vanishes):
        raise ConsistencyError(
            "membership certificate and the scaled product's zero test "
            "disagree"
        )

    verdict = "non-vanishing" if machinery.fired else "vanishes"
    return EulerScaledReport(
        setup=setup,
        chi=chi,
        degrees=(u_cls.degree, v_cls.degree, w_cls.degree),
        ext_cap=cap,
        zero_divisor=zero_divisor,
        base_result=base_result,
        embedded_result=embedded_result,
        h0_containment=h0_containment,
        embed_functoriality=embed_functoriality,
        embedded_nonvanishing_direct=direct_nonvanish,
        embedded_nonvanishing_via_base=via_base,
        chain=(chain1, chain2, chain3),
        scaled_result=scaled_result,
        witness=z,
        witness_in_scaled=witness_in_scaled,
        ideal_member=ideal_member,
        machinery=machinery,
        verdict=verdict,
    )


def _port_class(
    ring: CohomologyRing, algebra: CochainAlgebra, value: ClassInput
) -> CohomologyClass:
    """Read a class into a ring, transporting from a re-capped twin if needed.

    A re-capped copy of an algebra shares basis labels degree by degree,
    so a cocycle's coordinates carry over verbatim.
    """
    if not isinstance(value, CohomologyClass):
        return ring.class_from_polynomial(value)
    if value.ring is ring:
        return value
    rep = value.representative()
    n = rep.degree
    if n > algebra.cap or rep.algebra.basis_labels(n) != algebra.basis_labels(n):
        raise AlgebraValidationError(
            "class cannot be transported between unrelated algebras"
        )
    return ring.project(algebra.element(n, rep.coords))


# --------------------------------------------------------------------------
# Transfer data
# --------------------------------------------------------------------------


class HamiltonianTransferDatum:
    """Restriction and pushforward between two equivariant models.

    ``ambient`` models the equivariant cohomology of the whole space and
    ``fixed`` that of a fixed locus (a polynomial-generator extension).
    ``restrict`` is a cochain-level ring map; ``push_matrices[n]`` gives
    the degree n -> n + 2m pushforward on cohomology class coordinates.
    The defining relation is restrict(push(x)) = chi * x.
    """

    def __init__(
        self,
        name: str,
        ambient: CochainAlgebra,
        fixed: CochainAlgebra,
        restrict: AlgebraMorphism,
        push_matrices: Sequence[Matrix],
        chi_polynomial: PolyInput,
        m: int,
    ):
        self.name = name
        self.ambient = ambient
        self.fixed = fixed
        self.restrict = restrict
        self.push_matrices = tuple(push_matrices)
        self.chi_polynomial = chi_polynomial
        self.m = m
        self._ambient_ring: Optional[CohomologyRing] = None
        self._fixed_ring: Optional[CohomologyRing] = None
        self._restrict_map: Optional[InducedMap] = None

    @property
    def ambient_ring(self) -> CohomologyRing:
        if self._ambient_ring is None:
            self._ambient_ring = CohomologyRing(self.ambient)
        return self._ambient_ring

    @property
    def fixed_ring(self) -> CohomologyRing:
        if self._fixed_ring is None:
            self._fixed_ring = CohomologyRing(self.fixed)
        return self._fixed_ring

    @property
    def push_top(self) -> int:
        return len(self.push_matrices) - 1

    def chi_element(self) -> Element:
        return self.fixed.from_polynomial(
            self.chi_polynomial, expected_degree=2 * self.m
        )

    def chi_class(self) -> CohomologyClass:
        return self.fixed_ring.project(self.chi_element())

    def push(self, cls: CohomologyClass) -> CohomologyClass:
        if cls.ring is not self.fixed_ring:
            raise ValueError("pushforward input must live in the fixed ring")
        n = cls.degree
        if n > self.push_top:
            raise DegreeCapError(
                f"no pushforward matrix in degree {n}", required_cap=n
            )
        return CohomologyClass(
            self.ambient_ring,
            n + 2 * self.m,
            self.push_matrices[n].matvec(cls.coords),
        )

    def restrict_map(self) -> InducedMap:
        if self._restrict_map is None:
            self._restrict_map = InducedMap(
                self.restrict, self.ambient_ring, self.fixed_ring
            )
        return self._restrict_map

    def __repr__(self):
        return f"HamiltonianTransferDatum({self.name!r}, m={self.m})"


def validate_transfer_datum(datum: HamiltonianTransferDatum) -> list[str]:
    """All structural findings against a transfer datum, empty when valid.

    Checks, in order: the fixed model is a polynomial-generator extension
    and the Euler data has the right shape; the restriction is a ring map
    commuting with the differentials and injective on cohomology degree
    by degree; the projection formula restrict(push(e)) = chi * e holds
    on a class basis; the Euler class is not a zero divisor; the
    pushforward has full column rank, any kernel being traced back to the
    zero-divisor property through the projection formula.
    """
    findings: list[str] = []
    if datum.m < 1:
        findings.append(f"m must be at least 1, got {datum.m}")
        return findings
    if datum.fixed.tensor_info is None:
        findings.append("fixed model must be a polynomial-generator extension")
        return findings
    if (
        datum.restrict.source is not datum.ambient
        or datum.restrict.target is not datum.fixed
    ):
        findings.append(
            "restriction must map the ambient model to the fixed model"
        )
        return findings

    try:
        chi_el = datum.chi_element()
    except Exception as exc:
        findings.append(f"Euler class polynomial is invalid: {exc}")
        return findings
    if not chi_el.d().is_zero():
        findings.append("Euler class is not a cocycle")
        return findings
    top = h_components(chi_el).get(datum.m)
    if top is None or top.is_zero():
        findings.append(
            f"Euler class has no h^{datum.m} term; it cannot come from a "
            f"rank {datum.m} normal bundle"
        )

    for msg in validate_morphism(datum.restrict):
        findings.append(f"restriction: {msg}")
    if findings:
        return findings

    rmap = datum.restrict_map()
    for n in range(rmap.top + 1):
        if rank(rmap.matrix(n)) != datum.ambient_ring.class_dim(n):
            findings.append(
                f"restriction is not injective on cohomology in degree {n}"
            )
            break

    chi_cls = datum.chi_class()
    for n in range(datum.push_top + 1):
        mat = datum.push_matrices[n]
        if mat.cols != datum.fixed_ring.class_dim(n):
            findings.append(
                f"pushforward matrix in degree {n} has {mat.cols} columns, "
                f"want {datum.fixed_ring.class_dim(n)}"
            )
            return findings
        target_degree = n + 2 * datum.m
        if target_degree > datum.ambient_ring.top:
            findings.append(
                f"pushforward matrix in degree {n} lands in degree "
                f"{target_degree}, above the ambient top "
                f"{datum.ambient_ring.top}"
            )
            return findings
        if mat.rows != datum.ambient_ring.class_dim(target_degree):
            findings.append(
                f"pushforward matrix in degree {n} has {mat.rows} rows, "
                f"want {datum.ambient_ring.class_dim(target_degree)}"
            )
            return findings

    for n in range(datum.push_top + 1):
        if n + 2 * datum.m > min(datum.fixed_ring.top, rmap.top):
            break
        broken = False
        for e in datum.fixed_ring.basis_classes(n):
            pushed = datum.push(e)
            if rmap.apply(pushed) != cup(chi_cls, e):
                findings.append(
                    f"projection formula fails in degree {n}: "
                    "restrict(push(e)) != chi * e on a basis class"
                )
                broken = True
                break
        if broken:
            break

    euler = EulerClass(
        cls=chi_cls,
        element=chi_el,
        m=datum.m,
        weights=None,
        top_coefficient=chi_cls,
    )
    zd = verify_not_zero_divisor(datum.fixed_ring, euler)
    if not zd.ok:
        findings.append(
            "Euler class is a zero divisor: multiplication fails to be "
            f"injective out of degree {zd.failed_degree}"
        )

    for n in range(datum.push_top + 1):
        mat = datum.push_matrices[n]
        if rank(mat) == mat.cols:
            continue
        kern = kernel_basis(mat)
        x = CohomologyClass(datum.fixed_ring, n, kern.basis[0])
        if cup(chi_cls, x).is_zero():
            findings.append(
                f"pushforward has a kernel in degree {n}; the kernel class "
                "is killed by the Euler class, contradicting the "
                "zero-divisor property"
            )
        else:
            findings.append(
                f"pushforward has a kernel in degree {n} although the "
                "projection formula forces chi * x = 0 for kernel classes; "
                "the formula itself must be broken"
            )
        break

    return findings


def tautological_datum(
    base: CochainAlgebra,
    bundles: Optional[Sequence[WeightedLineBundle]] = None,
    chi_polynomial: Optional[PolyInput] = None,
    m: Optional[int] = None,
    cap: Optional[int] = None,
    hname: str = "h",
) -> HamiltonianTransferDatum:
    """The datum with ambient equal to fixed and push = cup with chi.

    Restriction is the identity, so the projection formula holds by
    construction; useful as a reference datum and for exercising the
    pipeline end to end without extra geometry.
    """
    setup = build_setup(base, cap, hname)
    if bundles is not None:
        chi = euler_class(setup, bundles)
        chi_poly = _bundle_polynomial(setup, bundles)
    else:
        chi = euler_class_from_polynomial(setup, chi_polynomial, m)
        chi_poly = chi_polynomial
    ring = setup.ext_ring
    push = [
        cup_matrix(ring, chi.cls, n) for n in range(ring.top - 2 * chi.m + 1)
    ]
    return HamiltonianTransferDatum(
        name="tautological",
        ambient=setup.ext,
        fixed=setup.ext,
        restrict=identity_morphism(setup.ext),
        push_matrices=push,
        chi_polynomial=chi_poly,
        m=chi.m,
    )


def _bundle_polynomial(
    setup: EquivariantSetup, bundles: Sequence[WeightedLineBundle]
) -> list:
    """The parsed-polynomial form of a product of bundle factors."""
    terms = [(Fraction(1), ())]
    for b in bundles:
        factor = parse_polynomial(b.c1) if isinstance(b.c1, str) else list(b.c1)
        factor = list(factor) + [(Fraction(b.weight), (setup.hname,))]
        terms = [
            (c1 * c2, tuple(f1) + tuple(f2))
            for c1, f1 in terms
            for c2, f2 in factor
        ]
    return terms


# --------------------------------------------------------------------------
# The transfer check
# --------------------------------------------------------------------------


@dataclass(eq=False)
class GysinReport:
    """Audit trail of a transfer along a datum."""

    status: str  # "non-vanishing" or "inconclusive"
    fixed_result: MasseyResult
    ambient_result: MasseyResult
    containment: ContainmentReport
    uv_restrict_zero: bool
    uv_direct_zero: bool
    vw_restrict_zero: bool
    vw_direct_zero: bool


def check_gysin_transfer(
    datum: HamiltonianTransferDatum,
    u: ClassInput,
    v: ClassInput,
    w: ClassInput,
) -> GysinReport:
    """Transfer a non-vanishing scaled product from the fixed locus upstairs.

    u, v and w live over the fixed model.  The product
    <chi u, chi v, chi w> must be defined there (UndefinedProductError
    otherwise).  The ambient inputs are the pushforwards; their
    consecutive products vanish both by restriction and by direct
    computation, the restriction maps the ambient product coset into the
    fixed one, and non-vanishing downstairs therefore transfers upstairs.
    A vanishing fixed product is reported as inconclusive.
    """
    fring = datum.fixed_ring
    chi_cls = datum.chi_class()
    u_cls = as_class(fring, u)
    v_cls = as_class(fring, v)
    w_cls = as_class(fring, w)

    chi_u = cup(chi_cls, u_cls)
    chi_v = cup(chi_cls, v_cls)
    chi_w = cup(chi_cls, w_cls)
    fixed_result = triple_massey(chi_u, chi_v, chi_w)
    if not fixed_result.defined:
        raise UndefinedProductError(
            "the scaled product over the fixed locus is not defined: "
            f"{fixed_result.reason}"
        )

    U = datum.push(u_cls)
    V = datum.push(v_cls)
    W = datum.push(w_cls)
    rmap = datum.restrict_map()

    uv = cup(U, V)
    if rmap.apply(uv) != cup(chi_u, chi_v):
        raise ConsistencyError(
            "restriction of the pushed product disagrees with the product "
            "of the scaled classes"
        )
    uv_restrict_zero = cup(chi_u, chi_v).is_zero()
    uv_direct_zero = uv.is_zero()
    if uv_restrict_zero and not uv_direct_zero:
        raise ConsistencyError(
            "pushed product is nonzero although its restriction vanishes "
            "and the restriction is injective"
        )

    vw = cup(V, W)
    if rmap.apply(vw) != cup(chi_v, chi_w):
        raise ConsistencyError(
            "restriction of the pushed product disagrees with the product "
            "of the scaled classes"
        )
    vw_restrict_zero = cup(chi_v, chi_w).is_zero()
    vw_direct_zero = vw.is_zero()
    if vw_restrict_zero and not vw_direct_zero:
        raise ConsistencyError(
            "pushed product is nonzero although its restriction vanishes "
            "and the restriction is injective"
        )

    ambient_result = triple_massey(U, V, W)
    if not ambient_result.defined:
        raise ConsistencyError(
            "ambient product must be defined once both obstructions vanish"
        )

    image = rmap.apply_coset(ambient_result.coset, ambient_result.degree)
    point_ok = fixed_result.coset.contains(image.point)
    direction_ok = fixed_result.coset.direction.contains_subspace(
        image.direction
    )
    containment = ContainmentReport(
        holds=point_ok and direction_ok,
        scaled=image,
        target=fixed_result.coset,
        point_in_target=point_ok,
        direction_in_target=direction_ok,
    )
    if not containment.holds:
        raise ConsistencyError(
            "restriction does not map the ambient product into the fixed one"
        )

    if fixed_result.vanishes:
        status = "inconclusive"
    else:
        if ambient_result.vanishes:
            raise ConsistencyError(
                "ambient product vanishes although its restriction coset "
                "avoids zero"
            )
        status = "non-vanishing"
    return GysinReport(
        status=status,
        fixed_result=fixed_result,
        ambient_result=ambient_result,
        containment=containment,
        uv_restrict_zero=uv_restrict_zero,
        uv_direct_zero=uv_direct_zero,
        vw_restrict_zero=vw_restrict_zero,
        vw_direct_zero=vw_direct_zero,
    )


# --------------------------------------------------------------------------
# The full pipeline
# --------------------------------------------------------------------------


@dataclass(eq=False)
class PipelineReport:
    """Outcome of the full premise, scaling and transfer run."""

    status: str  # "ok", "premise-failed" or "invalid-datum"
    verdict: str  # "non-vanishing", "vanishes" or "inconclusive"
    premise_error: Optional[str] = None
    datum_findings: Optional[list[str]] = None
    euler: Optional[EulerScaledReport] = None
    gysin: Optional[GysinReport] = None
    gysin_error: Optional[str] = None


def run_transfer_pipeline(
    base: Optional[CochainAlgebra],
    u: ClassInput,
    v: ClassInput,
    w: ClassInput,
    bundles: Optional[Sequence[WeightedLineBundle]] = None,
    chi_polynomial: Optional[PolyInput] = None,
    m: Optional[int] = None,
    datum: Optional[HamiltonianTransferDatum] = None,
    min_cap: Optional[int] = None,
) -> PipelineReport:
    """Run the whole verification: premise, Euler scaling, then transfer.

    Without a datum this is the Euler-scaled check alone.  With a datum,
    the datum is validated first (status "invalid-datum" with findings if
    it is broken), the Euler-scaled stage runs over the datum's fixed
    base, and the transfer stage pushes the product into the ambient
    model.  A failed premise skips the scaling stage but still attempts
    the transfer, whose hypothesis is independent of it.
    """
    if datum is not None:
        findings = validate_transfer_datum(datum)
        if findings:
            return PipelineReport(
                status="invalid-datum",
                verdict="inconclusive",
                datum_findings=findings,
            )
        if bundles is not None or chi_polynomial is not None or m is not None:
            raise ValueError(
                "with a datum, the Euler data comes from the datum itself"
            )
        base = datum.fixed.tensor_info.base
        chi_polynomial = datum.chi_polynomial
        m = datum.m
        hname = datum.fixed.tensor_info.hname
    else:
        if base is None:
            raise ValueError("pass a base algebra or a datum")
        hname = "h"

    euler_report: Optional[EulerScaledReport] = None
    premise_error: Optional[str] = None
    try:
        euler_report = check_euler_scaled_massey(
            base,
            u,
            v,
            w,
            bundles=bundles,
            chi_polynomial=chi_polynomial,
            m=m,
            hname=hname,
            min_cap=min_cap,
        )
    except PremiseError as exc:
        premise_error = str(exc)

    if datum is not None and euler_report is not None:
        _verify_fixed_compatibility(datum, euler_report)

    gysin_report: Optional[GysinReport] = None
    gysin_error: Optional[str] = None
    if datum is not None:
        try:
            gysin_report = check_gysin_transfer(
                datum,
                _fixed_class(datum, u),
                _fixed_class(datum, v),
                _fixed_class(datum, w),
            )
        except (UndefinedProductError, DegreeCapError) as exc:
            gysin_error = str(exc)

    status = "ok" if premise_error is None else "premise-failed"
    if gysin_report is not None and gysin_report.status == "non-vanishing":
        verdict = "non-vanishing"
    elif euler_report is not None:
        verdict = euler_report.verdict
    else:
        verdict = "inconclusive"

    return PipelineReport(
        status=status,
        verdict=verdict,
        premise_error=premise_error,
        euler=euler_report,
        gysin=gysin_report,
        gysin_error=gysin_error,
    )


def _fixed_class(
    datum: HamiltonianTransferDatum, value: ClassInput
) -> CohomologyClass:
    """Read a pipeline input as a class over the datum's fixed model.

    Polynomials are evaluated there directly (base generator names are
    names of the extension too); classes over a copy of the base are
    transported through the block-0 inclusion.
    """
    fring = datum.fixed_ring
    if not isinstance(value, CohomologyClass):
        return fring.class_from_polynomial(value)
    if value.ring is fring:
        return value
    rep = value.representative()
    info = datum.fixed.tensor_info
    n = rep.degree
    blk = info.block(n, 0) if n <= datum.fixed.cap else None
    if blk is None or blk[3] != len(rep.coords):
        raise AlgebraValidationError(
            "class cannot be transported into the fixed model"
        )
    coords = [Fraction(0)] * datum.fixed.dim(n)
    coords[blk[2] : blk[2] + blk[3]] = rep.coords
    return fring.project(datum.fixed.element(n, coords))


def _verify_fixed_compatibility(
    datum: HamiltonianTransferDatum, report: EulerScaledReport
) -> None:
    """The scaling stage rebuilt the fixed model; both copies must agree."""
    a = datum.fixed
    b = report.setup.ext
    upto = min(a.cap, b.cap)
    for n in range(upto + 1):
        if a.basis_labels(n) != b.basis_labels(n):
            raise ConsistencyError(
                f"rebuilt fixed model disagrees with the datum in degree {n}"
            )
    if (
        2 * datum.m <= upto
        and datum.chi_element().coords != report.chi.element.coords
    ):
        raise ConsistencyError(
            "rebuilt Euler class disagrees with the datum's Euler class"
        )


# --------------------------------------------------------------------------
# Family scans
# --------------------------------------------------------------------------


@dataclass(eq=False)
class ScanConfig:
    """One family member: a model, a triple and an expected outcome."""

    name: str
    base: Optional[CochainAlgebra]
    u: ClassInput
    v: ClassInput
    w: ClassInput
    bundles: Optional[Sequence[WeightedLineBundle]] = None
    chi_polynomial: Optional[PolyInput] = None
    m: Optional[int] = None
    datum: Optional[HamiltonianTransferDatum] = None
    min_cap: Optional[int] = None
    expect: Optional[str] = None  # a status or a verdict


@dataclass(frozen=True)
class ScanRow:
    name: str
    status: str
    verdict: str
    note: str = ""


@dataclass(eq=False)
class ScanReport:
    rows: list[ScanRow]
    findings: list[str]
    total: int = 0
    completed: int = 0

    @property
    def exhausted(self) -> bool:
        return self.completed < self.total


def scan_families(
    configs: Sequence[ScanConfig], budget: Optional[int] = None
) -> ScanReport:
    """Run the pipeline over a family and collect anomalies.

    Every config produces a row.  A finding is recorded only for hard
    failures (internal inconsistencies, unexpected exceptions) or when a
    config declares an expectation the run contradicts; an invalid datum
    is an ordinary row, flagged in place.  ``budget`` bounds the number
    of configurations run; the report records how far the scan got.
    """
    if budget is not None and budget < 0:
        raise ValueError("budget must be nonnegative")
    rows: list[ScanRow] = []
    findings: list[str] = []
    run = configs if budget is None else configs[:budget]
    for cfg in run:
        try:
            result = run_transfer_pipeline(
                cfg.base,
                cfg.u,
                cfg.v,
                cfg.w,
                bundles=cfg.bundles,
                chi_polynomial=cfg.chi_polynomial,
                m=cfg.m,
                datum=cfg.datum,
                min_cap=cfg.min_cap,
            )
        except Exception as exc:
            rows.append(ScanRow(cfg.name, "error", "inconclusive", str(exc)))
            findings.append(f"{cfg.name}: {type(exc).__name__}: {exc}")
            continue
        note = ""
        if result.status == "invalid-datum" and result.datum_findings:
            note = result.datum_findings[0]
        elif result.premise_error:
            note = result.premise_error
        elif result.gysin_error:
            note = result.gysin_error
        rows.append(ScanRow(cfg.name, result.status, result.verdict, note))
        if cfg.expect is not None and cfg.expect not in (
            result.status,
            result.verdict,
        ):
            findings.append(
                f"{cfg.name}: expected {cfg.expect!r}, got status "
                f"{result.status!r} with verdict {result.verdict!r}"
            )
    return ScanReport(
        rows=rows, findings=findings, total=len(configs), completed=len(run)
    )
