"""Global sections of ``omega_Z^k(T)`` on a subcurve Z, computed exactly.

On a component C of Z a section is a numerator polynomial ``f_C(t)`` in the
frame::

    f_C(t) (dt)^k / [ prod_i (t - t_i)^k  *  prod_j (t - s_j)^{m_j} ]

where ``t_i`` runs over branch points of internal nodes of Z on C and
``(s_j, m_j)`` over twist points.  Points at infinity do not appear in the
product; they only enter the degree bound ``deg f_C <= k(delta_C - 2) +
sum m_j``.  Negative twist multiplicities move factors into the numerator,
which realizes ideal twists ``I_S (x) L``.

Local generators (used for evaluation and gluing):

* finite point ``q`` with frame exponent ``e`` (k at a node branch, m at a
  twist point, 0 elsewhere): ``(dt)^k / (t - q)^e``;
* the point at infinity, ``u = 1/t``: ``(-1)^k (du)^k / u^e``.

A node glues two branches with local coordinates x, y: the section's
leading coefficients satisfy ``L_a = (-1)^k L_b`` in the frames
``(dx/x)^k, (dy/y)^k``; for k = 1 this is the residue condition.
"""
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import _poly, linalg
from .curve import INF, BranchPoint, NodalCurve, Subcurve, format_scalar, param_key, parse_scalar
from .errors import ExpressFailure, InvalidBundle, PoleAtPoint, TwistOnNode, ZeroSpace


@dataclass(frozen=True)
class TwistDivisor:
    """Integer combination of smooth points; entries are ``(BranchPoint, m)``."""

    entries: tuple = ()

    def __post_init__(self):
        merged = {}
        for pt, m in self.entries:
            if not isinstance(pt, BranchPoint):
                pt = BranchPoint(str(pt[0]), parse_scalar(pt[1]))
            key = (pt.component_id, param_key(pt.param))
            old = merged.get(key, (pt, 0))
            merged[key] = (pt, old[1] + int(m))
        items = sorted((v for v in merged.values() if v[1]),
                       key=lambda e: (e[0].component_id, param_key(e[0].param)))
        object.__setattr__(self, "entries", tuple(items))

    @classmethod
    def from_points(cls, points, multiplicity=1):
        return cls(tuple((p, multiplicity) for p in points))

    @property
    def degree(self):
        return sum(m for _, m in self.entries)

    @property
    def is_effective(self):
        return all(m > 0 for _, m in self.entries)

    def on(self, component_id):
        return [(p, m) for p, m in self.entries if p.component_id == component_id]

    def restricted(self, component_ids):
        return TwistDivisor(tuple((p, m) for p, m in self.entries if p.component_id in component_ids))

    def __add__(self, other):
        return TwistDivisor(self.entries + other.entries)

    def __neg__(self):
        return TwistDivisor(tuple((p, -m) for p, m in self.entries))

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, factor):
        return TwistDivisor(tuple((p, m * factor) for p, m in self.entries))

    def to_list(self):
        return [{"comp": p.component_id, "t": format_scalar(p.param), "m": m}
                for p, m in self.entries]

    @classmethod
    def from_list(cls, items):
        return cls(tuple((BranchPoint(str(d["comp"]), parse_scalar(d["t"])), int(d.get("m", 1)))
                         for d in items))


EMPTY_TWIST = TwistDivisor()


@dataclass(frozen=True)
class SpecialPoint:
    param: object
    exponent: int
    kind: str  # "node" or "twist"
    node_id: str = ""
    side: str = ""


@dataclass(frozen=True)
class BundleSpec:
    """The line bundle ``omega_Z^k(twist)`` on the subcurve Z.

    ``k`` may be negative internally (Serre duals); user-facing constructors
    keep it non-negative.
    """

    Z: Subcurve
    k: int
    twist: TwistDivisor = EMPTY_TWIST

    def __post_init__(self):
        for p, _ in self.twist.entries:
            if p.component_id not in self.Z.component_ids:
                raise InvalidBundle(f"twist point {p} is not on the subcurve {self.Z}")
        for n in self.Z.internal_nodes:
            for br in n.branches():
                for p, _ in self.twist.on(br.component_id):
                    if param_key(p.param) == param_key(br.param):
                        raise InvalidBundle(f"twist point {p} sits on internal node {n.id}")

    @property
    def curve(self):
        return self.Z.parent

    @cached_property
    def special_points(self):
        """Per component: special points with their frame exponents."""
        out = {}
        for cid in self.Z.components:
            pts = []
            for n in self.Z.internal_nodes:
                if n.branch_a.component_id == cid:
                    pts.append(SpecialPoint(n.branch_a.param, self.k, "node", n.id, "a"))
                if n.branch_b.component_id == cid:
                    pts.append(SpecialPoint(n.branch_b.param, self.k, "node", n.id, "b"))
            for p, m in self.twist.on(cid):
                pts.append(SpecialPoint(p.param, m, "twist"))
            out[cid] = tuple(pts)
        return out

    @cached_property
    def degree_bounds(self):
        return {cid: sum(sp.exponent for sp in pts) - 2 * self.k
                for cid, pts in self.special_points.items()}

    def component_degree(self, component_id):
        return self.degree_bounds[component_id]

    @property
    def degree(self):
        return sum(self.degree_bounds.values())

    @cached_property
    def layout(self):
        """``{component: (offset, length)}`` inside a coefficient vector."""
        out = {}
        off = 0
        for cid in self.Z.components:
            n = max(self.degree_bounds[cid] + 1, 0)
            out[cid] = (off, n)
            off += n
        return out

    @property
    def n_unknowns(self):
        return sum(n for _, n in self.layout.values())

    def tensor(self, other):
        if self.Z != other.Z:
            from .errors import BundleMismatch

            raise BundleMismatch(f"bundles live on {self.Z} and {other.Z}")
        return BundleSpec(self.Z, self.k + other.k, self.twist + other.twist)

    def power(self, n):
        return BundleSpec(self.Z, self.k * n, self.twist.scaled(n))

    def dual_times_omega(self):
        """``omega_Z (x) L^dual``, whose h0 is h1(L) by Serre duality."""
        return BundleSpec(self.Z, 1 - self.k, -self.twist)

    def minus(self, other):
        """``L (x) M^dual``."""
        if self.Z != other.Z:
            from .errors import BundleMismatch

            raise BundleMismatch(f"bundles live on {self.Z} and {other.Z}")
        return BundleSpec(self.Z, self.k - other.k, self.twist - other.twist)

    def with_twist(self, extra):
        return BundleSpec(self.Z, self.k, self.twist + extra)

    def describe(self):
        t = ", ".join(f"{m:+d}*{p}" for p, m in self.twist.entries)
        return f"omega_{self.Z}^{self.k}({t})"

    def to_dict(self):
        return {"subcurve": list(self.Z.components), "k": self.k, "twist": self.twist.to_list()}


def restrict_bundle(curve, Z, k, extra_twist=EMPTY_TWIST):
    """``omega_X^k|_Z (x) O(extra)`` written as ``omega_Z^k(k D_Z + extra)``."""
    if not isinstance(Z, Subcurve):
        Z = Subcurve(curve, frozenset(Z))
    branch_keys = {(br.component_id, param_key(br.param))
                   for n in curve.nodes for br in n.branches()}
    for p, _ in extra_twist.entries:
        if (p.component_id, param_key(p.param)) in branch_keys:
            raise TwistOnNode(f"twist point {p} is a node branch point")
    boundary = TwistDivisor(tuple((br, k) for _, br in Z.boundary_branches()))
    return BundleSpec(Z, k, boundary + extra_twist)


def canonical_bundle(curve, k=1):
    return BundleSpec(curve.full(), k)


# --------------------------------------------------------------------- jets


def _finite_specials(bundle, cid, exclude_key):
    return [(sp.param, sp.exponent) for sp in bundle.special_points[cid]
            if sp.param is not INF and param_key(sp.param) != exclude_key and sp.exponent]


def local_jets(bundle, cid, param, order):
    """Linear functionals on ``f_C`` giving the first ``order`` Taylor
    coefficients of the section at ``param`` in the local generator there."""
    N = bundle.degree_bounds[cid]
    length = max(N + 1, 0)
    if length == 0:
        return [[] for _ in range(order)]
    key = param_key(param)
    others = _finite_specials(bundle, cid, key)
    if param is INF:
        series = [Fraction(1)] + [Fraction(0)] * (order - 1)
        for p, e in others:
            s = _poly.binomial_series(1, -e, order)
            s = [c * (-p) ** j for j, c in enumerate(s)]
            series = _poly.series_mul(series, s, order)
        sign = -1 if bundle.k % 2 else 1
        out = []
        for j in range(order):
            row = [Fraction(0)] * length
            for i in range(min(j, N) + 1):
                row[N - i] = sign * series[j - i]
            out.append(row)
        return out
    q = Fraction(param)
    series = [Fraction(1)] + [Fraction(0)] * (order - 1)
    for p, e in others:
        series = _poly.series_mul(series, _poly.binomial_series(q - p, -e, order), order)
    out = []
    powers = [q ** d for d in range(length)]
    from math import comb

    for j in range(order):
        row = [Fraction(0)] * length
        for d in range(length):
            acc = Fraction(0)
            for i in range(min(j, d) + 1):
                if series[j - i]:
                    acc += comb(d, i) * powers[d - i] * series[j - i]
            row[d] = acc
        out.append(row)
    return out


def _embed(bundle, cid, local):
    off, n = bundle.layout[cid]
    row = [Fraction(0)] * bundle.n_unknowns
    row[off:off + n] = local
    return row


def jet_functionals(bundle, cid, param, order=1):
    """Jet functionals embedded in the full coefficient vector."""
    return [_embed(bundle, cid, row) for row in local_jets(bundle, cid, param, order)]


def node_functionals(bundle, node, side, order=1):
    br = node.branch_a if side == "a" else node.branch_b
    return jet_functionals(bundle, br.component_id, br.param, order)


def gluing_rows(bundle):
    sign = -1 if bundle.k % 2 else 1
    rows = []
    for n in bundle.Z.internal_nodes:
        ra = node_functionals(bundle, n, "a")[0]
        rb = node_functionals(bundle, n, "b")[0]
        rows.append([x - sign * y for x, y in zip(ra, rb)])
    return rows


# ------------------------------------------------------------------ sections


@dataclass(frozen=True)
class Section:
    bundle: BundleSpec
    numerators: dict  # component id -> coefficient list (low degree first)

    @property
    def is_zero(self):
        return not any(any(c) for c in self.numerators.values())

    def vector(self):
        v = [0] * self.bundle.n_unknowns
        for cid, (off, n) in self.bundle.layout.items():
            coeffs = self.numerators.get(cid, [])
            v[off:off + len(coeffs)] = coeffs
        return v


class SectionBasis:
    """Exact basis of ``H^0(Z, bundle)``.

    ``vectors`` are primitive integer coefficient vectors; vector ``j`` is the
    only one nonzero at column ``free[j]``.
    """

    def __init__(self, bundle, vectors, free, constraints):
        self.bundle = bundle
        self.vectors = vectors
        self.free = free
        self.constraints = constraints

    @property
    def h0(self):
        return len(self.vectors)

    @property
    def degree(self):
        return self.bundle.degree

    @property
    def euler_characteristic(self):
        return self.bundle.degree + 1 - self.bundle.Z.genus

    @property
    def h1(self):
        return self.h0 - self.euler_characteristic

    def __len__(self):
        return self.h0

    def section(self, j):
        v = self.vectors[j]
        nums = {cid: v[off:off + n] for cid, (off, n) in self.bundle.layout.items()}
        return Section(self.bundle, nums)

    @property
    def sections(self):
        return [self.section(j) for j in range(self.h0)]

    def contains(self, vec):
        return all(x == 0 for x in linalg.mat_vec(self.constraints, vec))

    def coordinates(self, vec, check=True):
        """Coordinates of a coefficient vector in this basis (exact)."""
        if check and not self.contains(vec):
            raise ExpressFailure(f"vector is not a section of {self.bundle.describe()}")
        return [Fraction(vec[f], b[f]) for f, b in zip(self.free, self.vectors)]

    def functional_matrix(self, functionals):
        """Rows: functionals; columns: basis sections."""
        return [[sum(a * b for a, b in zip(phi, v) if a and b) for v in self.vectors]
                for phi in functionals]

    def to_dict(self):
        frame = []
        for cid in self.bundle.Z.components:
            frame.append({
                "component": cid,
                "degree_bound": self.bundle.degree_bounds[cid],
                "special_points": [
                    {"t": format_scalar(sp.param), "exponent": sp.exponent, "kind": sp.kind,
                     **({"node": sp.node_id, "side": sp.side} if sp.kind == "node" else {})}
                    for sp in self.bundle.special_points[cid]
                ],
            })
        return {
            "bundle": self.bundle.to_dict(),
            "frame": {
                "convention": "f(t) dt^k / prod (t - p)^e over finite special points",
                "components": frame,
            },
            "h0": self.h0,
            "h1": self.h1,
            "degree": self.degree,
            "sections": [
                {cid: [str(Fraction(c)) for c in s.numerators[cid]] for cid in self.bundle.Z.components}
                for s in self.sections
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def bundle_from_dict(curve, data):
    Z = Subcurve(curve, frozenset(data["subcurve"]))
    return BundleSpec(Z, int(data["k"]), TwistDivisor.from_list(data.get("twist", [])))


def basis_from_dict(curve, data):
    """Rebuild an exported basis; the stored sections are used verbatim."""
    bundle = bundle_from_dict(curve, data["bundle"])
    constraints = [linalg.integer_row(r) for r in gluing_rows(bundle)]
    vectors = []
    for s in data["sections"]:
        v = [0] * bundle.n_unknowns
        for cid, (off, n) in bundle.layout.items():
            coeffs = [Fraction(c) for c in s.get(cid, [])]
            if len(coeffs) != n:
                raise InvalidBundle(f"component {cid}: expected {n} coefficients")
            v[off:off + n] = [int(c) if c.denominator == 1 else c for c in coeffs]
        vectors.append(v)
    free = []
    for v in vectors:
        free.append(next(i for i, x in enumerate(v) if x and all(
            w is v or not w[i] for w in vectors)))
    return SectionBasis(bundle, vectors, free, constraints)


def sections_basis(bundle):
    """Exact basis of ``H^0`` by nullspace of the gluing constraints."""
    if not isinstance(bundle, BundleSpec):
        raise InvalidBundle(f"expected a BundleSpec, got {type(bundle).__name__}")
    rows = gluing_rows(bundle)
    ncols = bundle.n_unknowns
    constraints = [linalg.integer_row(r) for r in rows]
    if ncols == 0:
        return SectionBasis(bundle, [], [], constraints)
    vectors, free = linalg.nullspace(constraints, ncols)
    return SectionBasis(bundle, vectors, free, constraints)


def h1_by_duality(bundle):
    """``h^1(L) = h^0(omega_Z (x) L^dual)`` computed as a nullspace."""
    return sections_basis(bundle.dual_times_omega()).h0


# ------------------------------------------------------------ restrictions


def restriction_map(curve, Z, k, extra_twist=EMPTY_TWIST, source=None, target=None):
    """Matrix of ``H^0(X, omega_X^k(T)) -> H^0(Z, omega_X^k(T)|_Z)``."""
    from .linalg import LinearMap

    if not isinstance(Z, Subcurve):
        Z = Subcurve(curve, frozenset(Z))
    if source is None:
        source = sections_basis(BundleSpec(curve.full(), k, extra_twist))
    if target is None:
        target = sections_basis(restrict_bundle(curve, Z, k, extra_twist.restricted(Z.component_ids)))
    images = []
    for v in source.vectors:
        w = []
        for cid in target.bundle.Z.components:
            off, n = source.bundle.layout[cid]
            toff, tn = target.bundle.layout[cid]
            assert n == tn, "restriction frames must agree"
            w.extend(v[off:off + n])
        images.append(target.coordinates(w))
    return LinearMap(source.h0, target.h0, images, "rho", source, target)


# ---------------------------------------------------------------- base loci


@dataclass
class BaseLocus:
    generated: bool
    components: dict
    nodes: list

    def to_dict(self):
        return {"generated": self.generated, "components": self.components, "nodes": self.nodes}


def _special_roots(poly, params):
    """Multiplicities of ``poly`` at the given finite parameters."""
    out = []
    for t in params:
        if t is INF:
            continue
        m = _poly.root_multiplicity(poly, t)
        if m:
            out.append((t, m))
    return out


def global_generation_check(basis):
    """Exact base locus of a section space.

    Per component the base divisor is the gcd of the numerators (in the
    local generators described in the module docstring) plus the order at
    infinity ``N_C - max deg f_C``.  The report lists the gcd and its
    multiplicities at the component's special points; nodes are tested
    separately on their leading coefficients.
    """
    if basis.h0 == 0:
        raise ZeroSpace(f"{basis.bundle.describe()} has no sections")
    bundle = basis.bundle
    comps = {}
    generated = True
    secs = basis.sections
    for cid in bundle.Z.components:
        N = bundle.degree_bounds[cid]
        nums = [_poly.trim(s.numerators[cid]) for s in secs]
        nonzero = [f for f in nums if f]
        if N < 0 or not nonzero:
            comps[cid] = {"whole": True}
            generated = False
            continue
        g = _poly.gcd_many(nonzero)
        at_inf = N - max(len(f) - 1 for f in nonzero)
        entry = {"whole": False}
        if len(g) > 1 or at_inf:
            generated = False
            entry["gcd"] = [str(c) for c in g]
            params = [sp.param for sp in bundle.special_points[cid]]
            entry["special_points"] = [[format_scalar(r), m] for r, m in _special_roots(g, params)]
            if at_inf:
                entry["special_points"].append(["inf", at_inf])
        comps[cid] = entry
    nodes = []
    for n in bundle.Z.internal_nodes:
        phi = node_functionals(bundle, n, "a")[0]
        if all(x == 0 for x in basis.functional_matrix([phi])[0]):
            nodes.append(n.id)
            generated = False
    comps = {cid: e for cid, e in comps.items() if e.get("whole") or "gcd" in e}
    return BaseLocus(generated, comps, nodes)


# ---------------------------------------------------------------- evaluation


def evaluate(section, point=None, node=None, side="a", order=1):
    """Value (or first ``order`` jet coefficients) of a section.

    ``point`` is a smooth point ``(component_id, param)``; ``node`` selects a
    node and the branch frame ``(dx/x)^k`` on ``side``.
    """
    bundle = section.bundle
    if node is not None:
        if node not in bundle.Z.internal_nodes:
            raise PoleAtPoint(f"node {node.id} is not internal to {bundle.Z}")
        br = node.branch_a if side == "a" else node.branch_b
        cid, param = br.component_id, br.param
    else:
        if isinstance(point, BranchPoint):
            cid, param = point.component_id, point.param
        else:
            cid, param = point[0], parse_scalar(point[1])
        for n in bundle.Z.internal_nodes:
            for br in n.branches():
                if br.component_id == cid and param_key(br.param) == param_key(param):
                    raise PoleAtPoint(f"{cid}@{format_scalar(param)} is a branch of node {n.id}; "
                                      "evaluate it in a node frame")
    rows = local_jets(bundle, cid, param, order)
    f = section.numerators[cid]
    vals = [sum((a * b for a, b in zip(r, f)), Fraction(0)) for r in rows]
    return vals[0] if order == 1 else vals
