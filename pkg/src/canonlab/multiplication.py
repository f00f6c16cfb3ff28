"""Multiplication maps between section spaces and the verdicts built on them."""
from dataclasses import dataclass, field

from . import _poly
from .curve import arithmetic_genus, subsets
from .errors import BundleMismatch, GenusTooSmall, NotAPencil, NotGloballyGenerated
from .linalg import Echelon, LinearMap, audit_rank
from .sections import SectionBasis, canonical_bundle, global_generation_check, sections_basis


def _product_vector(v, w, vb, wb, target_bundle):
    out = [0] * target_bundle.n_unknowns
    for cid, (toff, tn) in target_bundle.layout.items():
        off1, n1 = vb.layout[cid]
        off2, n2 = wb.layout[cid]
        if not n1 or not n2 or not tn:
            continue
        prod = _poly.mul(v[off1:off1 + n1], w[off2:off2 + n2])
        assert len(prod) <= tn, "product exceeds the target degree bound"
        out[toff:toff + len(prod)] = prod
    return out


def products(M_basis, N_basis, target_bundle, pairs=None):
    """Coefficient vectors of basis products, in ``pairs`` order (default:
    all ``(i, j)`` with i over M, j over N)."""
    if pairs is None:
        pairs = [(i, j) for i in range(M_basis.h0) for j in range(N_basis.h0)]
    mb, nb = M_basis.bundle, N_basis.bundle
    return [_product_vector(M_basis.vectors[i], N_basis.vectors[j], mb, nb, target_bundle)
            for i, j in pairs]


def mult_map(M_basis, N_basis, target=None):
    """``mu_{M,N}: H^0(M) (x) H^0(N) -> H^0(M (x) N)`` as an exact matrix."""
    if M_basis.bundle.Z != N_basis.bundle.Z:
        raise BundleMismatch(
            f"{M_basis.bundle.describe()} and {N_basis.bundle.describe()} live on different subcurves")
    tb = M_basis.bundle.tensor(N_basis.bundle)
    if target is None:
        target = sections_basis(tb)
    elif target.bundle != tb:
        raise BundleMismatch(f"target basis is for {target.bundle.describe()}, not {tb.describe()}")
    images = [target.coordinates(v) for v in products(M_basis, N_basis, tb)]
    return LinearMap(M_basis.h0 * N_basis.h0, target.h0, images, "mu", (M_basis, N_basis), target)


def sym2_map(basis, target=None):
    """``Sym^2 H^0(L) -> H^0(L^2)`` on the monomials ``s_i s_j``, i <= j."""
    tb = basis.bundle.tensor(basis.bundle)
    if target is None:
        target = sections_basis(tb)
    pairs = [(i, j) for i in range(basis.h0) for j in range(i, basis.h0)]
    images = [target.coordinates(v) for v in products(basis, basis, tb, pairs)]
    return LinearMap(len(pairs), target.h0, images, "sym_power", (basis, basis), target)


def quadric_count(basis, target=None):
    """Dimension of the kernel of ``Sym^2 H^0(L) -> H^0(L^2)``."""
    return sym2_map(basis, target).kernel_dim


def _span(vectors, ncols, stop_at):
    ech = Echelon(ncols)
    for v in vectors:
        ech.add(v)
        if ech.rank >= stop_at:
            break
    # the vectors lie in a space of dimension stop_at, so an early stop is exact
    audit_rank([list(v) for v in vectors], ncols, ech.rank)
    return ech


@dataclass
class NormalityStage:
    k: int
    target_h0: int
    composite_rank: int
    mu_rank: int
    mu_domain: int

    @property
    def composite_corank(self):
        return self.target_h0 - self.composite_rank

    @property
    def mu_corank(self):
        return self.target_h0 - self.mu_rank

    def to_dict(self):
        return {
            "k": self.k,
            "target_h0": self.target_h0,
            "composite_rank": self.composite_rank,
            "composite_corank": self.composite_corank,
            "mu_domain_dim": self.mu_domain,
            "mu_rank": self.mu_rank,
            "mu_corank": self.mu_corank,
        }


@dataclass
class NormalityReport:
    """Coranks of ``H^0(L)^{(x) k} -> H^0(L^k)`` (composite) and of
    ``mu_{L, L^{k-1}}`` for each stage k."""

    bundle: object
    stages: list = field(default_factory=list)

    def corank(self, k):
        return self.stage(k).composite_corank

    def stage(self, k):
        for s in self.stages:
            if s.k == k:
                return s
        raise KeyError(k)

    def k_normally_generated(self, k):
        return self.corank(k) == 0

    @property
    def k_max(self):
        return self.stages[-1].k if self.stages else 0

    @property
    def projectively_normal(self):
        return all(s.composite_corank == 0 for s in self.stages)

    def to_dict(self):
        return {
            "bundle": self.bundle.to_dict(),
            "k_max": self.k_max,
            "projectively_normal_through_k_max": self.projectively_normal,
            "stages": [s.to_dict() for s in self.stages],
        }


def power_report(L_basis, k_max, bases=None):
    """Normal-generation report for ``L`` through ``k_max``.

    ``bases`` may map ``j`` to a precomputed basis of ``L^j``.
    """
    bases = dict(bases or {})
    bases[1] = L_basis
    L = L_basis.bundle
    report = NormalityReport(L)
    report.stages.append(NormalityStage(1, L_basis.h0, L_basis.h0, L_basis.h0, L_basis.h0))
    image = list(L_basis.vectors)
    full_prev = True
    for j in range(2, k_max + 1):
        if j not in bases:
            bases[j] = sections_basis(L.power(j))
        tgt = bases[j]
        prev = bases[j - 1]
        tb = tgt.bundle
        mu_vectors = products(L_basis, prev, tb)
        mu_span = _span(mu_vectors, tb.n_unknowns, tgt.h0)
        for v in mu_span.rows.values():
            assert tgt.contains(v)
        if full_prev:
            comp_span = mu_span
        else:
            pairs = [(i, j2) for i in range(L_basis.h0) for j2 in range(len(image))]
            comp_vectors = [_product_vector(L_basis.vectors[i], image[j2], L, prev.bundle, tb)
                            for i, j2 in pairs]
            comp_span = _span(comp_vectors, tb.n_unknowns, tgt.h0)
        stage = NormalityStage(j, tgt.h0, comp_span.rank, mu_span.rank, L_basis.h0 * prev.h0)
        report.stages.append(stage)
        image = list(comp_span.rows.values())
        full_prev = stage.composite_corank == 0
    return report


def k_normality(curve, k_max, omega_basis=None, bases=None):
    """Report on ``H^0(omega_X)^{(x) k} -> H^0(omega_X^k)`` for k <= k_max."""
    g = arithmetic_genus(curve)
    if g < 2:
        raise GenusTooSmall(f"genus {g} < 2")
    if omega_basis is None:
        omega_basis = sections_basis(canonical_bundle(curve))
    return power_report(omega_basis, k_max, bases)


@dataclass
class PencilReport:
    kernel_dim: int
    expected_kernel_dim: int
    h1_difference: int
    corank: int

    @property
    def identity_holds(self):
        return self.kernel_dim == self.expected_kernel_dim

    @property
    def surjectivity_predicted(self):
        return self.h1_difference == 0

    @property
    def holds(self):
        return self.identity_holds and (not self.surjectivity_predicted or self.corank == 0)

    def to_dict(self):
        return {
            "kernel_dim": self.kernel_dim,
            "h0_L_minus_M": self.expected_kernel_dim,
            "h1_L_minus_M": self.h1_difference,
            "corank": self.corank,
            "identity_holds": self.identity_holds,
            "surjectivity_predicted": self.surjectivity_predicted,
            "holds": self.holds,
        }


def bpf_pencil_check(L_basis, M_basis):
    """Base-point-free pencil trick: ``ker mu_{L,M} = H^0(L (x) M^dual)``."""
    if M_basis.h0 != 2:
        raise NotAPencil(f"h0(M) = {M_basis.h0}, a pencil needs 2")
    locus = global_generation_check(M_basis)
    if not locus.generated:
        raise NotGloballyGenerated(f"{M_basis.bundle.describe()} has base locus {locus.to_dict()}")
    mu = mult_map(L_basis, M_basis)
    diff = sections_basis(L_basis.bundle.minus(M_basis.bundle))
    return PencilReport(mu.kernel_dim, diff.h0, diff.h1, mu.corank)


@dataclass
class GateResult:
    passed: bool
    failing: list  # (component ids, degree, p_a)
    checked: int

    @property
    def failing_subcurve(self):
        return self.failing[0][0] if self.failing else None

    def to_dict(self):
        return {
            "passed": self.passed,
            "checked_subcurves": self.checked,
            "failing": [{"subcurve": list(ids), "degree": d, "p_a": p} for ids, d, p in self.failing],
        }


def franciosi_gate(bundle, bound=16):
    """Check ``deg H|_Z >= 2 p_a(Z) + 1`` on every connected subcurve Z of the
    bundle's (connected) support.  Disconnected subcurves follow from their
    connected pieces."""
    if isinstance(bundle, SectionBasis):
        bundle = bundle.bundle
    C = bundle.Z
    if not C.is_connected:
        raise ValueError(f"the support {C} of the bundle is not connected")
    curve = C.to_curve()
    failing = []
    checked = 0
    for ids, internal in subsets(curve, connected_only=True, bound=bound):
        checked += 1
        deg = sum(bundle.component_degree(c) for c in ids)
        pa = internal - len(ids) + 1
        if deg < 2 * pa + 1:
            failing.append((ids, deg, pa))
    return GateResult(not failing, failing, checked)
