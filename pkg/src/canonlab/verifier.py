"""Statement-by-statement verification on concrete curves.

Every statement is checked as hypotheses => conclusion.  Hypotheses are
measured in order and the first failure short-circuits to
``hypothesis_not_met``; conclusions are always measured, never inferred
from other statements.  A certificate is a ``VIOLATION`` exactly when every
hypothesis holds and some conclusion fails.
"""
import enum
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__, linalg
from .corpus import CorpusSpec, default_corpus, generate
from .curve import (
    BranchPoint,
    NodalCurve,
    Subcurve,
    connected_splits,
    curve_from_dict,
    curve_to_dict,
    format_scalar,
    parse_scalar,
)
from .errors import CanonlabError, ExpressFailure
from .geometry import (
    good_secant_check,
    sample_points,
    simple_secant_search,
    very_ample_check,
)
from .multiplication import franciosi_gate, mult_map, power_report, quadric_count
from .sections import (
    BundleSpec,
    TwistDivisor,
    canonical_bundle,
    global_generation_check,
    h1_by_duality,
    restrict_bundle,
    restriction_map,
    sections_basis,
)

CONFIRMED = "confirmed"
NOT_MET = "hypothesis_not_met"
VIOLATION = "VIOLATION"
VERDICTS = (CONFIRMED, NOT_MET, VIOLATION)


class Statement(enum.Enum):
    PROP_QUAD = "mu_{omega_A, omega_X|A} and mu_{omega_X|B} onto => mu_{omega_X} onto"
    THM_MAIN = "A nonempty, mu_{omega_A, omega_X|A} onto => X quadratically normal"
    LEM_RHO = "omega_X very ample, A, B connected => rho_A, rho_B onto"
    LEM_A1 = "Z connected, E > 0 effective => h0(I_E) = 0 and h1(omega_Z(E)) = 0"
    LEM_3CONN = "omega_X very ample => X 3-connected"
    LEM_BNORMGEN = "omega_X very ample => omega_X|A, omega_X|B normally generated"
    THM_TEO2 = "omega_A very ample, mu_{omega_A} onto, deg E >= 2 => mu_{omega_A, omega_A(E)} onto"
    PROP_PROP1 = "R generated, h1(R) = 0, mu_{omega_A, R} onto => mu_{omega_A, R(D)} onto"
    COR_HYPI = "as THM_TEO2 => mu_{omega_A, omega_A^k(kE)} onto for k >= 2"
    LEM_PENCIL = "M generated pencil, h1(L - M) = 0 => mu_{L,M} onto, ker = H0(L - M)"
    PROP_GOODSEC = "R with a good (r-1)-secant => mu_{omega_A, R^k} onto"
    PROP_KNORM = "(k-1)-normal, A and B conditions through k => omega_X k-normal"
    PROP_KGE4 = "omega_X generated, (k-1)-normal, k >= 4 => k-normal"
    LEM_A2 = "omega_Z generated, deg D >= 2 => omega_Z(D) generated"
    COR_2COMP = "two non-rational components, omega_X very ample => projectively normal"
    COR_3CONN = "A irreducible non-rational, B connected => k-normal for all k >= 2"
    THM_SCHREYER = "canonical curve with a simple (g-2)-secant => projectively normal"
    EX_4COMP = "four components meeting pairwise once: genus, very ample, quadratically normal"
    FRAN_GATE = "deg H|_Z >= 2 p_a(Z) + 1 for all Z => H normally generated"

    @classmethod
    def parse(cls, name):
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown statement {name!r}; choose from {[s.name for s in cls]}") from None


SUBSTANTIVE = (Statement.THM_MAIN, Statement.PROP_QUAD, Statement.PROP_KNORM, Statement.PROP_KGE4)


@dataclass(frozen=True)
class VerifyConfig:
    k_max: int = 5
    max_decompositions: int = 12
    divisor_degrees: tuple = (2, 3, 4)
    secant_budget: int = 200
    seed: int = 0
    n_sample: int = 24
    bnorm_k_max: int = 3
    fran_k_max: int = 3
    hypi_k_max: int = 3
    goodsec_k_max: int = 2
    include_timings: bool = False

    def to_dict(self):
        d = asdict(self)
        d["divisor_degrees"] = list(self.divisor_degrees)
        return d


STRATEGY = {
    "decompositions": "ordered splits X = A u B with both sides connected, by |A| then component "
                      "order; the first max_decompositions are used",
    "divisors": "E of each degree in divisor_degrees at seeded smooth points; odd degrees >= 3 "
                "double the first point, so non-reduced divisors are exercised",
    "secants": "simple (g-2)-secants drawn at seeded smooth points, at most secant_budget trials",
    "very_ample": "exact at nodes, pairs and tangents on n_sample seeded smooth points",
    "normal_generation": "coranks of H0(L)^k -> H0(L^k) measured up to the configured k bound",
}


# ------------------------------------------------------------------ instances


def _points_to_list(points):
    return [{"comp": p.component_id, "t": format_scalar(p.param)} for p in points]


@dataclass
class Instance:
    """One curve plus whatever a statement quantifies over."""

    curve: NodalCurve
    family: str = "custom"
    index: int = 0
    seed: int = 0
    A: tuple = None
    E: TwistDivisor = None
    D: TwistDivisor = None
    k: int = None
    secant: tuple = None
    R: str = None
    L: str = None
    M: str = None

    def to_dict(self):
        out = {
            "family": self.family,
            "index": self.index,
            "seed": self.seed,
            "curve": self.curve.name,
            "fingerprint": self.curve.fingerprint(),
        }
        if self.A is not None:
            out["A"] = list(self.A)
            out["B"] = [c for c in self.curve.component_ids if c not in self.A]
        if self.E is not None:
            out["E"] = self.E.to_list()
        if self.D is not None:
            out["D"] = self.D.to_list()
        if self.k is not None:
            out["k"] = self.k
        if self.secant is not None:
            out["secant"] = _points_to_list(self.secant)
        for name in ("R", "L", "M"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        return out

    @classmethod
    def from_dict(cls, curve, data):
        def div(key):
            return TwistDivisor.from_list(data[key]) if key in data else None

        secant = None
        if "secant" in data:
            secant = tuple(BranchPoint(p["comp"], parse_scalar(p["t"])) for p in data["secant"])
        return cls(curve, data.get("family", "custom"), data.get("index", 0), data.get("seed", 0),
                   tuple(data["A"]) if "A" in data else None, div("E"), div("D"), data.get("k"),
                   secant, data.get("R"), data.get("L"), data.get("M"))


# ------------------------------------------------------------------ certificates


@dataclass
class Check:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "measured": self.measured}


@dataclass
class Certificate:
    statement: Statement
    instance: dict
    hypothesis_checks: list
    conclusion_check: list
    verdict: str
    diagnostics: list = field(default_factory=list)
    reproduction: dict = None
    timings: dict = None

    @property
    def substantive(self):
        return self.verdict == CONFIRMED

    def to_dict(self):
        out = {
            "statement": self.statement.name,
            "instance": self.instance,
            "hypothesis_checks": [c.to_dict() for c in self.hypothesis_checks],
            "conclusion_check": [c.to_dict() for c in self.conclusion_check],
            "verdict": self.verdict,
            "diagnostics": self.diagnostics,
        }
        if self.reproduction is not None:
            out["reproduction"] = self.reproduction
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    @classmethod
    def from_dict(cls, data):
        def checks(items):
            return [Check(c["name"], c["passed"], c["measured"]) for c in items]

        return cls(Statement[data["statement"]], data["instance"], checks(data["hypothesis_checks"]),
                   checks(data["conclusion_check"]), data["verdict"], data.get("diagnostics", []),
                   data.get("reproduction"), data.get("timings"))


class _HypothesisFailed(Exception):
    pass


class _Recorder:
    def __init__(self):
        self.hypotheses = []
        self.conclusions = []
        self.phase = "hypothesis"

    def need(self, name, passed, /, **measured):
        self.hypotheses.append(Check(name, bool(passed), measured))
        if not passed:
            raise _HypothesisFailed(name)

    def conclude(self, name, passed, /, **measured):
        self.phase = "conclusion"
        self.conclusions.append(Check(name, bool(passed), measured))


# ------------------------------------------------------------------ per-curve cache


class CurveContext:
    """Lazily computed, cached data for one curve (bases, maps, verdicts)."""

    def __init__(self, curve, config=None):
        self.curve = curve
        self.config = config or VerifyConfig()
        self._bases = {}
        self._maps = {}
        self._reports = {}
        self._ample = {}
        self._secant = None
        self._decomps = None

    @property
    def genus(self):
        return self.curve.genus

    @property
    def omega(self):
        return canonical_bundle(self.curve)

    def basis(self, bundle):
        b = self._bases.get(bundle)
        if b is None:
            b = self._bases[bundle] = sections_basis(bundle)
        return b

    def mu(self, M, N):
        key = (M, N)
        m = self._maps.get(key)
        if m is None:
            m = self._maps[key] = mult_map(self.basis(M), self.basis(N), self.basis(M.tensor(N)))
        return m

    def report(self, L, k_max):
        key = (L, k_max)
        r = self._reports.get(key)
        if r is None:
            bases = {j: self.basis(L.power(j)) for j in range(1, k_max + 1)}
            r = self._reports[key] = power_report(bases[1], k_max, bases)
        return r

    def omega_report(self):
        return self.report(self.omega, self.config.k_max)

    def very_ample(self, Z=None):
        """Verdict for ``omega_Z`` (Z defaults to the whole curve), or None
        when there are fewer than three sections."""
        Z = Z or self.curve.full()
        if Z not in self._ample:
            basis = self.basis(BundleSpec(Z, 1))
            if basis.h0 < 3:
                self._ample[Z] = None
            else:
                self._ample[Z] = very_ample_check(self.curve, basis, self.config.n_sample,
                                                  self.config.seed)
        return self._ample[Z]

    def secant_search(self):
        if self._secant is None:
            self._secant = simple_secant_search(self.curve, self.config.secant_budget,
                                                self.config.seed, self.basis(self.omega))
        return self._secant

    def decompositions(self):
        if self._decomps is None:
            splits = connected_splits(self.curve)
            self._decomps = splits[:self.config.max_decompositions]
        return self._decomps

    def divisor(self, component_ids, degree, salt=""):
        """Seeded effective divisor of the given degree on smooth points."""
        if degree <= 0:
            return TwistDivisor()
        doubled = degree >= 3 and degree % 2 == 1
        n = degree - 1 if doubled else degree
        pts = sample_points(self.curve, n, self.config.seed,
                            salt=f"divisor:{','.join(component_ids)}:{degree}:{salt}",
                            component_ids=component_ids)
        entries = [(p, 1) for p in pts]
        if doubled:
            entries[0] = (pts[0], 2)
        return TwistDivisor(tuple(entries))


# ------------------------------------------------------------------ shared checks


def _sub(ctx, ids):
    return Subcurve(ctx.curve, frozenset(ids)) if ids else ctx.curve.full()


def _ample_measure(v):
    if v is None:
        return {"overall": "too_few_sections"}
    out = {"overall": v.overall, "connectivity": v.connectivity if isinstance(v.connectivity, int) else "inf"}
    if v.witness:
        out["witness"] = v.witness
    return out


def _need_very_ample(ctx, rec, Z=None, name="omega_X_very_ample"):
    v = ctx.very_ample(Z)
    rec.need(name, v is not None and v.positive, **_ample_measure(v))


def _need_split(ctx, rec, inst):
    if inst.A is None:
        raise ValueError("this statement needs a decomposition A")
    A = _sub(ctx, inst.A)
    if A.is_whole:
        rec.need("A_and_B_nonempty", False, A=list(A.components), B=[])
    B = A.complement()
    rec.need("A_and_B_nonempty", True, A=list(A.components), B=list(B.components))
    rec.need("A_and_B_connected", A.is_connected and B.is_connected,
             A_connected=A.is_connected, B_connected=B.is_connected)
    rec.need("ordinary_nodes_at_A_cap_B", True, degree=len(A.boundary_nodes),
             nodes=[n.id for n in A.boundary_nodes])
    return A, B


def _need_generated(ctx, rec, bundle, name):
    basis = ctx.basis(bundle)
    if basis.h0 == 0:
        rec.need(name, False, h0=0)
    locus = global_generation_check(basis)
    rec.need(name, locus.generated, h0=basis.h0, base_locus=locus.to_dict())


def _need_divisor(rec, Z, E, name="E_effective_on_smooth_locus", min_degree=1):
    branch = {(br.component_id, br.param) for n in Z.parent.nodes for br in n.branches()}
    on_smooth = all(p.component_id in Z.component_ids and (p.component_id, p.param) not in branch
                    for p, _ in E.entries)
    rec.need(name, E.is_effective and E.degree >= min_degree and on_smooth,
             degree=E.degree, effective=E.is_effective, on_smooth_locus=on_smooth,
             required_degree=min_degree)


def _corank(m):
    return m.summary()


def _stage_coranks(report, ks):
    return {str(k): report.corank(k) for k in ks}


# ------------------------------------------------------------------ statements


def _prop_quad(ctx, inst, rec, require_ii=True):
    _need_very_ample(ctx, rec)
    A, B = _need_split(ctx, rec, inst)
    X = ctx.curve
    m1 = ctx.mu(BundleSpec(A, 1), restrict_bundle(X, A, 1))
    rec.need("i:mu_omega_A_omega_X|A_onto", m1.is_surjective, **_corank(m1))
    if require_ii:
        LB = restrict_bundle(X, B, 1)
        m2 = ctx.mu(LB, LB)
        rec.need("ii:mu_omega_X|B_onto", m2.is_surjective, **_corank(m2))
    m = ctx.mu(ctx.omega, ctx.omega)
    rec.conclude("mu_omega_X_onto", m.is_surjective, **_corank(m))


def _thm_main(ctx, inst, rec):
    _prop_quad(ctx, inst, rec, require_ii=False)
    q = quadric_count(ctx.basis(ctx.omega), ctx.basis(ctx.omega.power(2)))
    g = ctx.genus
    rec.conclude("quadric_count", q == (g - 2) * (g - 3) // 2, quadrics=q,
                 expected=(g - 2) * (g - 3) // 2)


def _lem_rho(ctx, inst, rec):
    _need_very_ample(ctx, rec)
    A, B = _need_split(ctx, rec, inst)
    X = ctx.curve
    src = ctx.basis(ctx.omega)
    for name, Z in (("A", A), ("B", B)):
        rho = restriction_map(X, Z, 1, source=src, target=ctx.basis(restrict_bundle(X, Z, 1)))
        rec.conclude(f"rho_{name}_onto", rho.is_surjective, **rho.summary())


def _lem_a1(ctx, inst, rec):
    Z = _sub(ctx, inst.A)
    rec.need("Z_connected", Z.is_connected, Z=list(Z.components))
    _need_divisor(rec, Z, inst.E)
    ideal = ctx.basis(BundleSpec(Z, 0, -inst.E))
    rec.conclude("h0_I_E_zero", ideal.h0 == 0, h0=ideal.h0)
    twisted = BundleSpec(Z, 1, inst.E)
    basis = ctx.basis(twisted)
    h1_dual = h1_by_duality(twisted)
    rec.conclude("h1_omega_Z_E_zero", basis.h1 == 0 and h1_dual == 0, h0=basis.h0,
                 h1_riemann_roch=basis.h1, h1_duality=h1_dual, degree=twisted.degree,
                 p_a=Z.genus)


def _lem_3conn(ctx, inst, rec):
    v = ctx.very_ample()
    ok = v is not None and v.sample_checks_pass
    measured = _ample_measure(v)
    if v is not None:
        measured.update(pairs=list(v.pair_separation), tangents=list(v.tangent_separation),
                        nodes_embedded=all(v.node_tests.values()))
    rec.need("omega_X_embeds_nodes_and_sample", ok, **measured)
    m = v.connectivity
    rec.conclude("three_connected", m >= 3, connectivity=m if isinstance(m, int) else "inf")


def _normally_generated(ctx, rec, name, bundle, k_max):
    report = ctx.report(bundle, k_max)
    coranks = _stage_coranks(report, range(1, k_max + 1))
    rec.conclude(name, report.projectively_normal, k_max=k_max, coranks=coranks,
                 mu_coranks={str(s.k): s.mu_corank for s in report.stages})


def _lem_bnormgen(ctx, inst, rec):
    A = _sub(ctx, inst.A)
    B = A.complement()
    rec.need("A_and_B_nonempty", True, A=list(A.components), B=list(B.components))
    _need_very_ample(ctx, rec)
    X = ctx.curve
    for name, Z in (("A", A), ("B", B)):
        _normally_generated(ctx, rec, f"omega_X|{name}_normally_generated",
                            restrict_bundle(X, Z, 1), ctx.config.bnorm_k_max)


def _need_teo2_setting(ctx, inst, rec, A):
    _need_divisor(rec, A, inst.E, min_degree=2)
    rec.need("A_connected", A.is_connected, A=list(A.components))
    _need_very_ample(ctx, rec, A, name="omega_A_very_ample")
    wA = BundleSpec(A, 1)
    m = ctx.mu(wA, wA)
    rec.need("mu_omega_A_onto", m.is_surjective, **_corank(m))
    return wA


def _thm_teo2(ctx, inst, rec):
    A = _sub(ctx, inst.A)
    wA = _need_teo2_setting(ctx, inst, rec, A)
    m = ctx.mu(wA, wA.with_twist(inst.E))
    rec.conclude("mu_omega_A_omega_A(E)_onto", m.is_surjective, **_corank(m))


def _cor_hypi(ctx, inst, rec):
    A = _sub(ctx, inst.A)
    rec.need("k_at_least_2", inst.k >= 2, k=inst.k)
    wA = _need_teo2_setting(ctx, inst, rec, A)
    target = BundleSpec(A, inst.k, inst.E.scaled(inst.k))
    m = ctx.mu(wA, target)
    rec.conclude("mu_omega_A_omega_A^k(kE)_onto", m.is_surjective, k=inst.k, **_corank(m))


def _named_bundle(ctx, inst, name):
    X = ctx.curve
    A = _sub(ctx, inst.A)
    table = {
        "omega_X": lambda: ctx.omega,
        "omega_X^2": lambda: ctx.omega.power(2),
        "omega_X^3": lambda: ctx.omega.power(3),
        "omega_X(E)": lambda: ctx.omega.with_twist(inst.E),
        "omega_X(-S)": lambda: ctx.omega.with_twist(-TwistDivisor.from_points(inst.secant)),
        "omega_A": lambda: BundleSpec(A, 1),
        "omega_A(E)": lambda: BundleSpec(A, 1, inst.E),
        "omega_X|A": lambda: restrict_bundle(X, A, 1),
    }
    if name not in table:
        raise ValueError(f"unknown bundle name {name!r}")
    return table[name]()


def _prop_prop1(ctx, inst, rec):
    A = _sub(ctx, inst.A)
    rec.need("A_connected", A.is_connected, A=list(A.components))
    wA = BundleSpec(A, 1)
    _need_generated(ctx, rec, wA, "omega_A_generated")
    R = _named_bundle(ctx, inst, inst.R)
    _need_generated(ctx, rec, R, "R_generated")
    h1 = h1_by_duality(R)
    rec.need("h1_R_zero", h1 == 0, h1_duality=h1, R=R.describe())
    m = ctx.mu(wA, R)
    rec.need("mu_omega_A_R_onto", m.is_surjective, **_corank(m))
    _need_divisor(rec, A, inst.D, name="D_effective_on_smooth_locus", min_degree=0)
    m2 = ctx.mu(wA, R.with_twist(inst.D))
    rec.conclude("mu_omega_A_R(D)_onto", m2.is_surjective, **_corank(m2))


def _lem_pencil(ctx, inst, rec):
    A = _sub(ctx, inst.A)
    rec.need("A_connected", A.is_connected, A=list(A.components))
    L = _named_bundle(ctx, inst, inst.L)
    M = _named_bundle(ctx, inst, inst.M)
    h0M = ctx.basis(M).h0
    rec.need("h0_M_is_2", h0M == 2, h0=h0M)
    _need_generated(ctx, rec, M, "M_generated")
    diff = L.minus(M)
    h1 = h1_by_duality(diff)
    rec.need("h1_L_minus_M_zero", h1 == 0, h1_duality=h1)
    m = ctx.mu(L, M)
    rec.conclude("mu_L_M_onto", m.is_surjective, **_corank(m))
    h0d = ctx.basis(diff).h0
    rec.conclude("kernel_is_H0_L_minus_M", m.kernel_dim == h0d, kernel_dim=m.kernel_dim,
                 h0_L_minus_M=h0d)


def _prop_goodsec(ctx, inst, rec):
    A = _sub(ctx, inst.A)
    rec.need("A_connected", A.is_connected, A=list(A.components))
    wA = BundleSpec(A, 1)
    _need_generated(ctx, rec, wA, "omega_A_generated")
    R = _named_bundle(ctx, inst, inst.R)
    _need_generated(ctx, rec, R, "R_generated")
    rec.need("h_R_birational", True, assumed=True)
    if inst.secant is None:
        rec.need("good_secant", False, reason="no secant supplied")
    res = good_secant_check(ctx.basis(R), inst.secant)
    rec.need("good_secant", res.passed, **res.to_dict())
    for k in range(1, ctx.config.goodsec_k_max + 1):
        m = ctx.mu(wA, R.power(k))
        rec.conclude(f"mu_omega_A_R^{k}_onto", m.is_surjective, **_corank(m))


def _prop_knorm(ctx, inst, rec):
    k = inst.k
    rec.need("k_at_least_3", k >= 3, k=k)
    _need_very_ample(ctx, rec)
    A, B = _need_split(ctx, rec, inst)
    X = ctx.curve
    rep = ctx.omega_report()
    rec.need("i:omega_X_(k-1)_normal", rep.corank(k - 1) == 0, corank=rep.corank(k - 1))
    wA = BundleSpec(A, 1)
    coranks = {}
    for j in range(1, k + 1):
        coranks[str(j)] = ctx.mu(wA, restrict_bundle(X, A, j)).corank
        if coranks[str(j)]:
            break
    rec.need("ii:mu_omega_A_omega_X^j|A_onto", not any(coranks.values()), coranks=coranks)
    repB = ctx.report(restrict_bundle(X, B, 1), k)
    cB = _stage_coranks(repB, range(1, k + 1))
    rec.need("iii:omega_X|B_j_normal", not any(cB.values()), coranks=cB)
    st = rep.stage(k)
    rec.conclude("omega_X_k_normal", st.composite_corank == 0, **st.to_dict())


def _prop_kge4(ctx, inst, rec):
    k = inst.k
    rec.need("k_at_least_4", k >= 4, k=k)
    _need_generated(ctx, rec, ctx.omega, "omega_X_generated")
    rep = ctx.omega_report()
    rec.need("omega_X_(k-1)_normal", rep.corank(k - 1) == 0, corank=rep.corank(k - 1))
    st = rep.stage(k)
    rec.conclude("omega_X_k_normal", st.composite_corank == 0, **st.to_dict())


def _lem_a2(ctx, inst, rec):
    Z = _sub(ctx, inst.A)
    rec.need("Z_connected", Z.is_connected, Z=list(Z.components))
    _need_generated(ctx, rec, BundleSpec(Z, 1), "omega_Z_generated")
    _need_divisor(rec, Z, inst.D, name="D_effective_on_smooth_locus", min_degree=2)
    basis = ctx.basis(BundleSpec(Z, 1, inst.D))
    locus = global_generation_check(basis)
    rec.conclude("omega_Z(D)_generated", locus.generated, h0=basis.h0, base_locus=locus.to_dict())


def _projectively_normal(ctx, rec, name, k_from=1):
    rep = ctx.omega_report()
    ks = range(k_from, ctx.config.k_max + 1)
    coranks = _stage_coranks(rep, ks)
    rec.conclude(name, not any(coranks.values()), k_max=ctx.config.k_max, coranks=coranks)


def _cor_2comp(ctx, inst, rec):
    X = ctx.curve
    genera = {c: X.self_node_count(c) for c in X.component_ids}
    rec.need("two_components", len(X.components) == 2, components=len(X.components))
    rec.need("both_non_rational", all(genera.values()), genera=genera)
    A = X.subcurve([X.component_ids[0]])
    rec.need("components_meet", len(A.boundary_nodes) > 0, meeting_points=len(A.boundary_nodes))
    _need_very_ample(ctx, rec)
    _projectively_normal(ctx, rec, "projectively_normal")


def _cor_3conn(ctx, inst, rec):
    X = ctx.curve
    rec.need("A_irreducible", inst.A is not None and len(inst.A) == 1, A=list(inst.A or ()))
    cid = inst.A[0]
    rec.need("A_not_rational", X.self_node_count(cid) > 0, genus_A=X.self_node_count(cid))
    _need_very_ample(ctx, rec)
    _need_split(ctx, rec, inst)
    _projectively_normal(ctx, rec, "k_normal_for_k_ge_2", k_from=2)


def _thm_schreyer(ctx, inst, rec):
    g = ctx.genus
    rec.need("genus_at_least_4", g >= 4, genus=g)
    _need_very_ample(ctx, rec)
    search = ctx.secant_search()
    rec.need("simple_secant_found", search.found, **search.to_dict())
    _projectively_normal(ctx, rec, "projectively_normal")


def _four_component_shape(X):
    if len(X.components) != 4:
        return None
    ids = X.component_ids
    pairs = {}
    for n in X.nodes:
        if not n.is_self_node:
            key = frozenset((n.branch_a.component_id, n.branch_b.component_id))
            pairs[key] = pairs.get(key, 0) + 1
    if len(pairs) != 6 or any(v != 1 for v in pairs.values()):
        return None
    return {c: X.self_node_count(c) for c in ids}


def _ex_4comp(ctx, inst, rec):
    X = ctx.curve
    genera = _four_component_shape(X)
    rec.need("four_components_meeting_pairwise_once", genera is not None,
             components=len(X.components))
    g = ctx.genus
    rec.conclude("genus_formula", g == sum(genera.values()) + 3, genus=g, genera=genera)
    v = ctx.very_ample()
    rec.conclude("omega_X_very_ample", v is not None and v.positive, **_ample_measure(v))
    positive = [c for c in X.component_ids if genera[c] > 0]
    if not positive:
        _projectively_normal(ctx, rec, "graph_curve_projectively_normal")
        return
    A = X.subcurve([positive[0]])
    B = A.complement()
    m1 = ctx.mu(BundleSpec(A, 1), restrict_bundle(X, A, 1))
    rec.conclude("mu_omega_A_omega_X|A_onto", m1.is_surjective, A=[positive[0]], **_corank(m1))
    LB = restrict_bundle(X, B, 1)
    gate = franciosi_gate(LB)
    rec.conclude("degree_gate_on_B", gate.passed, **gate.to_dict())
    m2 = ctx.mu(LB, LB)
    rec.conclude("mu_omega_X|B_onto", m2.is_surjective, **_corank(m2))
    m = ctx.mu(ctx.omega, ctx.omega)
    rec.conclude("quadratically_normal", m.is_surjective, **_corank(m))


def _fran_gate(ctx, inst, rec):
    X = ctx.curve
    if inst.A is None:
        H = ctx.omega.power(inst.k or 1)
        label = f"omega_X^{inst.k or 1}"
    else:
        H = restrict_bundle(X, _sub(ctx, inst.A), 1)
        label = "omega_X|A"
    rec.need("support_connected", H.Z.is_connected, H=label)
    gate = franciosi_gate(H)
    rec.need("degree_gate", gate.passed, **gate.to_dict())
    _normally_generated(ctx, rec, "H_normally_generated", H, ctx.config.fran_k_max)


_HANDLERS = {
    Statement.PROP_QUAD: _prop_quad,
    Statement.THM_MAIN: _thm_main,
    Statement.LEM_RHO: _lem_rho,
    Statement.LEM_A1: _lem_a1,
    Statement.LEM_3CONN: _lem_3conn,
    Statement.LEM_BNORMGEN: _lem_bnormgen,
    Statement.THM_TEO2: _thm_teo2,
    Statement.PROP_PROP1: _prop_prop1,
    Statement.COR_HYPI: _cor_hypi,
    Statement.LEM_PENCIL: _lem_pencil,
    Statement.PROP_GOODSEC: _prop_goodsec,
    Statement.PROP_KNORM: _prop_knorm,
    Statement.PROP_KGE4: _prop_kge4,
    Statement.LEM_A2: _lem_a2,
    Statement.COR_2COMP: _cor_2comp,
    Statement.COR_3CONN: _cor_3conn,
    Statement.THM_SCHREYER: _thm_schreyer,
    Statement.EX_4COMP: _ex_4comp,
    Statement.FRAN_GATE: _fran_gate,
}


def verify(statement, instance, context=None):
    """Check one statement on one instance and return its certificate."""
    if isinstance(statement, str):
        statement = Statement.parse(statement)
    if isinstance(instance, NodalCurve):
        instance = Instance(instance)
    ctx = context or CurveContext(instance.curve)
    rec = _Recorder()
    diagnostics = []
    start = time.perf_counter()
    try:
        _HANDLERS[statement](ctx, instance, rec)
        failed = any(not c.passed for c in rec.conclusions)
        verdict = VIOLATION if failed else CONFIRMED
    except _HypothesisFailed:
        verdict = NOT_MET
    except ExpressFailure as exc:
        diagnostics.append({"error": "ExpressFailure", "message": str(exc), "phase": rec.phase})
        verdict = VIOLATION
    except (CanonlabError, ValueError, TypeError, KeyError) as exc:
        diagnostics.append({"error": type(exc).__name__, "message": str(exc), "phase": rec.phase})
        verdict = NOT_MET if rec.phase == "hypothesis" else VIOLATION
    elapsed = time.perf_counter() - start
    cert = Certificate(statement, instance.to_dict(), rec.hypotheses, rec.conclusions, verdict,
                       diagnostics)
    if verdict == VIOLATION:
        cert.reproduction = {"seed": instance.seed, "config": ctx.config.to_dict(),
                             "curve": curve_to_dict(instance.curve)}
    if ctx.config.include_timings:
        cert.timings = {"seconds": round(elapsed, 6)}
    return cert


# ------------------------------------------------------------------ corpus runs


def instances_for(statement, ctx, family="custom", index=0, seed=0):
    """The instances a corpus run checks for ``statement`` on one curve."""
    X = ctx.curve
    cfg = ctx.config

    def make(**kw):
        return Instance(X, family, index, seed, **kw)

    splits = [tuple(d.U.components) for d in ctx.decompositions()]
    sides = []
    for a in splits:
        if a not in sides:
            sides.append(a)
    S = statement
    if S in (Statement.PROP_QUAD, Statement.THM_MAIN, Statement.LEM_RHO, Statement.LEM_BNORMGEN):
        return [make(A=a) for a in splits]
    if S == Statement.PROP_KNORM:
        return [make(A=a, k=k) for a in splits for k in range(3, cfg.k_max + 1)]
    if S == Statement.PROP_KGE4:
        return [make(k=k) for k in range(4, cfg.k_max + 1)]
    if S == Statement.COR_3CONN:
        return [make(A=a) for a in splits if len(a) == 1]
    if S in (Statement.LEM_A1, Statement.LEM_A2):
        out = []
        for z in [tuple(X.component_ids)] + sides:
            for d in cfg.divisor_degrees:
                div = ctx.divisor(z, d, salt=S.name)
                out.append(make(A=z if len(z) < len(X.components) else None,
                                **({"E": div} if S == Statement.LEM_A1 else {"D": div})))
        return out
    whole = tuple(X.component_ids)
    if S == Statement.THM_TEO2:
        return [make(E=ctx.divisor(whole, d)) for d in cfg.divisor_degrees]
    if S == Statement.COR_HYPI:
        return [make(E=ctx.divisor(whole, d), k=k) for d in cfg.divisor_degrees
                for k in range(2, cfg.hypi_k_max + 1)]
    if S == Statement.PROP_PROP1:
        E = ctx.divisor(whole, 2)
        out = [make(R="omega_X(E)", E=E, D=ctx.divisor(whole, d, salt="D")) for d in (1, 2)]
        out += [make(A=a, R="omega_X|A", D=ctx.divisor(a, 2, salt="D")) for a in sides]
        return out
    if S == Statement.LEM_PENCIL:
        out = []
        if ctx.genus >= 4:
            search = ctx.secant_search()
            if search.found:
                S_pts = tuple(search.candidate.points)
                E = ctx.divisor(whole, 2, salt="pencil")
                for L in ("omega_X^2", "omega_X", "omega_X(E)"):
                    out.append(make(secant=S_pts, E=E, L=L, M="omega_X(-S)"))
        for a in sides:
            if _sub(ctx, a).genus == 1:
                out.append(make(A=a, E=ctx.divisor(a, 2, salt="pencil"), L="omega_X|A",
                                M="omega_A(E)"))
        if not out:
            out.append(make(L="omega_X", M="omega_X"))
        return out
    if S == Statement.PROP_GOODSEC:
        if ctx.genus >= 4:
            search = ctx.secant_search()
            if search.found:
                return [make(R="omega_X", secant=tuple(search.candidate.points))]
        return [make(R="omega_X")]
    if S == Statement.FRAN_GATE:
        supports = []
        for d in ctx.decompositions():
            if d.V.components not in supports:
                supports.append(d.V.components)
        return [make(k=2)] + [make(A=b) for b in supports]
    return [make()]


def _verify_curve(args):
    """Worker: all certificates for one curve (kept picklable)."""
    curve_data, family, index, seed, names, config = args
    curve = curve_from_dict(curve_data)
    ctx = CurveContext(curve, config)
    before = linalg.MODP_AUDIT.summary()
    certs = []
    for name in names:
        st = Statement[name]
        try:
            insts = instances_for(st, ctx, family, index, seed)
        except CanonlabError as exc:
            inst = Instance(curve, family, index, seed)
            cert = Certificate(st, inst.to_dict(), [], [], NOT_MET,
                               [{"error": type(exc).__name__, "message": str(exc),
                                 "phase": "instances"}])
            certs.append(cert.to_dict())
            continue
        for inst in insts:
            certs.append(verify(st, inst, ctx).to_dict())
    after = linalg.MODP_AUDIT.summary()
    delta = {k: after[k] - before[k] for k in ("checked", "skipped", "mismatches")}
    return certs, delta


def _as_specs(corpus):
    if corpus is None:
        return default_corpus()
    if isinstance(corpus, CorpusSpec):
        return [corpus]
    return list(corpus)


def summarize(certificates):
    per = {}
    for c in certificates:
        d = c if isinstance(c, dict) else c.to_dict()
        counts = per.setdefault(d["statement"], {v: 0 for v in VERDICTS})
        counts[d["verdict"]] += 1
    ordered = {s.name: per[s.name] for s in Statement if s.name in per}
    violations = sum(v[VIOLATION] for v in ordered.values())
    substantive = sum(ordered.get(s.name, {}).get(CONFIRMED, 0) for s in SUBSTANTIVE)
    return {"certificates": sum(sum(v.values()) for v in ordered.values()),
            "violations": violations,
            "substantive_main_confirmations": substantive,
            "per_statement": ordered}


def run_corpus(corpus=None, statements=None, k_max=5, config=None, workers=1):
    """Verify ``statements`` (default: all) on every curve of ``corpus``.

    Returns ``(certificates, summary)``.  Certificates are ordered by
    (corpus entry, curve index, statement order, instance order), whatever
    the number of workers.
    """
    specs = _as_specs(corpus)
    names = [Statement.parse(s).name if isinstance(s, str) else s.name
             for s in (statements or list(Statement))]
    order = {s.name: i for i, s in enumerate(Statement)}
    names.sort(key=order.get)
    if config is None:
        config = VerifyConfig(k_max=k_max)
    jobs = []
    for spec in specs:
        for index, curve in enumerate(generate(spec)):
            jobs.append((curve_to_dict(curve), spec.family, index, spec.seed, names, config))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_verify_curve, jobs))
    else:
        results = [_verify_curve(j) for j in jobs]
    certs = []
    audit = {"checked": 0, "skipped": 0, "mismatches": 0}
    for chunk, delta in results:
        certs.extend(chunk)
        for k in audit:
            audit[k] += delta[k]
    summary = summarize(certs)
    prime = linalg.modp_prime()
    summary["modp"] = None if prime is None else {"prime": prime, **audit}
    summary["corpus"] = [s.to_dict() for s in specs]
    summary["config"] = config.to_dict()
    return certs, summary


# ------------------------------------------------------------------ reports


def build_report(certificates, summary=None):
    certs = [c if isinstance(c, dict) else c.to_dict() for c in certificates]
    return {
        "tool": "canonlab",
        "version": __version__,
        "strategy": STRATEGY,
        "summary": summary if summary is not None else summarize(certs),
        "certificates": certs,
    }


def dumps_report(certificates, summary=None):
    return json.dumps(build_report(certificates, summary), indent=2, sort_keys=False) + "\n"


def emit_report(certificates, path, summary=None):
    """Write the JSON report; IO errors propagate unchanged."""
    text = dumps_report(certificates, summary)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def read_report(path):
    """Parse a report; certificates come back as ``Certificate`` objects."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    data["certificates"] = [Certificate.from_dict(c) for c in data["certificates"]]
    return data
