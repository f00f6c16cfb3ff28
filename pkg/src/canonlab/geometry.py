"""Very-ampleness tests and secant searches for linear series on nodal curves.

Very-ampleness is certified exactly at the nodes and on a deterministic
sample of smooth points; the verdict string says so.  Secant conditions use
exact gcds of numerators, never floating point.
"""
import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .curve import BranchPoint, arithmetic_genus, connectivity, format_scalar, param_key
from .errors import GenusTooSmall, TooFewSections, WrongCardinality
from .sections import (
    TwistDivisor,
    canonical_bundle,
    global_generation_check,
    jet_functionals,
    node_functionals,
    sections_basis,
)

DEFAULT_SAMPLE = 24
PARAM_RADIUS = 40


def _rng(seed, curve, salt):
    digest = hashlib.sha256(f"{seed}:{curve.fingerprint()}:{salt}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def sample_points(curve, n, seed=0, salt="sample", component_ids=None, avoid=()):
    """``n`` distinct smooth points with small-integer parameters."""
    rng = _rng(seed, curve, salt)
    comps = list(component_ids or curve.component_ids)
    taken = {(br.component_id, param_key(br.param)) for nd in curve.nodes for br in nd.branches()}
    taken |= {(p.component_id, param_key(p.param)) for p in avoid}
    out = []
    while len(out) < n:
        cid = rng.choice(comps)
        t = Fraction(rng.randint(-PARAM_RADIUS, PARAM_RADIUS))
        key = (cid, param_key(t))
        if key in taken:
            continue
        taken.add(key)
        out.append(BranchPoint(cid, t))
    return out


def _rank2(r1, r2):
    """Rank of the 2-row matrix ``[r1; r2]`` is 2."""
    piv = next((i for i, x in enumerate(r1) if x), None)
    if piv is None:
        return False
    a = r1[piv]
    b = r2[piv]
    return any(a * y - b * x for x, y in zip(r1, r2))


@dataclass
class AmplenessVerdict:
    three_connected: bool
    connectivity: object
    node_tests: dict
    pair_separation: tuple
    tangent_separation: tuple
    overall: str  # "verified", "verified_on_sample" or "refuted"
    witness: dict = None
    sample: list = field(default_factory=list)

    @property
    def positive(self):
        return self.overall in ("verified", "verified_on_sample")

    @property
    def sample_checks_pass(self):
        """(b)-(d) without the connectivity gate."""
        return (all(self.node_tests.values())
                and self.pair_separation[0] == self.pair_separation[1]
                and self.tangent_separation[0] == self.tangent_separation[1])

    def to_dict(self):
        m = self.connectivity
        return {
            "overall": self.overall,
            "three_connected": self.three_connected,
            "connectivity": m if isinstance(m, int) else "inf",
            "node_tests": self.node_tests,
            "pair_separation": {"passed": self.pair_separation[0], "total": self.pair_separation[1]},
            "tangent_separation": {"passed": self.tangent_separation[0],
                                   "total": self.tangent_separation[1]},
            "witness": self.witness,
            "sample": [str(p) for p in self.sample],
        }


def very_ample_check(curve, basis=None, n_sample=DEFAULT_SAMPLE, seed=0):
    """Test very-ampleness of ``omega_X`` (or of ``basis``'s bundle)."""
    if basis is None:
        basis = sections_basis(canonical_bundle(curve))
    if basis.h0 < 3:
        raise TooFewSections(f"h0 = {basis.h0} < 3")
    bundle = basis.bundle
    Z = bundle.Z
    m, split = connectivity(Z.to_curve() if not Z.is_whole else curve)
    three = m >= 3

    nodes = list(Z.internal_nodes)
    node_tests = {}
    for n in nodes:
        fa = node_functionals(bundle, n, "a", order=2)
        fb = node_functionals(bundle, n, "b", order=2)
        rows = basis.functional_matrix([fa[0], fa[1], fb[1]])
        node_tests[n.id] = linalg.rank(rows) == 3

    pts = sample_points(curve, n_sample, seed, component_ids=Z.components)
    labels = [n.id for n in nodes] + [str(p) for p in pts]
    value_rows = basis.functional_matrix(
        [node_functionals(bundle, n, "a")[0] for n in nodes]
        + [jet_functionals(bundle, p.component_id, p.param)[0] for p in pts])
    pairs_ok = pairs_total = 0
    pair_fail = None
    for i in range(len(value_rows)):
        for j in range(i + 1, len(value_rows)):
            pairs_total += 1
            if _rank2(value_rows[i], value_rows[j]):
                pairs_ok += 1
            elif pair_fail is None:
                pair_fail = {"kind": "unseparated_pair", "points": [labels[i], labels[j]]}
    tan_ok = 0
    tan_fail = None
    for p in pts:
        r0, r1 = basis.functional_matrix(jet_functionals(bundle, p.component_id, p.param, order=2))
        if _rank2(r0, r1):
            tan_ok += 1
        elif tan_fail is None:
            tan_fail = {"kind": "tangent_not_separated", "point": str(p)}

    witness = None
    if not three and split is not None:
        rows = basis.functional_matrix(
            [node_functionals(bundle, n, "a")[0] for n in split.D])
        r = linalg.rank(rows) if rows else 0
        if r < len(split.D):
            witness = {"kind": "intersection_scheme", "degree": split.delta,
                       "U": list(split.U.components), "nodes": [n.id for n in split.D],
                       "evaluation_rank": r}
    if witness is None:
        bad_node = next((nid for nid, ok in node_tests.items() if not ok), None)
        if bad_node is not None:
            witness = {"kind": "node_not_embedded", "node": bad_node}
        else:
            witness = pair_fail or tan_fail
    overall = "refuted" if witness is not None else "verified_on_sample"
    return AmplenessVerdict(three, m, node_tests, (pairs_ok, pairs_total), (tan_ok, len(pts)),
                            overall, witness, pts)


# ------------------------------------------------------------------ secants


@dataclass
class SecantCandidate:
    points: list
    kind: str = "simple"
    trial: int = -1

    def divisor(self, multiplicity=1):
        return TwistDivisor.from_points(self.points, multiplicity)

    def to_dict(self):
        return {"kind": self.kind, "trial": self.trial,
                "points": [{"comp": p.component_id, "t": format_scalar(p.param)} for p in self.points]}


@dataclass
class SecantSearch:
    found: bool
    candidate: SecantCandidate
    trials: int
    rejections: dict

    def to_dict(self):
        return {
            "found": self.found,
            "trials": self.trials,
            "rejections": self.rejections,
            "secant": self.candidate.to_dict() if self.candidate else None,
        }


def secant_conditions(curve, omega_basis, points):
    """``(span_rank, h0 of omega(-S), base locus of omega(-S))``."""
    rows = omega_basis.functional_matrix(
        [jet_functionals(omega_basis.bundle, p.component_id, p.param)[0] for p in points])
    span = linalg.rank(rows)
    pencil = sections_basis(omega_basis.bundle.with_twist(-TwistDivisor.from_points(points)))
    locus = global_generation_check(pencil) if pencil.h0 else None
    return span, pencil, locus


def simple_secant_search(curve, budget=50, seed=0, omega_basis=None):
    """Look for a simple (g-2)-secant of the canonical curve.

    A failure to find one within ``budget`` trials is not a proof that none
    exists.
    """
    g = arithmetic_genus(curve)
    if g < 4:
        raise GenusTooSmall(f"simple (g-2)-secants need g >= 4, got {g}")
    if omega_basis is None:
        omega_basis = sections_basis(canonical_bundle(curve))
    rejections = {"span": 0, "pencil": 0, "base_locus": 0}
    for trial in range(budget):
        pts = sample_points(curve, g - 2, seed, salt=f"secant:{trial}")
        span, pencil, locus = secant_conditions(curve, omega_basis, pts)
        if span != g - 2:
            rejections["span"] += 1
            continue
        if pencil.h0 != 2:
            rejections["pencil"] += 1
            continue
        if not locus.generated:
            rejections["base_locus"] += 1
            continue
        return SecantSearch(True, SecantCandidate(pts, "simple", trial), trial + 1, rejections)
    return SecantSearch(False, None, budget, rejections)


@dataclass
class GoodSecantResult:
    passed: bool
    failed_condition: str
    details: dict

    def to_dict(self):
        return {"passed": self.passed, "failed_condition": self.failed_condition,
                "birational_assumed": True, **self.details}


def good_secant_check(R_basis, S):
    """Check that ``S`` is a good (r-1)-secant of R, r = h0(R) - 1.

    Birationality of the map given by R is assumed, not tested.
    """
    points = list(S.points if isinstance(S, SecantCandidate) else S)
    r = R_basis.h0 - 1
    if len(points) != r - 1:
        raise WrongCardinality(f"|S| = {len(points)} but r - 1 = {r - 1}")
    bundle = R_basis.bundle
    M = sections_basis(bundle.with_twist(-TwistDivisor.from_points(points)))
    details = {"r": r, "h0_R_minus_S": M.h0}
    if M.h0 != 2:
        return GoodSecantResult(False, "pencil", details)
    locus = global_generation_check(M)
    details["base_locus"] = locus.to_dict()
    if not locus.generated:
        return GoodSecantResult(False, "globally_generated", details)
    for p in points:
        r0, r1 = R_basis.functional_matrix(jet_functionals(bundle, p.component_id, p.param, order=2))
        if not _rank2(r0, r1):
            details["point"] = str(p)
            return GoodSecantResult(False, "embedding", details)
    return GoodSecantResult(True, "", details)
