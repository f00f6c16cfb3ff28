"""Reduced connected nodal curves built from rational components.

A curve is a list of components, each with normalization P^1 and coordinate
``t``, together with nodes.  A node glues two branch points ``(component,
t)``; when both lie on the same component it is a self-node and raises that
component's arithmetic genus by one.  Subcurves are sets of components of a
parent curve.

Parameters are :class:`fractions.Fraction` values or the singleton
:data:`INF`.
"""
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np

from . import _kernels
from .errors import (
    CurveError,
    DanglingBranch,
    Disconnected,
    DuplicateBranch,
    EmptySide,
    InvalidCurve,
    TooManyComponents,
)

MAX_ENUM_COMPONENTS = 16


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def parse_scalar(value):
    """Parse ``"p/q"``, an integer, or ``"inf"`` into a parameter."""
    if value is INF:
        return INF
    if isinstance(value, str):
        s = value.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return INF
        return Fraction(s)
    if isinstance(value, float):
        raise TypeError("floating point parameters are not exact; use 'p/q'")
    return Fraction(value)


def format_scalar(value):
    if value is INF:
        return "inf"
    return str(Fraction(value))


def param_key(value):
    return (1, 0) if value is INF else (0, value)


@dataclass(frozen=True)
class BranchPoint:
    component_id: str
    param: object

    def __str__(self):
        return f"{self.component_id}@{format_scalar(self.param)}"


@dataclass(frozen=True)
class Node:
    id: str
    branch_a: BranchPoint
    branch_b: BranchPoint

    @property
    def is_self_node(self):
        return self.branch_a.component_id == self.branch_b.component_id

    def branches(self):
        return (self.branch_a, self.branch_b)


@dataclass(frozen=True)
class Component:
    id: str
    label: str = ""


@dataclass(frozen=True, eq=False)
class NodalCurve:
    components: tuple
    nodes: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "nodes", tuple(self.nodes))

    # Identity by content; the cached key keeps hashing cheap for caches.
    @cached_property
    def key(self):
        return (
            tuple((c.id, c.label) for c in self.components),
            tuple((n.id, n.branch_a.component_id, param_key(n.branch_a.param),
                   n.branch_b.component_id, param_key(n.branch_b.param))
                  for n in self.nodes),
        )

    def __eq__(self, other):
        return isinstance(other, NodalCurve) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def component_ids(self):
        return tuple(c.id for c in self.components)

    @cached_property
    def index(self):
        return {cid: i for i, cid in enumerate(self.component_ids)}

    @cached_property
    def node_by_id(self):
        return {n.id: n for n in self.nodes}

    def branch_points(self, component_id):
        """``(node, side, param)`` for every branch on a component, in node order."""
        out = []
        for n in self.nodes:
            if n.branch_a.component_id == component_id:
                out.append((n, "a", n.branch_a.param))
            if n.branch_b.component_id == component_id:
                out.append((n, "b", n.branch_b.param))
        return out

    @cached_property
    def node_ends(self):
        idx = self.index
        a = np.array([idx[n.branch_a.component_id] for n in self.nodes], dtype=np.int64)
        b = np.array([idx[n.branch_b.component_id] for n in self.nodes], dtype=np.int64)
        return a, b

    @property
    def genus(self):
        return arithmetic_genus(self)

    def self_node_count(self, component_id):
        return sum(1 for n in self.nodes
                   if n.is_self_node and n.branch_a.component_id == component_id)

    def dual_graph(self):
        import networkx as nx

        g = nx.MultiGraph()
        g.add_nodes_from(self.component_ids)
        for n in self.nodes:
            g.add_edge(n.branch_a.component_id, n.branch_b.component_id, key=n.id)
        return g

    def full(self):
        return Subcurve(self, frozenset(self.component_ids))

    def subcurve(self, component_ids):
        return Subcurve(self, frozenset(component_ids))

    def fingerprint(self):
        """Stable text digest of the curve (independent of Python's hash seed)."""
        import hashlib

        blob = json.dumps(curve_to_dict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class Subcurve:
    parent: NodalCurve
    component_ids: frozenset

    def __post_init__(self):
        object.__setattr__(self, "component_ids", frozenset(self.component_ids))
        if not self.component_ids:
            raise EmptySide("a subcurve needs at least one component")
        unknown = self.component_ids - set(self.parent.component_ids)
        if unknown:
            raise KeyError(f"unknown components {sorted(unknown)}")

    @property
    def components(self):
        """Component ids in parent order."""
        return tuple(c for c in self.parent.component_ids if c in self.component_ids)

    @property
    def internal_nodes(self):
        ids = self.component_ids
        return tuple(n for n in self.parent.nodes
                     if n.branch_a.component_id in ids and n.branch_b.component_id in ids)

    @property
    def boundary_nodes(self):
        ids = self.component_ids
        return tuple(n for n in self.parent.nodes
                     if (n.branch_a.component_id in ids) != (n.branch_b.component_id in ids))

    def boundary_branches(self):
        """Branch points of boundary nodes lying on this subcurve."""
        ids = self.component_ids
        out = []
        for n in self.boundary_nodes:
            br = n.branch_a if n.branch_a.component_id in ids else n.branch_b
            out.append((n, br))
        return out

    @property
    def is_whole(self):
        return len(self.component_ids) == len(self.parent.components)

    @property
    def is_connected(self):
        return _is_connected(self.components, self.internal_nodes)

    @property
    def genus(self):
        return arithmetic_genus(self)

    @property
    def mask(self):
        idx = self.parent.index
        return sum(1 << idx[c] for c in self.component_ids)

    def complement(self):
        return Subcurve(self.parent, frozenset(self.parent.component_ids) - self.component_ids)

    def to_curve(self):
        """The subcurve as a standalone curve (boundary nodes are dropped)."""
        comps = tuple(c for c in self.parent.components if c.id in self.component_ids)
        name = f"{self.parent.name}[{','.join(self.components)}]"
        return NodalCurve(comps, self.internal_nodes, name=name)

    def __str__(self):
        return "{" + ",".join(self.components) + "}"


@dataclass(frozen=True)
class Decomposition:
    U: Subcurve
    V: Subcurve
    D: tuple
    delta: int
    u_connected: bool = field(default=True)
    v_connected: bool = field(default=True)

    def to_dict(self):
        return {
            "U": list(self.U.components),
            "V": list(self.V.components),
            "D": [n.id for n in self.D],
            "delta": self.delta,
            "U_connected": self.u_connected,
            "V_connected": self.v_connected,
        }


def _is_connected(component_ids, nodes):
    comps = list(component_ids)
    if not comps:
        return False
    adj = {c: set() for c in comps}
    for n in nodes:
        a, b = n.branch_a.component_id, n.branch_b.component_id
        if a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)
    seen = {comps[0]}
    stack = [comps[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(comps)


# ---------------------------------------------------------------- validation


def validate(curve):
    """Return the list of violations (empty when the curve is valid)."""
    problems = []
    known = set()
    for c in curve.components:
        if c.id in known:
            problems.append(DuplicateBranch(f"component id {c.id!r} is repeated", c.id))
        known.add(c.id)
    seen_nodes = set()
    used = {}
    for n in curve.nodes:
        if n.id in seen_nodes:
            problems.append(DuplicateBranch(f"node id {n.id!r} is repeated", n.id))
        seen_nodes.add(n.id)
        for br in n.branches():
            if br.component_id not in known:
                problems.append(DanglingBranch(
                    f"node {n.id!r} has a branch on unknown component {br.component_id!r}",
                    n.id))
                continue
            k = (br.component_id, param_key(br.param))
            if k in used:
                problems.append(DuplicateBranch(
                    f"branch {br} of node {n.id!r} collides with node {used[k]!r}", str(br)))
            else:
                used[k] = n.id
    if curve.components and not problems:
        if not _is_connected(curve.component_ids, curve.nodes):
            lone = _unreached(curve)
            problems.append(Disconnected(
                f"dual graph is disconnected; unreachable components {lone}", lone))
    if not curve.components:
        problems.append(Disconnected("curve has no components", None))
    return problems


def _unreached(curve):
    comps = list(curve.component_ids)
    adj = {c: set() for c in comps}
    for n in curve.nodes:
        adj[n.branch_a.component_id].add(n.branch_b.component_id)
        adj[n.branch_b.component_id].add(n.branch_a.component_id)
    seen = {comps[0]}
    stack = [comps[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return [c for c in comps if c not in seen]


def check_valid(curve):
    problems = validate(curve)
    if problems:
        raise InvalidCurve(problems)
    return curve


# ------------------------------------------------------------------ numerics


def arithmetic_genus(z):
    """p_a = #internal nodes - #components + 1 (all components rational).

    For a disconnected subcurve this equals the sum of the genera of its
    pieces minus (#pieces - 1).
    """
    if isinstance(z, NodalCurve):
        return len(z.nodes) - len(z.components) + 1
    return len(z.internal_nodes) - len(z.component_ids) + 1


def decompose(curve, component_subset):
    ids = frozenset(component_subset)
    if not ids or ids >= set(curve.component_ids):
        raise EmptySide("both sides of a decomposition must be nonempty")
    U = Subcurve(curve, ids)
    V = U.complement()
    D = U.boundary_nodes
    return Decomposition(U, V, D, len(D), U.is_connected, V.is_connected)


def _mask_to_ids(curve, mask):
    return tuple(cid for i, cid in enumerate(curve.component_ids) if mask >> i & 1)


def _check_bound(curve, bound):
    c = len(curve.components)
    if c > bound:
        raise TooManyComponents(f"{c} components exceeds the enumeration bound {bound}")


def connectivity(curve, bound=MAX_ENUM_COMPONENTS):
    """``(m_max, witness)``: the least intersection degree over all splits.

    Single-component curves are infinitely connected and return
    ``(math.inf, None)``.  The witness side ``U`` is the lexicographically
    smallest component-index tuple attaining the minimum.
    """
    c = len(curve.components)
    if c < 2:
        return math.inf, None
    _check_bound(curve, bound)
    a, b = curve.node_ends
    cuts = _kernels.cut_sizes(a, b, c)
    full = (1 << c) - 1
    proper = cuts[1:full]
    m = int(proper.min())
    masks = np.nonzero(proper == m)[0] + 1
    best = min((tuple(i for i in range(c) if mk >> i & 1) for mk in masks.tolist()))
    ids = [curve.component_ids[i] for i in best]
    return m, decompose(curve, ids)


def numerical_connectivity(curve, bound=MAX_ENUM_COMPONENTS):
    """min over splits of ``deg omega_X|_U - deg omega_U`` (both sides)."""
    c = len(curve.components)
    if c < 2:
        return math.inf
    _check_bound(curve, bound)
    a, b = curve.node_ends
    internal, _ = _kernels.subset_stats(a, b, c)
    branch_counts = np.zeros(c, dtype=np.int64)
    np.add.at(branch_counts, a, 1)
    np.add.at(branch_counts, b, 1)
    masks = np.arange(1 << c, dtype=np.int64)
    member = (masks[:, None] >> np.arange(c)[None, :]) & 1
    size = member.sum(axis=1)
    deg_restricted = member @ (branch_counts - 2)
    deg_own = 2 * internal - 2 * size
    diff = deg_restricted - deg_own
    return int(diff[1:(1 << c) - 1].min())


def subsets(curve, connected_only=False, bound=MAX_ENUM_COMPONENTS):
    """Yield ``(component_ids, internal_node_count)`` for nonempty subsets.

    Ordered by size, then lexicographically by component index.
    """
    c = len(curve.components)
    _check_bound(curve, bound)
    a, b = curve.node_ends
    internal, conn = _kernels.subset_stats(a, b, c)
    for size in range(1, c + 1):
        for combo in combinations(range(c), size):
            mask = sum(1 << i for i in combo)
            if connected_only and not conn[mask]:
                continue
            yield tuple(curve.component_ids[i] for i in combo), int(internal[mask])


def connected_splits(curve, bound=MAX_ENUM_COMPONENTS):
    """All ordered decompositions ``X = A u B`` with A and B connected."""
    out = []
    c = len(curve.components)
    if c < 2:
        return out
    _check_bound(curve, bound)
    a, b = curve.node_ends
    _, conn = _kernels.subset_stats(a, b, c)
    full = (1 << c) - 1
    for ids, _ in subsets(curve, bound=bound):
        mask = sum(1 << curve.index[i] for i in ids)
        if mask == full:
            continue
        if conn[mask] and conn[full ^ mask]:
            out.append(decompose(curve, ids))
    return out


# ---------------------------------------------------------------- transforms


def mobius(param, a, b, c, d):
    """Image of a parameter under ``t -> (a t + b) / (c t + d)``."""
    a, b, c, d = (Fraction(x) for x in (a, b, c, d))
    if a * d - b * c == 0:
        raise ValueError("degenerate Mobius transformation")
    if param is INF:
        return INF if c == 0 else a / c
    den = c * param + d
    if den == 0:
        return INF
    return (a * param + b) / den


def reparametrize(curve, component_id, coeffs):
    """Apply a Mobius map to the coordinate of one component."""
    def move(br):
        if br.component_id != component_id:
            return br
        return BranchPoint(br.component_id, mobius(br.param, *coeffs))

    nodes = tuple(Node(n.id, move(n.branch_a), move(n.branch_b)) for n in curve.nodes)
    return NodalCurve(curve.components, nodes, curve.name)


def relabel(curve, mapping):
    """Rename components by ``mapping`` and reorder them by new id."""
    comps = sorted((Component(mapping.get(c.id, c.id), c.label) for c in curve.components),
                   key=lambda c: c.id)

    def move(br):
        return BranchPoint(mapping.get(br.component_id, br.component_id), br.param)

    nodes = tuple(Node(n.id, move(n.branch_a), move(n.branch_b)) for n in curve.nodes)
    return NodalCurve(tuple(comps), nodes, curve.name)


def swap_branches(curve, node_id):
    nodes = tuple(Node(n.id, n.branch_b, n.branch_a) if n.id == node_id else n
                  for n in curve.nodes)
    return NodalCurve(curve.components, nodes, curve.name)


# ---------------------------------------------------------------------- JSON


def curve_from_dict(data):
    """Build a curve from the JSON-shaped dict; ``"auto"`` params are filled
    with distinct small integers drawn from ``random.Random(data["seed"])``.
    Components may be given as bare ids."""
    try:
        return _curve_from_dict(data)
    except (KeyError, TypeError, AttributeError, ValueError, ZeroDivisionError) as exc:
        raise CurveError(f"malformed curve description: {type(exc).__name__}: {exc}") from exc


def _component(c):
    if isinstance(c, str):
        return Component(c)
    return Component(str(c["id"]), str(c.get("label", "")))


def _curve_from_dict(data):
    seed = data.get("seed", 0)
    comps = tuple(_component(c) for c in data["components"])
    raw = []
    used = {c.id: set() for c in comps}
    for i, n in enumerate(data.get("nodes", [])):
        ends = []
        for side in ("a", "b"):
            br = n[side]
            t = br.get("t", "auto")
            val = None if (isinstance(t, str) and t.strip().lower() == "auto") else parse_scalar(t)
            comp = str(br["comp"])
            if val is not None and comp in used:
                used[comp].add(param_key(val))
            ends.append([comp, val])
        raw.append((str(n.get("id", f"n{i + 1}")), ends))
    rng = random.Random(seed)
    nodes = []
    for nid, ends in raw:
        brs = []
        for comp, val in ends:
            if val is None:
                taken = used.setdefault(comp, set())
                radius = 4
                while True:
                    pool = [v for v in range(-radius, radius + 1) if (0, Fraction(v)) not in taken]
                    if pool:
                        break
                    radius *= 2
                val = Fraction(rng.choice(pool))
                taken.add(param_key(val))
            brs.append(BranchPoint(comp, val))
        nodes.append(Node(nid, brs[0], brs[1]))
    return NodalCurve(comps, tuple(nodes), str(data.get("name", "")))


def curve_to_dict(curve):
    out = {}
    if curve.name:
        out["name"] = curve.name
    out["components"] = [{"id": c.id, "label": c.label} for c in curve.components]
    out["nodes"] = [
        {"id": n.id,
         "a": {"comp": n.branch_a.component_id, "t": format_scalar(n.branch_a.param)},
         "b": {"comp": n.branch_b.component_id, "t": format_scalar(n.branch_b.param)}}
        for n in curve.nodes
    ]
    return out


def load_curve(path):
    with open(path) as fh:
        return check_valid(curve_from_dict(json.load(fh)))


def dump_curve(curve, path):
    with open(path, "w") as fh:
        json.dump(curve_to_dict(curve), fh, indent=2)
        fh.write("\n")
