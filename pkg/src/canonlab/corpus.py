"""Deterministic families of stable nodal curves used as test corpora."""
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import networkx as nx

from .curve import BranchPoint, Component, NodalCurve, check_valid, param_key
from .errors import BadParameters

FAMILIES = ("binary", "graph", "chain", "four_component", "random_stable")


class _ParamPool:
    """Hands out distinct small-integer parameters per component."""

    def __init__(self, rng, radius=12):
        self.rng = rng
        self.radius = radius
        self.used = {}

    def draw(self, cid):
        used = self.used.setdefault(cid, set())
        radius = self.radius
        while True:
            pool = [v for v in range(-radius, radius + 1) if v not in used]
            if pool:
                break
            radius *= 2
        v = self.rng.choice(pool)
        used.add(v)
        return BranchPoint(cid, Fraction(v))


def _build(name, comp_ids, edges, seed):
    """``edges`` are ``(node_id, comp_a, comp_b)``; params come from the seed."""
    pool = _ParamPool(random.Random(seed))
    comps = tuple(Component(c) for c in comp_ids)
    from .curve import Node

    nodes = tuple(Node(nid, pool.draw(a), pool.draw(b)) for nid, a, b in edges)
    return check_valid(NodalCurve(comps, nodes, name))


def _self_nodes(cid, count):
    return [(f"s_{cid}_{i + 1}", cid, cid) for i in range(count)]


def binary(g, seed=0):
    """Two rational components meeting at g+1 points."""
    if g < 0:
        raise BadParameters("binary curves need g >= 0")
    edges = [(f"n{i + 1}", "C1", "C2") for i in range(g + 1)]
    return _build(f"binary(g={g},seed={seed})", ["C1", "C2"], edges, seed)


def graph_curve(G, seed=0, name=None):
    """One rational component per vertex, one node per edge of ``G``."""
    if any(d != 3 for _, d in G.degree()):
        raise BadParameters("graph curves need a trivalent graph")
    order = sorted(G.nodes())
    cid = {v: f"V{v}" for v in order}
    edges = []
    for i, (u, v) in enumerate(sorted((min(e[:2]), max(e[:2])) for e in G.edges())):
        edges.append((f"e{i + 1}", cid[u], cid[v]))
    label = name or f"graph(n={G.number_of_nodes()},edges={sorted(G.edges())})"
    return _build(label, [cid[v] for v in order], edges, seed)


def chain(n, delta, genera=None, seed=0):
    """n components in a row, consecutive ones glued at ``delta`` nodes;
    component i carries ``genera[i]`` self-nodes."""
    if n < 1 or delta < 1:
        raise BadParameters("chain needs n >= 1 and delta >= 1")
    genera = tuple(genera or (0,) * n)
    if len(genera) != n or min(genera) < 0:
        raise BadParameters("genera must list one non-negative entry per component")
    ids = [f"C{i + 1}" for i in range(n)]
    edges = []
    for i in range(n - 1):
        for j in range(delta):
            edges.append((f"n{i + 1}_{j + 1}", ids[i], ids[i + 1]))
    for cid, gi in zip(ids, genera):
        edges.extend(_self_nodes(cid, gi))
    return _build(f"chain(n={n},delta={delta},genera={list(genera)},seed={seed})", ids, edges, seed)


def four_component(genera, seed=0):
    """Four components meeting pairwise once (6 nodes ``p_ij``); component i
    carries ``genera[i]`` self-nodes, so g = sum(genera) + 3."""
    genera = tuple(genera)
    if len(genera) != 4 or min(genera) < 0:
        raise BadParameters("four_component needs four non-negative genera")
    ids = ["X1", "X2", "X3", "X4"]
    edges = [(f"p{i + 1}{j + 1}", ids[i], ids[j]) for i in range(4) for j in range(i + 1, 4)]
    for cid, gi in zip(ids, genera):
        edges.extend(_self_nodes(cid, gi))
    return _build(f"four_component(genera={list(genera)},seed={seed})", ids, edges, seed)


def random_stable(n_components, n_nodes, seed=0, max_tries=1000):
    """Random connected stable curve: every component has >= 3 branch points."""
    if n_components < 1 or n_nodes < n_components - 1:
        raise BadParameters("need n_nodes >= n_components - 1")
    if 2 * n_nodes < 3 * n_components:
        raise BadParameters("too few nodes for every component to carry 3 branches")
    rng = random.Random(seed)
    ids = [f"C{i + 1}" for i in range(n_components)]
    for _ in range(max_tries):
        pairs = []
        for i in range(1, n_components):
            pairs.append((ids[rng.randrange(i)], ids[i]))
        while len(pairs) < n_nodes:
            pairs.append((rng.choice(ids), rng.choice(ids)))
        valence = {c: 0 for c in ids}
        for a, b in pairs:
            valence[a] += 1
            valence[b] += 1
        if min(valence.values()) >= 3:
            edges = [(f"n{i + 1}", a, b) for i, (a, b) in enumerate(pairs)]
            return _build(f"random_stable(c={n_components},nodes={n_nodes},seed={seed})",
                          ids, edges, seed)
    raise BadParameters("could not draw a stable configuration")


# ----------------------------------------------------------- cubic graphs


def cubic_graphs(n):
    """All connected simple trivalent graphs on n vertices, up to isomorphism."""
    if n % 2 or n < 4:
        return []
    found = []
    deg = [0] * n
    adj = [set() for _ in range(n)]
    edges = []

    def extend(last_u):
        v = next((i for i in range(n) if deg[i] < 3), None)
        if v is None:
            G = nx.Graph()
            G.add_nodes_from(range(n))
            G.add_edges_from(edges)
            if nx.is_connected(G):
                _keep(G)
            return
        start = last_u[v] + 1 if v in last_u else v + 1
        for u in range(start, n):
            if deg[u] < 3 and u not in adj[v]:
                deg[u] += 1
                deg[v] += 1
                adj[u].add(v)
                adj[v].add(u)
                edges.append((v, u))
                prev = last_u.get(v)
                last_u[v] = u
                extend(last_u)
                if prev is None:
                    del last_u[v]
                else:
                    last_u[v] = prev
                edges.pop()
                adj[u].discard(v)
                adj[v].discard(u)
                deg[u] -= 1
                deg[v] -= 1

    buckets = {}

    def _keep(G):
        h = nx.weisfeiler_lehman_graph_hash(G)
        bucket = buckets.setdefault(h, [])
        if any(nx.is_isomorphic(G, H) for H in bucket):
            return
        bucket.append(G)
        found.append(G)

    # vertex 0 is adjacent to 1, 2, 3 without loss of generality
    for u in (1, 2, 3):
        deg[0] += 1
        deg[u] += 1
        adj[0].add(u)
        adj[u].add(0)
        edges.append((0, u))
    extend({0: 3})
    return found


def all_cubic_graphs(max_vertices):
    out = []
    for n in range(4, max_vertices + 1, 2):
        out.extend(cubic_graphs(n))
    return out


# ------------------------------------------------------------- corpus specs


@dataclass(frozen=True)
class CorpusSpec:
    family: str
    genus: tuple = (3, 8)
    genera: tuple = ()
    n_components: int = 2
    delta: int = 3
    n_nodes: int = 0
    max_vertices: int = 8
    count: int = 1
    seed: int = 0

    def to_dict(self):
        d = asdict(self)
        d["genus"] = list(self.genus)
        d["genera"] = list(self.genera)
        return d


def generate(spec):
    """Curves of a corpus family, deterministic in ``spec.seed``."""
    fam = spec.family
    if fam not in FAMILIES:
        raise BadParameters(f"unknown family {fam!r}; choose from {FAMILIES}")
    if fam == "binary":
        lo, hi = spec.genus
        if lo < 2 or hi < lo or hi > 30:
            raise BadParameters("binary genus range must satisfy 2 <= lo <= hi <= 30")
        return [binary(g, spec.seed) for g in range(lo, hi + 1)]
    if fam == "graph":
        if spec.max_vertices < 4 or spec.max_vertices > 12:
            raise BadParameters("graph family supports 4 <= max_vertices <= 12")
        return [graph_curve(G, spec.seed) for G in all_cubic_graphs(spec.max_vertices)]
    if fam == "chain":
        return [chain(spec.n_components, spec.delta, spec.genera or None, spec.seed)]
    if fam == "four_component":
        return [four_component(spec.genera or (1, 0, 0, 0), spec.seed)]
    nodes = spec.n_nodes or 2 * spec.n_components
    return [random_stable(spec.n_components, nodes, spec.seed + i) for i in range(spec.count)]


def default_corpus(seed=0):
    return [
        CorpusSpec("binary", genus=(3, 8), seed=seed),
        CorpusSpec("graph", max_vertices=8, seed=seed),
        CorpusSpec("four_component", genera=(1, 0, 0, 0), seed=seed),
        CorpusSpec("four_component", genera=(1, 1, 0, 0), seed=seed),
        CorpusSpec("four_component", genera=(1, 1, 1, 1), seed=seed),
        CorpusSpec("chain", n_components=2, delta=3, genera=(1, 1), seed=seed),
        CorpusSpec("chain", n_components=2, delta=3, genera=(2, 0), seed=seed),
        CorpusSpec("chain", n_components=2, delta=4, genera=(1, 1), seed=seed),
        CorpusSpec("chain", n_components=3, delta=3, genera=(1, 0, 0), seed=seed),
        CorpusSpec("chain", n_components=2, delta=2, genera=(2, 2), seed=seed),
        CorpusSpec("random_stable", n_components=3, n_nodes=7, count=3, seed=seed),
    ]
