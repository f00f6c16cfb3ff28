import networkx as nx
import pytest

from canonlab import corpus
from canonlab.corpus import CorpusSpec, generate
from canonlab.curve import validate
from canonlab.errors import BadParameters


def test_binary_three():
    c = corpus.binary(3)
    assert c.genus == 3 and len(c.nodes) == 4


def test_graph_k4():
    c = corpus.graph_curve(nx.complete_graph(4))
    assert len(c.components) == 4 and len(c.nodes) == 6 and c.genus == 3


def test_four_component_genus():
    # g = g1 + g2 + g3 + g4 + 3
    assert corpus.four_component((1, 0, 0, 0)).genus == 4


def test_cubic_graph_counts():
    assert [len(corpus.cubic_graphs(n)) for n in (4, 6, 8)] == [1, 2, 5]
    assert corpus.cubic_graphs(5) == []


def test_chain_and_random():
    c = corpus.chain(3, 2, (1, 0, 2))
    assert c.genus == 2 * 2 - 3 + 1 + 3
    r = corpus.random_stable(4, 7, seed=2)
    assert validate(r) == []
    for cid in r.component_ids:
        assert len(r.branch_points(cid)) >= 3


@pytest.mark.parametrize("spec", corpus.default_corpus())
def test_default_corpus_valid_and_deterministic(spec):
    first, second = generate(spec), generate(spec)
    assert first == second
    for c in first:
        assert validate(c) == [] and c.genus >= 2


def test_seed_changes_parameters():
    assert corpus.binary(4, seed=1) != corpus.binary(4, seed=2)


@pytest.mark.parametrize("bad", [
    lambda: corpus.binary(-1),
    lambda: corpus.chain(0, 1),
    lambda: corpus.four_component((1, 0, 0)),
    lambda: corpus.random_stable(4, 2),
    lambda: generate(CorpusSpec("nope")),
    lambda: generate(CorpusSpec("binary", genus=(5, 3))),
    lambda: generate(CorpusSpec("graph", max_vertices=40)),
    lambda: corpus.graph_curve(nx.path_graph(4)),
])
def test_bad_parameters(bad):
    with pytest.raises(BadParameters):
        bad()
