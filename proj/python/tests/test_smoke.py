import math

import pytest

import homonym


def test_toy_graph_weights():
    papers = homonym.toy_corpus()
    assert len(papers) == 10
    doc = homonym.ambiguity_json(
        ["Kim"], {"Kim": {"1": "1", "5": "1", "2": "2", "3": "3", "4": "3", "6": "4"}}
    )
    names, w, mask = homonym.collaboration_graph(papers, doc)
    assert len(names) == 12
    assert sum(mask) == 4
    for i in range(len(w)):
        for j in range(len(w)):
            assert w[i][j] == w[j][i]
    idx = {n: i for i, n in enumerate(names)}
    assert math.isclose(w[idx["Kong"]][idx["Shi"]], 1.0)


def test_passage_rows_sum_to_rl():
    names, w, _ = homonym.collaboration_graph(homonym.toy_corpus())
    p = homonym.transition_matrix(w)
    a = homonym.passage_similarity(p, 4, 3)
    for row in a:
        assert math.isclose(sum(row), 12.0, rel_tol=1e-12)
    alpha = homonym.forward_variables(p, 0, 1)
    assert alpha[0] == pytest.approx(p[0])


def test_monte_carlo_is_reproducible():
    p = [[0.0, 1.0], [1.0, 0.0]]
    assert homonym.monte_carlo_passage(p, 0, 4, 5, seed=7) == [10, 10]


def test_demo_network_split():
    adj, truth = homonym.demo_network()
    res = homonym.run_competition(adj, 3, seed=1, positions=[0, 2, 11])
    assert homonym.pairwise_scores(res["labels"], truth)["f"] == 1.0
    assert res["iterations"] == 1000
    for row in res["domination"]:
        assert math.isclose(sum(row), 1.0)


def test_separable_benchmark_end_to_end():
    papers, name, truth = homonym.synthetic_benchmark(2, seed=3)
    doc = homonym.ambiguity_json([name])
    res = homonym.disambiguate(papers, doc, 2, truth=truth)
    assert res["score"]["f"] == 1.0
    assert len(res["nodes"]) == len(truth)


def test_sparsify_and_reduce():
    a = [[0, 3, 1], [3, 0, 2], [1, 2, 0]]
    m, connected, warning = homonym.sparsify(a, "knn:1")
    assert m == [[0, 3, 0], [3, 0, 2], [0, 2, 0]]
    assert connected and warning is None
    r = homonym.reduce_network([[1, 2, 9], [4, 1, 9], [9, 9, 9]], [True, True, False])
    assert r == [[0, 3], [3, 0]]


def test_errors_map_to_python_exceptions():
    with pytest.raises(homonym.DataError):
        homonym.run_competition([[0, 1], [1, 0]], 3)
    with pytest.raises(homonym.ContractError):
        homonym.forward_variables([[0.5, 0.4], [0, 1]], 0, 2)
    with pytest.raises(ArithmeticError):
        homonym.run_competition([[0, 1], [1, 0]], 2, lambda_=2.0)
    with pytest.raises(ValueError):
        homonym.disambiguate(homonym.toy_corpus(), '{"Kim": 3}', 2)
    assert homonym.sign_test_pvalue(7) == pytest.approx(2.7e-4, rel=0.02)
