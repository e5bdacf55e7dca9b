"""Registered oracle cases: every named hand-derived example plus seeded
randomized cross-checks of the main implementations against the
brute-force references. The CLI `verify` command runs all of them.
"""

import numpy as np

from . import augment, contrast, encoder, oracles
from .data import Graph, Hypergraph
from .views import closeness_centrality

TOL_EXACT = 1e-12
TOL_LOSS = 1e-10


def _path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def _complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def _random_graph(rng, n, p):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return Graph.from_edges(n, edges)


def _random_hypergraph(rng, n, n_edges):
    hyperedges = []
    for _ in range(n_edges):
        size = int(rng.integers(1, max(2, n // 2)))
        hyperedges.append(rng.choice(n, size=size, replace=False))
    return Hypergraph(num_nodes=n, hyperedges=hyperedges, view_tag="global")


def _max_abs_diff(a, b):
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def _case(case_id, expected, actual, tol):
    return oracles.OracleReport.compare(case_id, expected, actual, tol)


def verification_cases(seed=0):
    """Build the full list of OracleReport rows."""
    rng = np.random.default_rng(seed)
    reports = []

    # closeness centrality: hand-derived and randomized vs brute force
    path3 = _path_graph(3)
    c = closeness_centrality(path3)
    reports.append(_case("closeness_path3_middle", 1.0, c[1], TOL_EXACT))
    reports.append(_case("closeness_path3_end", 2.0 / 3.0, c[0], TOL_EXACT))
    k4 = _complete_graph(4)
    reports.append(_case("closeness_k4_all_one", 0.0,
                         _max_abs_diff(closeness_centrality(k4), np.ones(4)),
                         TOL_EXACT))
    ten = Graph.from_edges(10, [(0, 1)])
    reports.append(_case("closeness_two_node_component", 1.0 / 9.0,
                         closeness_centrality(ten)[0], TOL_EXACT))
    for i in range(10):
        g = _random_graph(rng, 30, 0.1)
        reports.append(_case(
            f"closeness_random_{i}", 0.0,
            _max_abs_diff(closeness_centrality(g), oracles.brute_closeness(g)),
            TOL_EXACT))

    # all-pairs BFS oracle self-consistency
    dist = oracles.bfs_all_pairs(_path_graph(3))
    reports.append(_case("bfs_path3_end_to_end", 2.0, dist[0, 2], 0.0))
    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    d2 = oracles.bfs_all_pairs(two)
    reports.append(_case("bfs_disconnected_inf", 1.0,
                         float(np.isinf(d2[0, 2])), 0.0))
    g = _random_graph(rng, 50, 0.08)
    dm = oracles.bfs_all_pairs(g)
    reports.append(_case("bfs_random_symmetric", 0.0,
                         _max_abs_diff(np.nan_to_num(dm, posinf=-1.0),
                                       np.nan_to_num(dm.T, posinf=-1.0)),
                         0.0))
    reports.append(_case("bfs_random_zero_diag", 0.0,
                         float(np.abs(np.diag(dm)).max()), 0.0))

    # local clustering coefficient
    tri = _complete_graph(3)
    h_tri = Hypergraph(3, [np.arange(3)], "global")
    reports.append(_case("lc_triangle_all_one", 0.0,
                         _max_abs_diff(encoder.clustering_bias(tri, h_tri),
                                       np.ones(3)), TOL_EXACT))
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    h_star = Hypergraph(4, [np.arange(4)], "global")
    reports.append(_case("lc_star_center_zero", 0.0,
                         encoder.clustering_bias(star, h_star)[0], TOL_EXACT))
    cyc = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    h_cyc = Hypergraph(4, [np.arange(4)], "global")
    reports.append(_case("lc_cycle4_zero", 0.0,
                         _max_abs_diff(encoder.clustering_bias(cyc, h_cyc),
                                       np.zeros(4)), TOL_EXACT))
    chord = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    reports.append(_case("lc_cycle4_chord_node1", 1.0,
                         encoder.clustering_bias(chord, h_cyc)[1], TOL_EXACT))
    for i in range(5):
        g = _random_graph(rng, 25, 0.2)
        h = _random_hypergraph(rng, 25, 8)
        reports.append(_case(
            f"lc_random_{i}", 0.0,
            _max_abs_diff(encoder.clustering_bias(g, h),
                          oracles.brute_local_clustering(g, h)), TOL_EXACT))

    # hyperedge density
    h_full = Hypergraph(10, [np.arange(10)], "global")
    reports.append(_case("hd_full_hyperedge", 1.0,
                         encoder.density_bias(h_full)[0], TOL_EXACT))
    h_single = Hypergraph(10, [np.array([3])], "global")
    reports.append(_case("hd_singleton", 0.1,
                         encoder.density_bias(h_single)[0], TOL_EXACT))
    h = _random_hypergraph(rng, 40, 12)
    reports.append(_case("hd_random", 0.0,
                         _max_abs_diff(encoder.density_bias(h),
                                       oracles.brute_density(h)), TOL_EXACT))

    # distinctiveness
    h_all = Hypergraph(4, [np.arange(4)] * 5, "global")
    reports.append(_case("de_member_of_all", 0.0,
                         encoder.distinctiveness_scores(h_all)[0], TOL_EXACT))
    h100 = Hypergraph(2, [np.array([0, 1])] + [np.array([1])] * 99, "global")
    reports.append(_case("de_one_of_100", 0.99,
                         encoder.distinctiveness_scores(h100)[0], TOL_EXACT))
    h = _random_hypergraph(rng, 30, 20)
    reports.append(_case("de_random", 0.0,
                         _max_abs_diff(encoder.distinctiveness_scores(h),
                                       oracles.brute_distinctiveness(h)),
                         TOL_EXACT))

    # negative samplers vs brute rankings
    path5 = _path_graph(5)
    pos = [np.array([0, 1, 2])] + [np.array([v]) for v in range(1, 5)]
    negs = contrast.sample_negatives_distance(path5, pos, 1)
    reports.append(_case("negdist_path5_anchor0", 4.0, float(negs[0][0]), 0.0))
    for i in range(3):
        g = _random_graph(rng, 20, 0.15)
        pos = contrast.build_positive_sets(g, [])
        ours = contrast.sample_negatives_distance(g, pos, 5)
        brute = oracles.brute_distance_negatives(g, pos, 5)
        diff = max(_max_abs_diff(a, b) for a, b in zip(ours, brute))
        reports.append(_case(f"negdist_random_{i}", 0.0, diff, 0.0))
    x = rng.standard_normal((12, 3))
    pos = [np.array([v]) for v in range(12)]
    ours = contrast.sample_negatives_similarity(x, pos, 4)
    sims = oracles.brute_cosine(x)
    diff = 0.0
    for v in range(12):
        cand = [u for u in range(12) if u != v]
        cand.sort(key=lambda u: (sims[v, u], u))
        diff = max(diff, _max_abs_diff(ours[v], np.array(cand[:4])))
    reports.append(_case("negsim_random_vs_brute", 0.0, diff, 0.0))

    # pairwise contrastive loss vs exhaustive enumeration
    pos = [np.array([v, (v + 1) % 6]) for v in range(6)]
    neg = [np.array([(v + 3) % 6]) for v in range(6)]
    samples = contrast.SampleSets(pos=pos, neg=neg, strategy="distance",
                                  t=1, eta=0.5)
    z = np.ones((6, 4))
    reports.append(_case("loss_uniform_sims", -np.log(2.0 / 3.0),
                         contrast.pairwise_loss(z, z, samples), TOL_LOSS))
    samples_nn = contrast.SampleSets(pos=pos,
                                     neg=[np.zeros(0, dtype=np.int64)] * 6,
                                     strategy="distance", t=0, eta=0.5)
    reports.append(_case("loss_empty_negatives", 0.0,
                         contrast.pairwise_loss(z, z, samples_nn), TOL_LOSS))
    for i in range(5):
        n = 10
        zl = rng.standard_normal((n, 6))
        zr = rng.standard_normal((n, 6))
        pos = [np.unique(np.append(rng.choice(n, size=3), v)) for v in range(n)]
        neg = []
        for v in range(n):
            cand = np.setdiff1d(np.arange(n), pos[v])
            neg.append(cand[:3])
        samples = contrast.SampleSets(pos=pos, neg=neg, strategy="distance",
                                      t=3, eta=0.5)
        zl_hat = [row / np.linalg.norm(row) for row in zl]
        zr_hat = [row / np.linalg.norm(row) for row in zr]
        sims = np.array([[float(np.dot(a, b)) for b in zr_hat] for a in zl_hat])
        expected = oracles.exhaustive_loss(sims, pos, neg, 0.5)
        reports.append(_case(f"loss_random_{i}", expected,
                             contrast.pairwise_loss(zl, zr, samples), TOL_LOSS))

    # gumbel transform and finite differences
    reports.append(_case("gumbel_at_half", -np.log(np.log(2.0)),
                         float(augment.gumbel_transform(np.array(0.5))),
                         TOL_EXACT))
    fd = oracles.finite_difference_grad(lambda p: float(p[0] ** 2),
                                        np.array([3.0]))
    reports.append(_case("fd_quadratic_at_3", 6.0, fd[0], 1e-8))
    fd = oracles.finite_difference_grad(lambda p: 1.25, np.array([0.3, -2.0]))
    reports.append(_case("fd_constant_zero", 0.0, _max_abs_diff(fd, [0, 0]),
                         1e-12))
    return reports
