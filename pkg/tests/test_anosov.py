import copy
from fractions import Fraction

import pytest

from anosograph.anosov import (
    AutomorphismCertificate,
    ExtensionError,
    NotAdmissibleError,
    companion_matrix,
    decide_anosov,
    extend_to_algebra,
    find_component_matrix,
    synthesize,
    verify_certificate,
)
from anosograph.graphs import coherent_components, parse_graph
from anosograph.intpoly import IntPolynomial
from anosograph.liealg import quotient_algebra
from anosograph.spectra import products_off_circle
from oracles import (
    all_labeled_graphs,
    complete_graph,
    cycle_graph,
    decide_anosov_brute,
    magnet_graph,
)

C4 = parse_graph("a b\nb c\nc d\nd a")


def test_complete_graph_table():
    for n in range(2, 8):
        for k in range(2, 7):
            verdict = decide_anosov(coherent_components(complete_graph(n)), k)
            assert verdict.admits == (n > k)


def test_four_cycle_all_steps():
    for k in range(2, 7):
        assert decide_anosov(coherent_components(C4), k).admits


def test_magnet_table():
    for core in (2, 3, 4):
        for k in range(2, 7):
            verdict = decide_anosov(coherent_components(magnet_graph(core, 2)), k)
            assert verdict.admits == (k < core), (core, k)


def test_isolated_vertex_is_singleton_violation():
    g = parse_graph("a b\nb c\nc a\nvertex: z")
    verdict = decide_anosov(coherent_components(g), 2)
    assert not verdict.admits
    assert any(v.reason == "singleton-class" for v in verdict.violations)


def test_internal_edge_violation_names_edge():
    verdict = decide_anosov(coherent_components(complete_graph(3)), 3)
    assert not verdict.admits
    v = verdict.violations[0]
    assert v.reason == "internal-edge-in-small-class"
    assert v.offending_edge is not None


def test_brute_force_soundness_small():
    for n in range(1, 7):
        for g in all_labeled_graphs(n):
            partition = coherent_components(g)
            for k in (2, 3, 4):
                assert decide_anosov(partition, k).admits == decide_anosov_brute(g, k)


def test_component_matrix_golden():
    cm = find_component_matrix(2, 3)
    assert cm.matrix == [[0, 1], [1, 1]]
    assert cm.poly.to_json() == [-1, -1, 1]
    assert cm.r_max == 1


def test_full_product_on_circle_for_unimodular_2x2():
    # r = 2 on a 2x2 unimodular matrix multiplies all eigenvalues: +-1;
    # this is why the order bound is min(k, d-1)
    assert not products_off_circle([[0, 1], [1, 1]], 2).ok
    for a in ([[1, 1], [0, 1]], [[2, 1], [1, 1]], [[1, 2], [1, 3]]):
        assert not products_off_circle(a, 2).ok


def test_component_matrix_d4_passes_all_orders():
    cm = find_component_matrix(4, 3)
    assert cm.r_max == 3
    assert cm.products.ok
    assert len(cm.products.per_r) == 3
    assert abs(cm.poly.constant()) == 1


def test_component_matrix_rejects_d1():
    with pytest.raises(ValueError):
        find_component_matrix(1, 2)


def test_companion_char_poly():
    from anosograph.spectra import char_poly

    p = IntPolynomial([-1, 2, 0, 1])
    assert char_poly(companion_matrix(p)).to_json() == p.to_json()


def test_extend_identity():
    h = quotient_algebra(C4, 3)
    blocks = extend_to_algebra(h, [[1 if i == j else 0 for j in range(4)] for i in range(4)])
    for m in range(1, 4):
        d = h.dims[m - 1]
        assert blocks[m] == [[Fraction(1) if i == j else Fraction(0)
                              for j in range(d)] for i in range(d)]


def test_extend_four_cycle_hand_expansion():
    # g = A on {a,c} and A on {b,d} with A = [[0,1],[1,1]]:
    # ga=c, gc=a+c, gb=d, gd=b+d; expanding brackets on the edge basis
    # (a.b, a.d, b.c, c.d) by hand gives this degree-2 block
    h = quotient_algebra(C4, 2)
    g = [[0, 0, 1, 0],
         [0, 0, 0, 1],
         [1, 0, 1, 0],
         [0, 1, 0, 1]]
    blocks = extend_to_algebra(h, g)
    expected = [[0, 0, 0, 1],
                [0, 0, -1, 1],
                [0, -1, 0, -1],
                [1, 1, -1, 1]]
    assert blocks[2] == [[Fraction(x) for x in row] for row in expected]


def test_extend_scalar_on_complete_graph():
    h = quotient_algebra(complete_graph(3), 2)
    blocks = extend_to_algebra(h, [[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert blocks[2] == [[Fraction(4) if i == j else Fraction(0)
                          for j in range(3)] for i in range(3)]


def test_extend_rejects_non_descending_map():
    # sending a -> a+b makes [g a, g c] = [b, c] != 0, leaving the ideal
    h = quotient_algebra(C4, 2)
    g = [[1, 0, 0, 0],
         [1, 1, 0, 0],
         [0, 0, 1, 0],
         [0, 0, 0, 1]]
    with pytest.raises(ExtensionError):
        extend_to_algebra(h, g)


def test_synthesize_not_admissible():
    with pytest.raises(NotAdmissibleError):
        synthesize(complete_graph(3), 3)


def test_synthesize_round_trip_c4_k2():
    cert = synthesize(C4, 2)
    assert sorted(cert.degree_blocks) == [1, 2]
    assert all(d in (1, -1) for d in cert.determinants.values())
    ok, report = verify_certificate(C4, cert)
    assert ok, report


def test_synthesize_round_trip_c4_k3():
    cert = synthesize(C4, 3)
    assert [len(cert.degree_blocks[m]) for m in (1, 2, 3)] == [4, 4, 12]
    ok, _ = verify_certificate(C4, cert)
    assert ok


def test_synthesize_edgeless_toral_case():
    # abelian algebra: the degree-2 block is empty and the certificate is
    # just a hyperbolic integer matrix on the vertex space
    from oracles import edgeless_graph

    g = edgeless_graph(2)
    cert = synthesize(g, 2)
    assert cert.degree_blocks[2] == []
    ok, _ = verify_certificate(g, cert)
    assert ok


def test_synthesize_deterministic():
    a = synthesize(C4, 2).to_json()
    b = synthesize(C4, 2).to_json()
    assert a == b


def test_certificate_json_round_trip():
    cert = synthesize(C4, 2)
    again = AutomorphismCertificate.from_json(cert.to_json())
    ok, _ = verify_certificate(C4, again)
    assert ok


def test_verify_rejects_wrong_graph():
    cert = synthesize(C4, 2)
    other = cycle_graph(4)  # different labels, different digest
    ok, report = verify_certificate(other, cert)
    assert not ok and report["first_failure"] == "graph-binding"


def test_verify_detects_perturbed_block():
    cert = synthesize(C4, 2)
    mutated = AutomorphismCertificate.from_json(copy.deepcopy(cert.to_json()))
    mutated.degree_blocks[2][0][0] += 1
    ok, report = verify_certificate(C4, mutated)
    assert not ok
    assert report["first_failure"] == "bracket-compatibility"


def test_verify_detects_identity_components():
    h = quotient_algebra(C4, 2)
    identity4 = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    identity2 = [[1, 0], [0, 1]]
    blocks = extend_to_algebra(h, identity4)
    cert = AutomorphismCertificate(
        graph_digest=C4.digest(),
        k=2,
        classes=coherent_components(C4).class_labels(),
        components=[{"matrix": identity2, "char_poly": [1, -2, 1],
                     "r_max": 1, "candidate_index": -1, "products": {}}] * 2,
        exponents=[1, 1],
        degree_blocks={m: [[int(x) for x in row] for row in b] for m, b in blocks.items()},
        char_polys={},
        unit_root_certs={},
        determinants={},
    )
    ok, report = verify_certificate(C4, cert)
    assert not ok
    assert report["first_failure"] == "unit-root-freeness"


def test_degree_two_roots_within_pairwise_products():
    # eigenvalues of the degree-2 block are products of degree-1 pairs
    import sympy

    cert = synthesize(C4, 2)
    x, z = sympy.symbols("x z")
    p1 = sympy.Poly([c for c in reversed(cert.char_polys[1])], x)
    p2 = sympy.Poly([c for c in reversed(cert.char_polys[2])], x)
    n = p1.degree()
    pairs = sympy.resultant(p1, sympy.Poly(sympy.expand(x ** n * p1.as_expr().subs(x, z / x)), x, z), x)
    sf2 = sympy.factor_list(p2.as_expr())[1]
    for factor, _ in sf2:
        q, r = sympy.div(sympy.Poly(pairs, z), sympy.Poly(factor.subs(x, z), z), z)
        assert r == 0, f"degree-2 factor {factor} not among pairwise products"


def test_extension_is_functorial():
    # extending a product equals the product of extensions, per degree
    from anosograph.linalg import mat_eq, mat_mul

    h = quotient_algebra(C4, 3)
    a = _scatter(h, [[0, 1], [1, 1]], [[1, 1], [1, 2]])
    b = _scatter(h, [[1, 1], [1, 2]], [[0, 1], [1, 1]])
    ab = [[sum(a[i][t] * b[t][j] for t in range(4)) for j in range(4)] for i in range(4)]
    blocks_a = extend_to_algebra(h, a)
    blocks_b = extend_to_algebra(h, b)
    blocks_ab = extend_to_algebra(h, ab)
    for m in range(1, 4):
        assert mat_eq(blocks_ab[m], mat_mul(blocks_a[m], blocks_b[m]))


def _scatter(algebra, first, second):
    from anosograph.anosov import _scatter_block_diagonal

    partition = coherent_components(algebra.graph)
    return _scatter_block_diagonal(algebra.graph.n, partition.classes, [first, second])


def test_isolated_pair_forms_admissible_class():
    # isolated vertices cluster together; only a lone one is a violation
    g = parse_graph("a b\nb c\nc d\nd a\nvertex: y\nvertex: z")
    partition = coherent_components(g)
    assert ["y", "z"] in partition.class_labels()
    assert decide_anosov(partition, 2).admits
    cert = synthesize(g, 2)
    ok, _ = verify_certificate(g, cert)
    assert ok
