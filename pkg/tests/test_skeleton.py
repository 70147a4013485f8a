import pytest

from starmaps import basic_data as bdm
from starmaps import skeleton as sk


def test_terminal_object_passes_everything(terminal):
    report = sk.validate(terminal)
    assert report.ok, report.failures()
    assert not report.warnings
    assert sk.coalign_witness(terminal, "l1", "l2") == [("l1", "l2")]
    assert sk.is_one_coaligned(terminal)


def test_export_of_basic_data_validates():
    g = bdm.export_skeleton(bdm.ledrappier())
    assert sk.validate(g).ok
    assert (len(g.vertices), len(g.edges), len(g.squares)) == (4, 16, 16)


def test_double_square_breaks_factorization(double_square):
    report = sk.validate(double_square)
    assert report.get("structure").ok and report.get("squares").ok
    assert not report.get("factorization").ok
    assert "(au, bu) lies in 2 squares" in report.get("factorization").detail


def test_twisted_graph_is_valid_but_not_coaligned(twisted):
    assert sk.validate(twisted).ok
    verdict = sk.is_one_coaligned(twisted)
    assert not verdict
    assert verdict.counterexample["e_i"] == "a1" and verdict.counterexample["e_j"] == "b1"
    assert sk.coalign_witness(twisted, "a1", "b1") == [("a1", "b1"), ("a2", "b2")]
    assert sk.coalign_witness(twisted, "a1", "b2") == []
    # argument order follows the colors of the given edges
    assert sk.coalign_witness(twisted, "b1", "a1") == [("b1", "a1"), ("b2", "a2")]


def test_flip_graph_is_coaligned(flip_graph):
    assert sk.validate(flip_graph).ok
    assert sk.coalign_witness(flip_graph, "a1", "b") == [("a2", "b")]
    assert sk.is_one_coaligned(flip_graph)


def test_witness_preconditions(twisted):
    with pytest.raises(ValueError):
        sk.coalign_witness(twisted, "a1", "a2")
    g = sk.from_parts(2, ["u", "v"], [("a", 1, "u", "u"), ("b", 2, "v", "v")], [])
    with pytest.raises(ValueError):
        sk.coalign_witness(g, "a", "b")


def test_witnesses_satisfy_endpoint_equations():
    bd = bdm.BasicData.build(bdm.SQUARE_TILE, 4, 1, {(0, 0): 2, (1, 0): 1, (0, 1): 3, (1, 1): 1})
    g = bdm.export_skeleton(bd)
    counts = set()
    for v in g.vertices:
        for a in g.edges_of(v, 1):
            for b in g.edges_of(v, 2):
                found = sk.coalign_witness(g, a.id, b.id)
                counts.add(len(found))
                for f_i, f_j in found:
                    assert g.edge_by_id[f_i].source == b.range
                    assert g.edge_by_id[f_j].source == a.range
    assert counts <= {0, 2} and counts != {0}


def test_dangling_and_bad_colors_are_reported():
    g = sk.from_parts(2, ["v"], [("a", 1, "v", "w"), ("b", 3, "v", "v")], [(1, 2, "a", "b", "b", "zz")])
    report = sk.validate(g)
    detail = report.get("structure").detail
    assert not report.ok
    assert "dangling endpoint w" in detail
    assert "color 3" in detail
    assert "unknown edge zz" in detail


def test_square_consistency_is_checked():
    g = sk.from_parts(
        2,
        ["u", "v"],
        [("a", 1, "u", "u"), ("b", 2, "v", "v")],
        [(1, 2, "a", "b", "b", "a")],
    )
    assert not sk.validate(g).get("squares").ok


def test_sources_and_sinks():
    g = sk.from_parts(2, ["u", "v"], [("a", 1, "u", "v"), ("b", 2, "u", "v")], [])
    report = sk.validate(g)
    assert not report.get("no_sources").ok  # u receives nothing
    assert not report.get("no_sinks").ok  # v emits nothing
    assert "u (color 1)" in report.get("no_sources").detail


def test_k3_warns_about_cube_condition():
    report = sk.validate(sk.terminal(3))
    assert report.ok
    assert any("cube condition" in w for w in report.warnings)


def test_round_trip_is_byte_identical(twisted):
    for g in (twisted, sk.terminal(3), bdm.export_skeleton(bdm.ledrappier(3))):
        text = sk.dumps(g)
        assert sk.loads(text) == g
        assert sk.dumps(sk.loads(text)) == text


def test_loader_diagnostics():
    with pytest.raises(sk.SkeletonFormatError, match="line 3"):
        sk.loads("k 2\n[edges]\na 1 v\n")
    with pytest.raises(sk.SkeletonFormatError, match="missing 'k"):
        sk.loads("[vertices]\nv\n")
    with pytest.raises(sk.SkeletonFormatError, match="i < j"):
        sk.loads("k 2\n[squares]\n2 1 a b c d\n")
    g = sk.loads("# comment\nk 2\n\n[vertices]\nv  # the only vertex\n[edges]\n[squares]\n")
    assert g.vertices == ("v",)


def test_grid_paths_count_and_validity(flip_graph):
    paths = sk.grid_paths(flip_graph, (2, 1))
    # one vertex, two color-1 loops and one color-2 loop: 2 * 2 * 1 choices
    assert len(paths) == 4
    assert all(sk.is_grid_path(flip_graph, p) for p in paths)


def test_grid_compose_is_associative(twisted):
    e = sk.grid_paths(twisted, (1, 0)) + sk.grid_paths(twisted, (0, 1))
    for a in e:
        for b in e:
            for c in e:
                left = sk.grid_compose(twisted, sk.grid_compose(twisted, a, b), c)
                right = sk.grid_compose(twisted, a, sk.grid_compose(twisted, b, c))
                assert left == right
                assert sk.is_grid_path(twisted, left)


def test_grid_paths_on_k3_terminal():
    g = sk.terminal(3)
    (x,) = sk.grid_paths(g, (1, 1, 1))
    assert sk.is_grid_path(g, x)
    assert sk.grid_segment(x, (0, 1, 0), (1, 1, 1)).degree == (1, 0, 1)
