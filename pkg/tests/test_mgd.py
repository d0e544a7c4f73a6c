import pytest

from surfinv.mgd import (
    AGAINST_BARS,
    ALONG_BARS,
    Crossing,
    MarkedGraphDiagram,
    MarkedVertex,
    ParseError,
    ValidationError,
    components,
    component_semiarcs,
    faces,
    genus_profile,
    parse_mgd,
    render_mgd,
    smooth,
    smoothed_circles,
)

# the standard unknotted-torus diagram: two circles crossing at two
# marked vertices, bars arranged so both smoothings are one circle
LENS = "mgd v1\nV 4 1 3 2\nV 3 1 4 2\n"

# positive self-kink on a circle (loop joins under-out to over-in)
KINK_POS = "mgd v1\nX+ 1 2 2 1\n"


def test_parse_free_loop():
    d = parse_mgd("mgd v1\nO 1\n")
    assert d.free_loops == (1,) and not d.nodes
    assert components(d) == 1


def test_parse_lens():
    d = parse_mgd(LENS)
    assert len(d.vertices) == 2
    assert components(d) == 1
    assert sorted(d.endpoints) == [1, 2, 3, 4]


def test_parse_rejects_bad_degree():
    with pytest.raises(ValidationError):
        parse_mgd("mgd v1\nX+ 3 3 3 1\n")
    with pytest.raises(ValidationError):
        parse_mgd("mgd v1\nX+ 1 2 3 4\n")


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_mgd("")
    with pytest.raises(ParseError):
        parse_mgd("mgd v2\nO 1\n")
    with pytest.raises(ParseError):
        parse_mgd("mgd v1\nX+ 1 2 3\n")
    with pytest.raises(ParseError):
        parse_mgd("mgd v1\nQ 1 2 3 4\n")


def test_roundtrip():
    for text in (LENS, KINK_POS, "mgd v1\nO 1\nO 2\n"):
        d = parse_mgd(text)
        assert parse_mgd(render_mgd(d)) == d


def test_kink_is_planar_and_valid():
    d = parse_mgd(KINK_POS)
    assert len(d.crossings) == 1
    assert components(d) == 1
    assert len(faces(d)) == 3  # 1 - 2 + 3 == 2


def test_lens_smoothings_are_single_circles():
    d = parse_mgd(LENS)
    for direction in (ALONG_BARS, AGAINST_BARS):
        s = smooth(d, direction)
        assert not s.nodes and len(s.free_loops) == 1
        assert len(smoothed_circles(d, direction)) == 1


def test_smooth_no_vertices_is_identity():
    d = parse_mgd(KINK_POS)
    assert smooth(d, ALONG_BARS) == d


def test_lens_genus():
    d = parse_mgd(LENS)
    assert genus_profile(d) == [1]


def test_sphere_loop_genus():
    d = parse_mgd("mgd v1\nO 1\n")
    assert genus_profile(d) == [0]


def test_component_semiarcs_merge_at_vertices():
    d = parse_mgd(LENS)
    assert component_semiarcs(d) == [{1, 2, 3, 4}]


def test_orientation_inference_rejects_bad_vertex_loop():
    # loop occupying opposite slots of a vertex cannot alternate
    with pytest.raises(ValidationError):
        MarkedGraphDiagram((MarkedVertex((1, 2, 1, 2)),))


def test_vertex_loop_dumbbell_is_valid():
    # two vertices, each carrying a loop on adjacent slots, joined by two arcs
    d = parse_mgd("mgd v1\nV 1 1 2 3\nV 2 3 4 4\n")
    assert components(d) == 1


def test_nonorientable_crossing_pair_rejected():
    # both endpoints of semiarc 1 are in-slots
    with pytest.raises(ValidationError):
        MarkedGraphDiagram(
            (Crossing(1, (1, 2, 3, 4)), Crossing(1, (1, 4, 2, 3)))
        )
