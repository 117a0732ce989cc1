from mwthard.geometry import (Orientation, Point, Polygon, TriangulationStatus, check_triangulation,
                              format_polygon, orientation, parse_polygon, segments_intersect,
                              validate_simple_polygon)

SQUARE = Polygon(((0, 0), (1, 0), (1, 1), (0, 1)))


def test_orientation():
    assert orientation((0, 0), (1, 0), (0, 1)) == Orientation.CCW
    assert orientation((0, 0), (0, 1), (1, 0)) == Orientation.CW
    assert orientation((0, 0), (1, 1), (2, 2)) == Orientation.COLLINEAR


def test_segments():
    assert segments_intersect((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_intersect((0, 0), (1, 0), (0, 1), (1, 1))


def test_simple_polygon_checks():
    assert validate_simple_polygon(SQUARE).ok
    assert not validate_simple_polygon(Polygon(((0, 0), (1, 1), (1, 0), (0, 1)))).ok
    assert not validate_simple_polygon(Polygon(tuple(reversed(SQUARE.vertices)))).ok
    rep = validate_simple_polygon(Polygon(((0, 0), (1, 0), (2, 0), (1, 1))))
    assert rep.ok and rep.notes


def test_duplicate_vertex():
    rep = validate_simple_polygon(Polygon(((0, 0), (2, 0), (2, 2), (0, 0), (0, 2))))
    assert not rep.ok


def test_check_triangulation():
    assert check_triangulation(SQUARE, [(0, 1, 2), (0, 2, 3)]) == TriangulationStatus.VALID
    assert check_triangulation(SQUARE, [(0, 1, 2)]) == TriangulationStatus.INVALID


def test_polygon_file_round_trip():
    poly = parse_polygon("# square\n0 0\n1.5 0\n1.5 1.25\n0 1.25\n")
    assert poly.scale == 2
    assert poly.vertices[2] == Point(150, 125)
    assert parse_polygon(format_polygon(poly)) == poly


def test_point_ops():
    p = Point(1, 2)
    assert p + (1, 1) == Point(2, 3)
    assert p.rotated(1) == Point(-2, 1)
    assert p.rotated(4) == p
