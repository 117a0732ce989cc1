import pytest

from mwthard.embedding import (DOWN, UP, InvalidEmbedding, Leg, RectilinearEmbedding, build_embedding,
                               format_embedding, layout, parse_embedding_lines, validate_embedding)


def test_layout_valid():
    clauses = [("a", "b", "c"), ("a", "c", "d"), ("b", "c", "d")]
    e = layout(["a", "b", "c", "d"], clauses)
    assert validate_embedding(e, clauses).ok
    assert parse_embedding_lines(format_embedding(e)) == e


def test_interleaving_same_side_rejected():
    with pytest.raises(InvalidEmbedding):
        build_embedding(["a", "b", "c", "d"], [("a", "c"), ("b", "d")], [UP, UP])
    e = build_embedding(["a", "b", "c", "d"], [("a", "c"), ("b", "d")], [UP, DOWN])
    assert validate_embedding(e).ok


def test_shared_grid_vertex_invalid():
    e = RectilinearEmbedding({"a": (0, 0, 0), "b": (2, 2, 0)}, [(1, 1), (1, 1)],
                             [Leg(0, "a", [(0, 0), (0, 1), (1, 1)]), Leg(1, "b", [(2, 0), (2, 1), (1, 1)])])
    assert not validate_embedding(e).ok


def test_diagonal_leg_invalid():
    e = RectilinearEmbedding({"a": (0, 0, 0)}, [(1, 1)], [Leg(0, "a", [(0, 0), (1, 1)])])
    assert not validate_embedding(e).ok
