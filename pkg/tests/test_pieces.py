import pytest

from mwthard.pieces import (MalformedFile, designer_pieces, designer_w, format_pieces, format_w, load_pieces,
                            load_w, validate_piece)

BAD = {
    "outside": "terminal small 0 0 0 L\n",
    "size": "piece a\nterminal huge 0 0 0 L\n",
    "state": "piece a\nterminal small 0 0 0 Q\n",
    "digits": "piece a\npart p\n0.12345 0\n",
    "stray": "piece a\n0 0\n",
    "record": "piece a\npart p\n1 2 3\n",
    "dup": "piece a\npart p\n0 0\nterminal small 0 0 0 L\nterminal small 1 0 0 L\npiece a\n",
}


@pytest.mark.parametrize("name", sorted(BAD))
def test_load_errors(name):
    with pytest.raises(MalformedFile):
        load_pieces(BAD[name])


def test_error_has_line_number():
    with pytest.raises(MalformedFile) as exc:
        load_pieces("piece a\n\npart p\n0 0\n1 x\n")
    assert "5" in str(exc.value)


def test_round_trip():
    cat = designer_pieces()
    text = format_pieces(cat)
    again = load_pieces(text)
    assert format_pieces(again) == text
    assert [p.cycle() for p in again] == [p.cycle() for p in cat]
    w = designer_w()
    assert format_w(load_w(format_w(w))) == format_w(w)


def test_designer_pieces_validate():
    w = designer_w()
    assert w.validate().ok
    for p in designer_pieces():
        rep = validate_piece(p, w)
        assert rep.ok, (p.name, rep.failures)
        assert len(p.patterns()) == 2 ** len(p.terminals)


def test_validation_catches_moved_terminal():
    text = format_pieces(designer_pieces())
    first = next(ln for ln in text.splitlines() if ln.startswith("terminal"))
    tok = first.split()
    tok[2] = str(float(tok[2]) + 1)
    cat = load_pieces(text.replace(first, " ".join(tok), 1))
    assert not validate_piece(next(iter(cat))).ok
