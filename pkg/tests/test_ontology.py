import pytest

from zsp.errors import MalformedCode, UnknownLabel, UnknownRoot
from zsp.ontology import (
    BinaryClass,
    Modality,
    Quadcode,
    Rootcode,
    cameo_to_plover,
    modality_map,
    normalize_alias,
    parse_binary,
    parse_quadcode,
    quad_to_binary,
    root_base_quad,
)

# Transcribed base quads, one row per root.
BASE_QUADS = {
    Rootcode.AGREE: 1,
    Rootcode.CONSULT: 1,
    Rootcode.SUPPORT: 1,
    Rootcode.COOPERATE: 2,
    Rootcode.AID: 2,
    Rootcode.YIELD: 2,
    Rootcode.ACCUSE: 3,
    Rootcode.REQUEST: 3,
    Rootcode.REJECT: 3,
    Rootcode.THREATEN: 3,
    Rootcode.PROTEST: 4,
    Rootcode.MOBILIZE: 4,
    Rootcode.SANCTION: 4,
    Rootcode.COERCE: 4,
    Rootcode.ASSAULT: 4,
}


def test_fifteen_canonical_roots():
    assert len(Rootcode) == 15
    assert len(BASE_QUADS) == 15


def test_base_quads_exhaustive():
    for root, quad in BASE_QUADS.items():
        assert root_base_quad(root) == Quadcode(quad)


def test_base_quad_examples():
    assert root_base_quad(Rootcode.AGREE) == Quadcode(1)
    assert root_base_quad(Rootcode.ASSAULT) == Quadcode(4)
    assert root_base_quad(Rootcode.CONSULT) == Quadcode(1)


def test_modality_examples():
    assert modality_map(Rootcode.PROTEST, Modality.FUTURE) == (Rootcode.THREATEN, Quadcode(3))
    assert modality_map(Rootcode.AID, Modality.NEGATED_PAST) == (Rootcode.SANCTION, Quadcode(4))
    assert modality_map(Rootcode.ACCUSE, Modality.NEGATED_FUTURE) == (Rootcode.AGREE, Quadcode(1))
    assert modality_map(Rootcode.SUPPORT, Modality.PAST) == (Rootcode.SUPPORT, Quadcode(1))


def test_modality_map_total_and_consistent():
    for root in Rootcode:
        for mod in Modality:
            out_root, out_quad = modality_map(root, mod)
            assert isinstance(out_root, Rootcode)
            assert out_quad == root_base_quad(out_root)


def test_past_is_identity():
    for root in Rootcode:
        assert modality_map(root, Modality.PAST) == (root, root_base_quad(root))


def test_verbal_closure():
    verbal = {Quadcode(1), Quadcode(3)}
    for root in Rootcode:
        if root_base_quad(root) in verbal:
            for mod in Modality:
                assert modality_map(root, mod)[1] in verbal


def test_negated_verbal_conflict_goes_to_agree():
    for root in Rootcode:
        if root_base_quad(root) == Quadcode(3):
            for mod in (Modality.NEGATED_PAST, Modality.NEGATED_FUTURE):
                assert modality_map(root, mod) == (Rootcode.AGREE, Quadcode(1))


def test_quad_to_binary():
    assert quad_to_binary(Quadcode(1)) == BinaryClass.COOPERATION
    assert quad_to_binary(Quadcode(2)) == BinaryClass.COOPERATION
    assert quad_to_binary(Quadcode(3)) == BinaryClass.CONFLICT
    assert quad_to_binary(Quadcode(4)) == BinaryClass.CONFLICT


def test_binary_composition_total():
    for root in Rootcode:
        for mod in Modality:
            _, quad = modality_map(root, mod)
            assert quad_to_binary(quad) in BinaryClass


# Transcribed 20-row CAMEO mapping; None marks dropped rows.
CAMEO_ROWS = {
    "01": None,
    "02": None,
    "03": Rootcode.AGREE,
    "04": Rootcode.CONSULT,
    "05": Rootcode.SUPPORT,
    "06": Rootcode.COOPERATE,
    "07": Rootcode.AID,
    "08": Rootcode.YIELD,
    "09": Rootcode.ACCUSE,
    "10": Rootcode.REQUEST,
    "11": Rootcode.ACCUSE,
    "12": Rootcode.REJECT,
    "13": Rootcode.THREATEN,
    "14": Rootcode.PROTEST,
    "15": Rootcode.MOBILIZE,
    "16": Rootcode.SANCTION,
    "17": Rootcode.COERCE,
    "18": Rootcode.ASSAULT,
    "19": Rootcode.ASSAULT,
    "20": Rootcode.ASSAULT,
}


def test_cameo_all_leading_pairs():
    for pair, root in CAMEO_ROWS.items():
        result = cameo_to_plover(pair)
        if root is None:
            assert result is None
        else:
            assert result == (root, root_base_quad(root))


def test_cameo_subcodes_inherit_root():
    assert cameo_to_plover("1222") == (Rootcode.REJECT, Quadcode(3))
    assert cameo_to_plover("031") == (Rootcode.AGREE, Quadcode(1))
    assert cameo_to_plover("19") == (Rootcode.ASSAULT, Quadcode(4))
    assert cameo_to_plover("0211") is None


@pytest.mark.parametrize("code", ["1", "12345", "", "12a4", "three", "1.2"])
def test_cameo_malformed(code):
    with pytest.raises(MalformedCode):
        cameo_to_plover(code)


@pytest.mark.parametrize("code", ["00", "21", "9999"])
def test_cameo_unknown_root(code):
    with pytest.raises(UnknownRoot):
        cameo_to_plover(code)


def test_aliases():
    assert normalize_alias("FIGHT") == Rootcode.ASSAULT
    assert normalize_alias("demand") == Rootcode.REQUEST
    assert normalize_alias(" Investigate ") == Rootcode.ACCUSE
    assert normalize_alias("AGREE") == Rootcode.AGREE
    assert normalize_alias("protest") == Rootcode.PROTEST


def test_unknown_alias():
    with pytest.raises(UnknownLabel):
        normalize_alias("BEFRIEND")


@pytest.mark.parametrize(
    "text,expected",
    [
        ("3", 3),
        ("V-Conf.", 3),
        ("v-conf", 3),
        ("3. V-Conf.", 3),
        ("M-Coop.", 2),
        ("1. V-Coop.", 1),
    ],
)
def test_parse_quadcode(text, expected):
    assert parse_quadcode(text) == Quadcode(expected)


def test_parse_quadcode_rejects_garbage():
    for bad in ("5", "0", "quad", ""):
        with pytest.raises(UnknownLabel):
            parse_quadcode(bad)


def test_parse_binary():
    assert parse_binary("conflict") == BinaryClass.CONFLICT
    assert parse_binary("Cooperation") == BinaryClass.COOPERATION
    with pytest.raises(UnknownLabel):
        parse_binary("neutral")
