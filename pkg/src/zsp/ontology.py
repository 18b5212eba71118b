"""PLOVER label algebra.

The 15 root codes, their quad classes, the binary cooperation/conflict
split, the modality transition table (how a root's label shifts when the
event is future or negated), legacy-name aliases, and the CAMEO 2-digit
row mapping used to fold 4-digit action codes into PLOVER.

Everything here is an immutable value or a pure function.
"""

from __future__ import annotations

from enum import Enum, IntEnum

from .errors import MalformedCode, UnknownLabel, UnknownRoot


class Rootcode(Enum):
    """The 15 canonical PLOVER action categories."""

    AGREE = "AGREE"
    CONSULT = "CONSULT"
    SUPPORT = "SUPPORT"
    COOPERATE = "COOPERATE"
    AID = "AID"
    YIELD = "YIELD"
    ACCUSE = "ACCUSE"
    REQUEST = "REQUEST"
    REJECT = "REJECT"
    THREATEN = "THREATEN"
    PROTEST = "PROTEST"
    MOBILIZE = "MOBILIZE"
    SANCTION = "SANCTION"
    COERCE = "COERCE"
    ASSAULT = "ASSAULT"


class Quadcode(IntEnum):
    """Verbal/material x cooperation/conflict quadrant."""

    VERBAL_COOPERATION = 1
    MATERIAL_COOPERATION = 2
    VERBAL_CONFLICT = 3
    MATERIAL_CONFLICT = 4

    @property
    def display(self) -> str:
        return _QUAD_DISPLAY[self]


_QUAD_DISPLAY = {
    Quadcode.VERBAL_COOPERATION: "V-Coop.",
    Quadcode.MATERIAL_COOPERATION: "M-Coop.",
    Quadcode.VERBAL_CONFLICT: "V-Conf.",
    Quadcode.MATERIAL_CONFLICT: "M-Conf.",
}


class Modality(Enum):
    """Event status dimension: past, future, and their negations."""

    PAST = "P"
    FUTURE = "F"
    NEGATED_PAST = "NP"
    NEGATED_FUTURE = "NF"


class BinaryClass(Enum):
    COOPERATION = "Cooperation"
    CONFLICT = "Conflict"


# Base quad of each root (the quad of its historical, affirmed form).
_BASE_QUAD: dict[Rootcode, Quadcode] = {
    Rootcode.AGREE: Quadcode.VERBAL_COOPERATION,
    Rootcode.CONSULT: Quadcode.VERBAL_COOPERATION,
    Rootcode.SUPPORT: Quadcode.VERBAL_COOPERATION,
    Rootcode.COOPERATE: Quadcode.MATERIAL_COOPERATION,
    Rootcode.AID: Quadcode.MATERIAL_COOPERATION,
    Rootcode.YIELD: Quadcode.MATERIAL_COOPERATION,
    Rootcode.ACCUSE: Quadcode.VERBAL_CONFLICT,
    Rootcode.REQUEST: Quadcode.VERBAL_CONFLICT,
    Rootcode.REJECT: Quadcode.VERBAL_CONFLICT,
    Rootcode.THREATEN: Quadcode.VERBAL_CONFLICT,
    Rootcode.PROTEST: Quadcode.MATERIAL_CONFLICT,
    Rootcode.MOBILIZE: Quadcode.MATERIAL_CONFLICT,
    Rootcode.SANCTION: Quadcode.MATERIAL_CONFLICT,
    Rootcode.COERCE: Quadcode.MATERIAL_CONFLICT,
    Rootcode.ASSAULT: Quadcode.MATERIAL_CONFLICT,
}

# Modality transitions by base-quad group. None means "the root keeps its
# own name" (quad-3 roots stay themselves in the future). Verbal groups
# (quads 1 and 3) stay verbal under every modality; material groups shift
# to the listed verbal/material counterparts.
_TRANSITIONS: dict[Quadcode, dict[Modality, Rootcode | None]] = {
    Quadcode.VERBAL_COOPERATION: {
        Modality.FUTURE: Rootcode.AGREE,
        Modality.NEGATED_PAST: Rootcode.REJECT,
        Modality.NEGATED_FUTURE: Rootcode.REJECT,
    },
    Quadcode.MATERIAL_COOPERATION: {
        Modality.FUTURE: Rootcode.AGREE,
        Modality.NEGATED_PAST: Rootcode.SANCTION,
        Modality.NEGATED_FUTURE: Rootcode.REJECT,
    },
    Quadcode.VERBAL_CONFLICT: {
        Modality.FUTURE: None,
        Modality.NEGATED_PAST: Rootcode.AGREE,
        Modality.NEGATED_FUTURE: Rootcode.AGREE,
    },
    Quadcode.MATERIAL_CONFLICT: {
        Modality.FUTURE: Rootcode.THREATEN,
        Modality.NEGATED_PAST: Rootcode.YIELD,
        Modality.NEGATED_FUTURE: Rootcode.AGREE,
    },
}

# Legacy names kept by older label tables, resolved to the 15-class schema.
ALIASES: dict[str, Rootcode] = {
    "DEMAND": Rootcode.REQUEST,
    "INVESTIGATE": Rootcode.ACCUSE,
    "FIGHT": Rootcode.ASSAULT,
}

# Leading CAMEO pair -> root. Rows 01 and 02 were dropped from PLOVER.
_CAMEO_ROWS: dict[str, Rootcode | None] = {
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


def root_base_quad(root: Rootcode) -> Quadcode:
    """Quad class of a root's historical, affirmed form."""
    return _BASE_QUAD[root]


def modality_map(root: Rootcode, mod: Modality) -> tuple[Rootcode, Quadcode]:
    """Label a root takes when its event carries the given modality.

    Past is the identity. The other three modalities re-label the event by
    the root's base-quad group; the returned quad is always the base quad
    of the returned root.
    """
    if mod is Modality.PAST:
        return root, _BASE_QUAD[root]
    target = _TRANSITIONS[_BASE_QUAD[root]][mod]
    if target is None:
        target = root
    return target, _BASE_QUAD[target]


def quad_to_binary(quad: Quadcode) -> BinaryClass:
    """Project a quad class onto the cooperation/conflict split."""
    if quad in (Quadcode.VERBAL_COOPERATION, Quadcode.MATERIAL_COOPERATION):
        return BinaryClass.COOPERATION
    return BinaryClass.CONFLICT


def cameo_to_plover(code: str) -> tuple[Rootcode, Quadcode] | None:
    """Map a 2-4 digit CAMEO action code to its PLOVER label.

    Only the leading pair decides the row; sub-codes inherit their root's
    mapping. Returns None for the two dropped rows (01, 02).
    """
    code = code.strip()
    if not code.isdigit() or not 2 <= len(code) <= 4:
        raise MalformedCode(f"expected 2-4 decimal digits, got {code!r}")
    pair = code[:2]
    if pair not in _CAMEO_ROWS:
        raise UnknownRoot(f"no CAMEO row {pair!r} (code {code!r})")
    root = _CAMEO_ROWS[pair]
    if root is None:
        return None
    return root, _BASE_QUAD[root]


def normalize_alias(name: str) -> Rootcode:
    """Resolve a (possibly legacy, case-insensitive) label name to its root."""
    key = name.strip().upper()
    try:
        return Rootcode(key)
    except ValueError:
        pass
    if key in ALIASES:
        return ALIASES[key]
    raise UnknownLabel(f"unknown root label {name!r}")


def parse_quadcode(text: str) -> Quadcode:
    """Parse a quad cell: a digit 1-4, 'V-Coop.', or '1. V-Coop.' style."""
    cell = text.strip().rstrip(".")
    if "." in cell:  # "1. V-Coop" style: the leading digit decides
        head = cell.split(".", 1)[0].strip()
        if head.isdigit():
            cell = head
    if cell.isdigit():
        try:
            return Quadcode(int(cell))
        except ValueError:
            raise UnknownLabel(f"quad class out of range: {text!r}") from None
    lowered = cell.lower()
    for quad, display in _QUAD_DISPLAY.items():
        if lowered == display.rstrip(".").lower():
            return quad
    raise UnknownLabel(f"unknown quad class {text!r}")


def parse_binary(text: str) -> BinaryClass:
    key = text.strip().capitalize()
    try:
        return BinaryClass(key)
    except ValueError:
        raise UnknownLabel(f"unknown binary class {text!r}") from None
