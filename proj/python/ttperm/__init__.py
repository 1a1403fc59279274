import json

from . import _core
from ._core import BoundExceeded, TheoryCheckFailure, group_order, subgroups

__all__ = [
    "BoundExceeded",
    "TheoryCheckFailure",
    "group_order",
    "subgroups",
    "koszul",
    "twisted",
    "hom",
    "invert",
    "spectrum",
    "verify",
]


def koszul(group, subgroup="1", ring="Z"):
    return json.loads(_core.koszul(group, subgroup, ring))


def twisted(group, ring="Z", max_twist=4, shift_min=None, shift_max=None, jobs=1):
    return json.loads(_core.twisted(group, ring, max_twist, shift_min, shift_max, jobs))


def hom(group, ring, twist, shift):
    """Hom(1, Y(twist)[shift]) as {"rank": r, "torsion": [...]}."""
    return json.loads(_core.hom(group, ring, list(twist), shift))


def invert(group, subgroup, ring="Z"):
    return json.loads(_core.invert(group, subgroup, ring))


def spectrum(group, format="json"):
    out = _core.spectrum(group, format)
    return out if format == "dot" else json.loads(out)


def verify(certificate):
    """Returns (ok, failures) for a certificate dict or JSON string."""
    text = certificate if isinstance(certificate, str) else json.dumps(certificate)
    return _core.verify(text)
