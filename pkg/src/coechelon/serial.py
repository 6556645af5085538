"""JSON-native encodings shared by verdicts, sequences, tensors and witnesses.

Indices become ints or nested lists, rationals become "p/q" strings and
extended scalars use the text form of :class:`XPos`.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .scalars import GaussianRational, XPos


def index_to_json(idx):
    if isinstance(idx, tuple):
        return [index_to_json(x) for x in idx]
    return idx


def index_from_json(obj):
    if isinstance(obj, list):
        return tuple(index_from_json(x) for x in obj)
    return obj


def frac_to_json(q) -> str:
    return str(Fraction(q))


def frac_from_json(text) -> Fraction:
    return Fraction(text)


def xpos_to_json(x: XPos) -> str:
    return str(x)


def xpos_from_json(text: str) -> XPos:
    return XPos.parse(text)


def gauss_to_json(z: GaussianRational):
    return [str(z.re), str(z.im)]


def gauss_from_json(pair) -> GaussianRational:
    return GaussianRational(Fraction(pair[0]), Fraction(pair[1]))


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline-free."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
