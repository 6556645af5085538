"""Built-in family files shipped with the package.

Each ``families/NAME.kf`` declares the example of the same label; its last
declaration is the family the name refers to.
"""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import List

from . import weights as W


def _root():
    return resources.files(__package__) / "families"


@lru_cache(maxsize=None)
def builtin_names() -> List[str]:
    return sorted(p.name[:-3] for p in _root().iterdir() if p.name.endswith(".kf"))


def builtin_source(name: str) -> str:
    if name not in builtin_names():
        raise KeyError(f"no built-in family {name!r}; available: {', '.join(builtin_names())}")
    return (_root() / f"{name}.kf").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _load(name: str, levels: int, horizon: int) -> W.WeightFamily:
    from .dsl import parse_family
    return parse_family(builtin_source(name), name, levels, horizon)


def load_builtin(name: str, levels: int = W.DEFAULT_LEVELS,
                 horizon: int = W.DEFAULT_HORIZON) -> W.WeightFamily:
    return _load(name, levels, horizon)
