"""Named corpus of small groups, stored as generator files plus a manifest.

Each entry is a group-spec text file under ``data/groups`` and a manifest
record with the expected order and structural tags.  Loading re-derives the
order from the generators and refuses a mismatch, so the data files cannot
drift from the manifest silently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import GroupError, UnknownName
from .group import DEFAULT_MATERIALIZATION_CAP, FiniteGroup, parse_group_spec

__all__ = ["CatalogEntry", "entry", "load", "list_entries", "names"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    file: str
    expected_order: int
    tags: dict

    def __post_init__(self) -> None:
        if self.expected_order < 1:
            raise GroupError(f"entry {self.name}: expected order must be positive")


@lru_cache(maxsize=1)
def _manifest() -> dict[str, CatalogEntry]:
    text = resources.files("genprob.data").joinpath("manifest.json").read_text()
    entries = [CatalogEntry(**record) for record in json.loads(text)]
    return {e.name: e for e in entries}


def names() -> list[str]:
    return list(_manifest())


def list_entries() -> list[CatalogEntry]:
    return list(_manifest().values())


def entry(name: str) -> CatalogEntry:
    try:
        return _manifest()[name]
    except KeyError:
        raise UnknownName(
            f"unknown catalog group {name!r}; see list_entries()"
        ) from None


def load(name: str, cap: int = DEFAULT_MATERIALIZATION_CAP) -> FiniteGroup:
    e = entry(name)
    text = resources.files("genprob.data").joinpath(e.file).read_text()
    group = parse_group_spec(text, cap=cap, name=e.name)
    if group.order != e.expected_order:
        raise GroupError(
            f"catalog entry {name!r}: generators yield order {group.order}, "
            f"manifest says {e.expected_order}"
        )
    return group
