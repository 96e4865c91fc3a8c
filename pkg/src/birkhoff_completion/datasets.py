"""Small bundled lattices and contexts."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any

from .io import _poset_from_obj, read_cxt
from .order import as_lattice

__all__ = ["Dataset", "DATASETS", "load", "dataset_text", "dataset_filename"]


@dataclass(frozen=True)
class Dataset:
    name: str
    payload: Any
    note: str


DATASETS = {
    "m3": ("m3.json", "the diamond M3: three atoms between bottom and top"),
    "n5": ("n5.json", "the pentagon N5: 0 < a < c < 1 and 0 < b < 1"),
    "b3": ("b3.json", "Boolean lattice on three atoms"),
    "fig4": ("fig4.json", "7 elements: atoms j1, j2, j3; m1 = j1 ∨ j2, m2 = j2 ∨ j3"),
    "fig4dual": ("fig4dual.json", "order dual of fig4 (same labels, reversed covers)"),
    "fig6": ("fig6.json", "14-element lattice and a 16-element distributive order-extension of it"),
    "uk": ("uk.cxt", "administrative geography of the British Isles: 8 countries × 6 attributes"),
}


def dataset_filename(name: str) -> str:
    return DATASETS[name][0]


def dataset_text(name: str) -> str:
    return resources.files(__package__).joinpath("data").joinpath(DATASETS[name][0]).read_text(encoding="utf-8")


def load(name: str) -> Dataset:
    """Load a bundled dataset by name; ``fig6`` yields ``{"lattice": L, "extension": E}``."""
    if name not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; choose from {', '.join(sorted(DATASETS))}")
    filename, note = DATASETS[name]
    text = dataset_text(name)
    if filename.endswith(".cxt"):
        payload = read_cxt(text)
    else:
        obj = json.loads(text)
        if "elements" in obj:
            payload = as_lattice(_poset_from_obj(obj))
        else:
            payload = {k: as_lattice(_poset_from_obj(v)) for k, v in obj.items()}
    return Dataset(name, payload, note)
