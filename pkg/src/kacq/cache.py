"""On-disk cache of partition tables, stored as canonical JSON."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

import numpy as np

from .algebras import AffineAlgebra
from .kostka import PartitionTable, t_kostant

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


def _key(g: AffineAlgebra, max_d2: int, box, two_variable: bool) -> dict:
    return {"algebra": g.label, "maxD2": int(max_d2), "box": [int(b) for b in box], "twoVariable": bool(two_variable)}


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class TableCache:
    """Builds tables through :func:`kacq.kostka.t_kostant` and keeps them under ``directory``."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.hits = 0
        self.misses = 0

    def path_for(self, key: dict) -> Path:
        digest = hashlib.sha256(_canonical(key).encode()).hexdigest()[:32]
        return self.directory / f"table-{digest}.json"

    def table(self, g: AffineAlgebra, max_d2: int, box, two_variable: bool = False) -> PartitionTable:
        key = _key(g, max_d2, box, two_variable)
        path = self.path_for(key)
        if path.exists():
            try:
                table = self._load(g, key, path)
                self.hits += 1
                return table
            except (ValueError, KeyError, TypeError, OSError) as exc:
                log.warning("discarding corrupt cache entry %s (%s); recomputing", path, exc)
        self.misses += 1
        table = t_kostant(g, max_d2, box, two_variable)
        self._store(key, table, path)
        return table

    def _store(self, key: dict, table: PartitionTable, path: Path) -> None:
        cells = []
        for idx in np.ndindex(*table.dims):
            block = table._arr[idx]
            nz = np.argwhere(block != 0)
            if len(nz):
                cells.append([list(idx), [[int(a), int(b), str(int(block[a, b]))] for a, b in nz]])
        doc = {"version": FORMAT_VERSION, "key": key, "maxD2": table.max_d2, "dims": list(table.dims),
               "shape": list(table._arr.shape), "cells": cells}
        self.directory.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(_canonical(doc), encoding="utf-8")
        tmp.replace(path)

    def _load(self, g: AffineAlgebra, key: dict, path: Path) -> PartitionTable:
        doc = json.loads(path.read_text(encoding="utf-8"))
        if doc.get("version") != FORMAT_VERSION or doc.get("key") != key:
            raise ValueError("cache entry does not match its key")
        shape = tuple(doc["shape"])
        arr = np.zeros(shape, dtype=object)
        arr[...] = 0
        for idx, entries in doc["cells"]:
            for a, b, c in entries:
                arr[(*idx, a, b)] = int(c)
        return PartitionTable(g, int(doc["maxD2"]), tuple(doc["dims"]), key["twoVariable"], arr)
