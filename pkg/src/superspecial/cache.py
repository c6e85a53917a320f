"""Flat-file cache of Sigma_p, one prime per line: ``p,psi,p mod 8,sigma``
with sigma the semicolon-joined sorted members (empty when psi = 0).
"""

from __future__ import annotations

import os
import warnings
from pathlib import Path
from typing import Iterable, Optional

from sympy import isprime

from .genus2 import sigma_set


class CacheError(ValueError):
    pass


def format_line(p: int, sigma: Iterable[int]) -> str:
    sig = sorted(int(s) for s in sigma)
    return f"{p},{len(sig)},{p % 8},{';'.join(map(str, sig))}"


def parse_line(line: str) -> tuple[int, tuple]:
    """(p, Sigma_p) from one cache line, validated."""
    parts = line.strip().split(",")
    if len(parts) != 4:
        raise CacheError(f"expected 4 fields: {line!r}")
    try:
        p, psi, residue = (int(x) for x in parts[:3])
        sigma = tuple(int(x) for x in parts[3].split(";")) if parts[3] else ()
    except ValueError as exc:
        raise CacheError(f"non-integer field: {line!r}") from exc
    if p < 5 or not isprime(p):
        raise CacheError(f"bad prime {p}")
    if residue != p % 8:
        raise CacheError(f"residue {residue} != {p} mod 8")
    if psi != len(sigma):
        raise CacheError(f"psi {psi} != |Sigma| {len(sigma)} at p={p}")
    members = set(sigma)
    if len(members) != len(sigma) or list(sigma) != sorted(sigma):
        raise CacheError(f"Sigma not sorted and distinct at p={p}")
    if any(not 2 <= s <= p - 2 for s in sigma):
        raise CacheError(f"Sigma entry out of range at p={p}")
    if any(p - s not in members for s in sigma):
        raise CacheError(f"Sigma not closed under negation at p={p}")
    return p, sigma


class SigmaCache:
    """Read-through cache of Sigma_p.

    Missing primes are computed with ``method`` and marked dirty; corrupt lines
    are dropped with a warning and recomputed on demand.
    """

    def __init__(self, path: Optional[os.PathLike] = None, method: str = "hasse"):
        self.path = Path(path) if path is not None else None
        self.method = method
        self.entries: dict[int, tuple] = {}
        self.dirty = False
        if self.path is not None and self.path.exists():
            self.load()

    def load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    p, sigma = parse_line(line)
                except CacheError as exc:
                    warnings.warn(f"{self.path}:{lineno}: {exc}; will recompute", stacklevel=3)
                    self.dirty = True
                    continue
                self.entries[p] = sigma

    def __call__(self, p: int) -> tuple:
        if p not in self.entries:
            self.entries[p] = sigma_set(p, self.method)
            self.dirty = True
        return self.entries[p]

    def update(self, table: dict) -> None:
        for p, sigma in table.items():
            if self.entries.get(p) != tuple(sigma):
                self.entries[p] = tuple(sigma)
                self.dirty = True

    def save(self) -> None:
        if self.path is None or not self.dirty:
            return
        tmp = self.path.with_name(self.path.name + ".tmp")
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            for p in sorted(self.entries):
                fh.write(format_line(p, self.entries[p]) + "\n")
        os.replace(tmp, self.path)
        self.dirty = False
