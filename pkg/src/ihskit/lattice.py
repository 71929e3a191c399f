"""Integral quadratic lattices: Gram data, classical invariants, catalog.

A lattice here is a free Z-module of finite rank with an integer Gram matrix.
Signatures are computed by exact rational congruence diagonalization, the
discriminant group by Smith normal form, so every invariant in this module is
exact.
"""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from . import exactmat
from .errors import LatticeError

Vector = tuple[int, ...]
Gram = tuple[tuple[int, ...], ...]

_CATALOG_ENV = "IHSKIT_CATALOG"
_CATALOG_DEFAULT = Path(__file__).parent / "data" / "catalog.json"


def _freeze_gram(gram: Sequence[Sequence[int]]) -> Gram:
    return tuple(tuple(int(x) for x in row) for row in gram)


@dataclass(frozen=True)
class Lattice:
    """A nondegenerate integral lattice given by its Gram matrix."""

    label: str
    gram: Gram

    def __post_init__(self) -> None:
        gram = _freeze_gram(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if n == 0:
            raise LatticeError("lattice rank must be at least 1")
        if any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError("Gram matrix must be symmetric")
        if exactmat.det_int(gram) == 0:
            raise LatticeError("Gram matrix must be nondegenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return exactmat.det_int(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def _check_vector(self, v: Sequence) -> None:
        if len(v) != self.rank:
            raise LatticeError(
                f"vector length {len(v)} does not match rank {self.rank}")

    def inner(self, x: Sequence, y: Sequence):
        """Bilinear pairing (x, y) in this lattice's Gram form."""
        self._check_vector(x)
        self._check_vector(y)
        return sum(x[i] * self.gram[i][j] * y[j]
                   for i in range(self.rank) for j in range(self.rank))

    def norm(self, x: Sequence):
        """Self-intersection (x, x)."""
        return self.inner(x, x)

    def __repr__(self) -> str:
        return f"Lattice({self.label!r}, rank={self.rank})"


def direct_sum(*lattices: Lattice, label: str | None = None) -> Lattice:
    if not lattices:
        raise LatticeError("direct_sum needs at least one summand")
    total = sum(lat.rank for lat in lattices)
    gram = [[0] * total for _ in range(total)]
    offset = 0
    for lat in lattices:
        for i in range(lat.rank):
            for j in range(lat.rank):
                gram[offset + i][offset + j] = lat.gram[i][j]
        offset += lat.rank
    if label is None:
        label = "+".join(lat.label for lat in lattices)
    return Lattice(label, _freeze_gram(gram))


def rescale(lat: Lattice, k: int, label: str | None = None) -> Lattice:
    """The lattice L(k): same module, pairing multiplied by k."""
    if k == 0:
        raise LatticeError("rescale factor must be nonzero")
    if label is None:
        label = f"{lat.label}({k})"
    return Lattice(label, _freeze_gram([[k * x for x in row] for row in lat.gram]))


def signature(lat: Lattice) -> tuple[int, int]:
    """Signature (positive, negative) via exact congruence diagonalization."""
    n = lat.rank
    m = exactmat.mat_fraction(lat.gram)
    active = list(range(n))
    pos = neg = 0
    while active:
        pivot = next((i for i in active if m[i][i] != 0), None)
        if pivot is None:
            # All diagonal entries vanish; make one nonzero with x_i -> x_i + x_j.
            pair = next(((i, j) for i in active for j in active
                         if i != j and m[i][j] != 0), None)
            if pair is None:
                raise LatticeError("Gram matrix must be nondegenerate")
            i, j = pair
            for c in range(n):
                m[i][c] += m[j][c]
            for r in range(n):
                m[r][i] += m[r][j]
            pivot = i
        p = m[pivot][pivot]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for i in active:
            if m[i][pivot] != 0:
                factor = m[i][pivot] / p
                for c in range(n):
                    m[i][c] -= factor * m[pivot][c]
                for r in range(n):
                    m[r][i] -= factor * m[r][pivot]
    return pos, neg


def is_hyperbolic(lat: Lattice) -> bool:
    """True when the signature is (1, rank - 1)."""
    return signature(lat) == (1, lat.rank - 1)


def discriminant_group(lat: Lattice) -> tuple[int, ...]:
    """Elementary divisors > 1 of the discriminant group L^vee / L."""
    divisors = exactmat.invariant_factors(lat.gram)
    if len(divisors) != lat.rank:
        raise LatticeError("Gram matrix must be nondegenerate")
    return tuple(d for d in divisors if d > 1)


def is_2_elementary(lat: Lattice) -> bool:
    """True when the discriminant group is (Z/2)^l for some l >= 0."""
    return all(d == 2 for d in discriminant_group(lat))


def divisibility(lat: Lattice, v: Sequence[int]) -> int:
    """div(v) = the positive generator of the ideal (v, L) of Z."""
    lat._check_vector(v)
    pairings = [sum(lat.gram[i][j] * v[j] for j in range(lat.rank))
                for i in range(lat.rank)]
    g = 0
    for p in pairings:
        g = math.gcd(g, p)
    if g == 0:
        raise LatticeError("divisibility of the zero vector is undefined")
    return g


def is_primitive_sublattice(lat: Lattice, basis: Sequence[Sequence[int]]) -> bool:
    """True when the Z-span of ``basis`` is saturated in the ambient lattice.

    ``basis`` rows must be Z-linearly independent vectors in ambient
    coordinates; the span is primitive exactly when all invariant factors of
    the coordinate matrix are 1.
    """
    rows = [list(v) for v in basis]
    if not rows:
        raise LatticeError("sublattice basis must be non-empty")
    for v in rows:
        lat._check_vector(v)
    divisors = exactmat.invariant_factors(rows)
    if len(divisors) != len(rows):
        raise LatticeError("sublattice basis rows are linearly dependent")
    return all(d == 1 for d in divisors)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of an ambient lattice, given by basis rows in ambient coordinates."""

    ambient: Lattice
    basis: tuple[Vector, ...]
    label: str = ""

    def __post_init__(self) -> None:
        basis = tuple(tuple(int(x) for x in v) for v in self.basis)
        object.__setattr__(self, "basis", basis)
        if not basis:
            raise LatticeError("sublattice basis must be non-empty")
        if len(basis) > self.ambient.rank:
            raise LatticeError("sublattice rank exceeds ambient rank")
        for v in basis:
            self.ambient._check_vector(v)
        divisors = exactmat.invariant_factors([list(v) for v in basis])
        if len(divisors) != len(basis):
            raise LatticeError("sublattice basis rows are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def embed(self, coords: Sequence[int]) -> Vector:
        """Ambient coordinates of a vector given in the sublattice basis."""
        if len(coords) != self.rank:
            raise LatticeError(
                f"coordinate length {len(coords)} does not match rank {self.rank}")
        n = self.ambient.rank
        return tuple(sum(coords[k] * self.basis[k][i] for k in range(self.rank))
                     for i in range(n))

    def induced(self, label: str | None = None) -> Lattice:
        """The sublattice as an abstract lattice (restricted Gram matrix)."""
        gram = [[self.ambient.inner(u, v) for v in self.basis] for u in self.basis]
        if label is None:
            label = self.label or f"sub({self.ambient.label})"
        return Lattice(label, _freeze_gram(gram))

    @property
    def is_primitive(self) -> bool:
        return is_primitive_sublattice(self.ambient, self.basis)

    def ambient_divisibility(self, coords: Sequence[int]) -> int:
        return divisibility(self.ambient, self.embed(coords))


# ---------------------------------------------------------------------------
# Catalog


def catalog_path() -> Path:
    override = os.environ.get(_CATALOG_ENV)
    return Path(override) if override else _CATALOG_DEFAULT


@lru_cache(maxsize=8)
def _load_catalog(path_str: str) -> dict[str, Lattice]:
    path = Path(path_str)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LatticeError(f"cannot load lattice catalog {path}: {exc}") from exc
    lattices = {}
    for entry in doc.get("lattices", []):
        lat = Lattice(entry["label"], _freeze_gram(entry["gram"]))
        lattices[_canon(lat.label)] = lat
    return lattices


def _canon(name: str) -> str:
    return name.replace("_", "").replace("-", "").upper()


def catalog_labels() -> list[str]:
    return sorted(lat.label for lat in _load_catalog(str(catalog_path())).values())


def build_standard(name: str, scale: int = 1) -> Lattice:
    """Look up a catalog lattice by label, optionally rescaled.

    Labels: U, E8, LK3, L2, Lambda_0 .. Lambda_9 (plus the second rank-4
    variant Lambda_8U), and the parametric rank-1 family Z<n> with Gram [[n]].
    Lookup ignores case, underscores and hyphens.
    """
    # Parametric family first, on the raw name: a hyphen after Z is a minus
    # sign ("Z-2" is the rank-1 lattice with Gram [[-2]]).
    match = re.fullmatch(r"[Zz]_?(-?\d+)", name.strip())
    if match:
        n = int(match.group(1), 10)
        if n == 0:
            raise LatticeError("rank-1 lattice Z0 is degenerate")
        lat = Lattice(f"Z{n}", ((n,),))
        return rescale(lat, scale) if scale != 1 else lat
    key = _canon(name)
    catalog = _load_catalog(str(catalog_path()))
    if key not in catalog:
        raise LatticeError(f"unknown catalog lattice {name!r}; "
                           f"known labels: {', '.join(catalog_labels())}")
    lat = catalog[key]
    return rescale(lat, scale) if scale != 1 else lat


def lattice_summary(lat: Lattice) -> dict:
    """The exact invariant record emitted by the CLI for a lattice."""
    pos, neg = signature(lat)
    group = discriminant_group(lat)
    return {
        "label": lat.label,
        "rank": lat.rank,
        "det": lat.det,
        "signature": [pos, neg],
        "even": lat.is_even,
        "hyperbolic": (pos, neg) == (1, lat.rank - 1),
        "discriminant_group": list(group),
        "two_elementary": all(d == 2 for d in group),
    }
