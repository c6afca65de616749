# fock_basis.py -----------------------------------------------------------
"""Fock basis of three wells at fixed total boson number N.

Canonical order: descending n1, then descending n2 (n3 = N - n1 - n2), so
|N,0,0> is index 0 and |0,0,N> is the last state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from errors import BasisError


class FockState(NamedTuple):
    n1: int
    n2: int
    n3: int

    @property
    def total(self) -> int:
        return self.n1 + self.n2 + self.n3


def dimension(N: int) -> int:
    """(N+1)(N+2)/2, exact in Python integers."""
    if N < 0:
        raise BasisError(f"particle number must be non-negative, got {N}")
    return (N + 1) * (N + 2) // 2


def _rank(N: int, n1, n2):
    # k = bosons outside well 1; blocks with larger n1 hold k(k+1)/2 states
    k = N - n1
    return k * (k + 1) // 2 + (k - n2)


@dataclass(frozen=True)
class Basis:
    N: int
    occupations: np.ndarray = field(repr=False, compare=False)

    @property
    def D(self) -> int:
        return self.occupations.shape[0]

    @property
    def states(self) -> tuple[FockState, ...]:
        return tuple(FockState(*map(int, row)) for row in self.occupations)

    def __len__(self) -> int:
        return self.D

    def index_of(self, s: FockState | tuple[int, int, int]) -> int:
        return index_of(self, s)


@lru_cache(maxsize=32)
def enumerate_basis(N: int) -> Basis:
    """All (n1, n2, n3) with n1+n2+n3 = N in canonical order."""
    D = dimension(N)
    occ = np.empty((D, 3), dtype=np.int64)
    row = 0
    for n1 in range(N, -1, -1):
        for n2 in range(N - n1, -1, -1):
            occ[row] = (n1, n2, N - n1 - n2)
            row += 1
    occ.setflags(write=False)
    return Basis(N=N, occupations=occ)


def index_of(basis: Basis, s: FockState | tuple[int, int, int]) -> int:
    n1, n2, n3 = (int(x) for x in s)
    if min(n1, n2, n3) < 0 or n1 + n2 + n3 != basis.N:
        raise BasisError(f"state {(n1, n2, n3)} is not in the N={basis.N} basis")
    return int(_rank(basis.N, n1, n2))


# ─────────────────────── vectorized helpers ─────────────────────────────
def occupation_table(basis: Basis) -> np.ndarray:
    """(D, 3) int64 read-only view; columns n1, n2, n3."""
    return basis.occupations


def rank_array(basis: Basis, n1: np.ndarray, n2: np.ndarray) -> np.ndarray:
    """Vectorized index_of for arrays of (n1, n2) already known to be valid."""
    return _rank(basis.N, np.asarray(n1, dtype=np.int64), np.asarray(n2, dtype=np.int64))


def reflect_index(basis: Basis) -> np.ndarray:
    """Permutation p with states[p[i]] = (n3, n2, n1) of states[i]."""
    occ = basis.occupations
    return rank_array(basis, occ[:, 2], occ[:, 1])
