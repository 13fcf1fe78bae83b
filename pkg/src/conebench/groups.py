"""Finitely generated groups of lattice automorphisms and their words."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .cones import ConeRef, PolyCone, QuadCone
from .exact import Mat, Vec, det, identity, inverse, is_integral, matmul, matvec, transpose, vec, mat

_SUPERSCRIPT = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


@dataclass(frozen=True)
class GroupSpec:
    """Subgroup of GL(V(Z)) given by integral generators of determinant +-1."""

    dim: int
    generators: tuple
    names: tuple
    _inverses: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.generators):
            raise ValueError("one name per generator required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        invs = []
        for name, g in zip(self.names, self.generators):
            if len(g) != self.dim or any(len(r) != self.dim for r in g):
                raise ValueError(f"generator {name} is not {self.dim} x {self.dim}")
            if not is_integral(g):
                raise ValueError(f"generator {name} has non-integer entries")
            if abs(det(g)) != 1:
                raise ValueError(f"generator {name} has determinant {det(g)}, expected +-1")
            invs.append(inverse(g))
        object.__setattr__(self, "_inverses", tuple(invs))

    @classmethod
    def build(cls, generators: Sequence, names: Optional[Sequence[str]] = None, dim: Optional[int] = None):
        gens = tuple(mat(g) for g in generators)
        if dim is None:
            if not gens:
                raise ValueError("dimension needed for a group without generators")
            dim = len(gens[0])
        if names is None:
            names = [f"g{i}" for i in range(len(gens))]
        return cls(dim, gens, tuple(names))

    def letter_matrix(self, letter) -> Mat:
        idx, e = letter
        return self.generators[idx] if e == 1 else self._inverses[idx]

    def letters(self):
        """All letters in tie-break order: direct before inverse, by index."""
        return [(i, e) for i in range(len(self.generators)) for e in (1, -1)]

    def word(self, letters: Sequence) -> "Word":
        letters = tuple((int(i), int(e)) for i, e in letters)
        m = identity(self.dim)
        for letter in letters:
            m = matmul(m, self.letter_matrix(letter))
        return Word(letters, m, self.names)

    def identity_word(self) -> "Word":
        return Word((), identity(self.dim), self.names)

    def transposed(self) -> "GroupSpec":
        return GroupSpec(self.dim, tuple(transpose(g) for g in self.generators), self.names)


@dataclass(frozen=True)
class Word:
    letters: tuple
    matrix: Mat
    names: tuple = field(default=(), compare=False)

    @property
    def key(self):
        return (len(self.letters), tuple((i, 0 if e == 1 else 1) for i, e in self.letters))

    def is_identity(self) -> bool:
        return self.matrix == identity(len(self.matrix))

    def act(self, x: Sequence[Fraction]) -> Vec:
        return matvec(self.matrix, x)

    def __str__(self) -> str:
        return format_word(self.letters, self.names)


def free_reduce(letters: Sequence) -> tuple:
    out = []
    for i, e in letters:
        if out and out[-1] == (i, -e):
            out.pop()
        else:
            out.append((i, e))
    return tuple(out)


def format_word(letters: Sequence, names: Sequence[str]) -> str:
    """Render ``[(0,-1)]*3`` as ``M⁻³``; the empty word is ``id``."""
    if not letters:
        return "id"
    runs = []
    for i, e in letters:
        if runs and runs[-1][0] == i and (runs[-1][1] > 0) == (e > 0):
            runs[-1][1] += e
        else:
            runs.append([i, e])
    sep = "" if all(len(n) == 1 for n in names) else "·"
    parts = []
    for i, p in runs:
        name = names[i] if i < len(names) else f"g{i}"
        parts.append(name if p == 1 else name + str(p).translate(_SUPERSCRIPT))
    return sep.join(parts)


@dataclass(frozen=True)
class OrbitReport:
    depth: int
    elements: tuple
    truncated: bool


@lru_cache(maxsize=64)
def word_bfs(group: GroupSpec, depth: int) -> OrbitReport:
    """Distinct elements of word length <= depth, in canonical (length, lex) order.

    Each element is represented by its first word in that order, which is of
    minimal length.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    ident = group.identity_word()
    seen = {ident.matrix}
    elements = [ident]
    frontier = [ident]
    letters = group.letters()
    truncated = False
    for level in range(depth + 1):
        nxt = []
        for w in frontier:
            for letter in letters:
                m = matmul(w.matrix, group.letter_matrix(letter))
                if m in seen:
                    continue
                if level == depth:
                    truncated = True
                    break
                seen.add(m)
                nxt.append(Word(w.letters + (letter,), m, group.names))
            if truncated:
                break
        if level == depth:
            break
        elements.extend(nxt)
        frontier = nxt
    return OrbitReport(depth, tuple(elements), truncated)


def preserves_cone(word: Word, cone: ConeRef) -> bool:
    m = word.matrix
    if isinstance(cone, QuadCone):
        if matmul(transpose(m), matmul(cone.Q, m)) != cone.Q:
            return False
        return cone.pair(matvec(m, cone.selector), cone.selector) > 0
    m_inv = inverse(m)
    for v in cone.spanning_set():
        if not cone.contains(matvec(m, v)) or not cone.contains(matvec(m_inv, v)):
            return False
    return True


def dual_action(word: Word) -> Mat:
    """Action on V* under the standard pairing: <x, g.y> = <g.x, y>."""
    return transpose(word.matrix)


def stabilizer_search(group: GroupSpec, x: Sequence, depth: int) -> list:
    """Words of length <= depth with non-identity matrix fixing ``x`` exactly.

    An empty result only shows the stabilizer is trivial up to that depth.
    """
    x = vec(x)
    return [w for w in word_bfs(group, depth).elements if not w.is_identity() and w.act(x) == x]
