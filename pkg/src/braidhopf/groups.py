"""Finite permutation groups with full multiplication tables.

The engine only ever needs a group through multiplication, inverses and
conjugation, so groups are stored as closed element lists (permutations in
image-tuple form) plus a complete Cayley table.  Elements are canonically
indexed by breadth-first closure order starting from the identity, visiting
declared generators in order; this makes every downstream basis and report
reproducible.
"""

from __future__ import annotations

import re

from .errors import GroupTooLarge, OwnerMismatch

Perm = tuple  # images, 0-based: p[i] = image of i


def compose(p: Perm, q: Perm) -> Perm:
    """(p q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation like ``(1 2)(3 4)``; ``()`` is the identity."""
    text = text.strip()
    if not re.fullmatch(r"(\(\s*(\d+(\s+\d+)*)?\s*\))+", text):
        raise ValueError(f"bad cycle notation: {text!r}")
    images = list(range(degree))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        points = [int(t) - 1 for t in cyc.split()]
        if not points:
            continue
        if len(set(points)) != len(points):
            raise ValueError(f"repeated point in cycle: ({cyc})")
        for pt in points:
            if not 0 <= pt < degree:
                raise ValueError(f"point {pt + 1} out of range 1..{degree}")
        for a, b in zip(points, points[1:]):
            images[a] = b
        images[points[-1]] = points[0]
    return tuple(images)


def cycle_string(p: Perm) -> str:
    """Canonical cycle notation: cycles by smallest point, identity ``()``."""
    seen = set()
    cycles = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            seen.add(start)
            continue
        cyc = [start]
        seen.add(start)
        nxt = p[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = p[nxt]
        cycles.append(cyc)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(i + 1) for i in cyc) + ")" for cyc in cycles)


class FiniteGroup:
    """A finite group presented by permutation generators."""

    def __init__(self, degree: int, elements: list[Perm], generator_indices: list[int]):
        self.degree = degree
        self.elements = elements
        self.index = {p: i for i, p in enumerate(elements)}
        self.generator_indices = generator_indices
        n = len(elements)
        self.table = [[self.index[compose(elements[i], elements[j])] for j in range(n)] for i in range(n)]
        self.inverse = [self.index[invert(p)] for p in elements]
        self.identity_index = self.index[identity_perm(degree)]

    @classmethod
    def from_permutation_generators(
        cls, degree: int, generators: list[Perm], max_order: int = 10_000
    ) -> "FiniteGroup":
        """Breadth-first closure of the generators, identity first."""
        gens = [tuple(g) for g in generators]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of 0..{degree - 1}: {g}")
        ident = identity_perm(degree)
        elements = [ident]
        seen = {ident}
        queue = [ident]
        while queue:
            x = queue.pop(0)
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    if len(elements) >= max_order:
                        raise GroupTooLarge(f"closure exceeds {max_order} elements")
                    seen.add(y)
                    elements.append(y)
                    queue.append(y)
        gen_idx = [elements.index(g) for g in gens]
        return cls(degree, elements, gen_idx)

    @property
    def order(self) -> int:
        return len(self.elements)

    def element(self, i: int) -> "GroupElement":
        return GroupElement(self, i)

    def element_from_cycles(self, text: str) -> "GroupElement":
        p = parse_cycles(text, self.degree)
        i = self.index.get(p)
        if i is None:
            raise ValueError(f"permutation {text} is not in the group")
        return GroupElement(self, i)

    @property
    def identity(self) -> "GroupElement":
        return GroupElement(self, self.identity_index)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def conj(self, g: int, h: int) -> int:
        """Index of g h g^-1."""
        return self.table[self.table[g][h]][self.inverse[g]]

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity_index:
            x = self.table[x][i]
            k += 1
        return k

    def generators(self) -> list["GroupElement"]:
        return [GroupElement(self, i) for i in self.generator_indices]

    def __iter__(self):
        return (GroupElement(self, i) for i in range(self.order))

    def __repr__(self):
        return f"FiniteGroup(order {self.order}, degree {self.degree})"


class GroupElement:
    __slots__ = ("owner", "index")

    def __init__(self, owner: FiniteGroup, index: int):
        if not 0 <= index < owner.order:
            raise IndexError(index)
        self.owner = owner
        self.index = index

    def _check(self, other: "GroupElement"):
        if other.owner is not self.owner:
            raise OwnerMismatch("elements of different groups")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.owner, self.owner.mul(self.index, other.index))

    @property
    def inverse(self) -> "GroupElement":
        return GroupElement(self.owner, self.owner.inv(self.index))

    def conjugate(self, h: "GroupElement") -> "GroupElement":
        """g.conjugate(h) = g h g^-1."""
        self._check(h)
        return GroupElement(self.owner, self.owner.conj(self.index, h.index))

    @property
    def is_identity(self) -> bool:
        return self.index == self.owner.identity_index

    def order(self) -> int:
        return self.owner.element_order(self.index)

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and other.owner is self.owner
            and other.index == self.index
        )

    def __hash__(self):
        return hash((id(self.owner), self.index))

    def __repr__(self):
        return cycle_string(self.owner.elements[self.index])


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on {1..n} generated by (1 2) and (1 2 ... n)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return FiniteGroup.from_permutation_generators(1, [])
    gens = [parse_cycles("(1 2)", n)]
    if n > 2:
        gens.append(parse_cycles("(" + " ".join(str(i) for i in range(1, n + 1)) + ")", n))
    return FiniteGroup.from_permutation_generators(n, gens)
