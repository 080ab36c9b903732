"""Yetter-Drinfeld modules over a group algebra kG and their braiding.

A module is a finite G-graded vector space (every basis vector carries one
group degree -- the coaction) together with a G-action such that acting by
``g`` sends the degree-``h`` component into the degree ``g h g^-1``
component.  The braiding is ``c(v (x) w) = (deg v . w) (x) v`` on
homogeneous vectors, extended bilinearly.
"""

from __future__ import annotations

from .errors import NotHSubcomodule, OwnerMismatch, Verdict
from .groups import FiniteGroup, GroupElement
from .linalg import Row


class YDModule:
    """Finite-dimensional Yetter-Drinfeld module over kG.

    ``action[g]`` is a column-sparse matrix: ``action[g][j]`` is the image
    of basis vector ``j`` under ``g`` as a ``{index: scalar}`` dict.  The
    action must be stored for every group element (build it from generator
    images with :meth:`from_generator_action`).
    """

    def __init__(
        self,
        group: FiniteGroup,
        basis_labels: list[str],
        degrees: list[int],
        action: dict[int, list[Row]],
        field,
    ):
        if len(degrees) != len(basis_labels):
            raise ValueError("one group degree per basis label is required")
        self.group = group
        self.labels = list(basis_labels)
        self.degrees = list(degrees)  # group element index per basis vector
        self.action = action
        self.field = field
        self.label_index = {lb: i for i, lb in enumerate(basis_labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    @classmethod
    def from_generator_action(
        cls,
        group: FiniteGroup,
        basis_labels: list[str],
        degrees: list[int],
        generator_action: dict[int, list[Row]],
        field,
    ) -> "YDModule":
        """Extend generator images to the whole group along the closure.

        The extension follows the group's breadth-first enumeration, so it
        is deterministic; whether the result is an actual homomorphism is
        decided by :func:`check_yd`.
        """
        dim = len(basis_labels)
        ident = group.identity_index
        action: dict[int, list[Row]] = {ident: [{j: field.one} for j in range(dim)]}
        queue = [ident]
        while queue:
            x = queue.pop(0)
            for g in group.generator_indices:
                y = group.mul(x, g)
                if y in action:
                    continue
                gx = generator_action[g]
                ax = action[x]
                # column j of action(x*g) = action(x) applied to column j of action(g)
                cols: list[Row] = []
                for j in range(dim):
                    col: Row = {}
                    for mid, c in gx[j].items():
                        for out, d in ax[mid].items():
                            w = col.get(out, 0) + c * d
                            if w:
                                col[out] = w
                            else:
                                col.pop(out, None)
                    cols.append(col)
                action[y] = cols
                queue.append(y)
        return cls(group, basis_labels, degrees, action, field)

    def act(self, g: int, vec: Row) -> Row:
        """Apply the action of group element index ``g`` to a vector."""
        cols = self.action[g]
        out: Row = {}
        for j, c in vec.items():
            for i, d in cols[j].items():
                w = out.get(i, 0) + c * d
                if w:
                    out[i] = w
                else:
                    out.pop(i, None)
        return out

    def basis_vector(self, i: int) -> "Vector":
        return Vector(self, {i: self.field.one})

    def vector(self, coords: Row) -> "Vector":
        return Vector(self, coords)

    def __repr__(self):
        return f"YDModule(dim {self.dim} over {self.group!r})"


class Vector:
    """An element of a Yetter-Drinfeld module, sparse coordinates."""

    __slots__ = ("module", "coords")

    def __init__(self, module: YDModule, coords: Row):
        for i in coords:
            if not 0 <= i < module.dim:
                raise IndexError(i)
        self.module = module
        self.coords = {i: c for i, c in coords.items() if c}

    def __add__(self, other: "Vector") -> "Vector":
        if other.module is not self.module:
            raise OwnerMismatch("vectors of different modules")
        out = dict(self.coords)
        for i, c in other.coords.items():
            w = out.get(i, 0) + c
            if w:
                out[i] = w
            else:
                out.pop(i, None)
        return Vector(self.module, out)

    def __rmul__(self, scalar) -> "Vector":
        return Vector(self.module, {i: scalar * c for i, c in self.coords.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Vector)
            and other.module is self.module
            and other.coords == self.coords
        )

    def __repr__(self):
        labels = self.module.labels
        if not self.coords:
            return "0"
        return " + ".join(f"{c}*{labels[i]}" for i, c in sorted(self.coords.items()))


def check_yd(m: YDModule) -> Verdict:
    """Verify the action is a homomorphism and respects the grading.

    On failure the witness names the offending pair (g, h) or the group
    element and basis vector whose image leaves the required component.
    """
    group = m.group
    ident = group.identity_index
    id_cols = m.action.get(ident)
    if id_cols is None or any(col != {j: col.get(j)} or not col.get(j) == 1 for j, col in enumerate(id_cols)):
        return Verdict(False, witness="action(identity) is not the identity matrix")
    for g in range(group.order):
        if g not in m.action:
            return Verdict(False, witness=f"no action matrix for {group.element(g)!r}")
    # homomorphism on all pairs
    for g in range(group.order):
        for h in range(group.order):
            gh = group.mul(g, h)
            for j in range(m.dim):
                img: Row = {}
                for mid, c in m.action[h][j].items():
                    for out, d in m.action[g][mid].items():
                        w = img.get(out, 0) + c * d
                        if w:
                            img[out] = w
                        else:
                            img.pop(out, None)
                if img != m.action[gh][j]:
                    return Verdict(
                        False,
                        witness=(
                            f"action({group.element(g)!r})*action({group.element(h)!r}) "
                            f"!= action of the product on basis vector {m.labels[j]}"
                        ),
                    )
    # compatibility: g . V_h inside V_{g h g^-1}
    for g in range(group.order):
        for j in range(m.dim):
            target = group.conj(g, m.degrees[j])
            for i in m.action[g][j]:
                if m.degrees[i] != target:
                    return Verdict(
                        False,
                        witness=(
                            f"({group.element(g)!r}, {m.labels[j]}): component "
                            f"{m.labels[i]} has degree {group.element(m.degrees[i])!r}, "
                            f"expected {group.element(target)!r}"
                        ),
                    )
    return Verdict(True)


def braid(v: Vector, w: Vector) -> dict:
    """The braiding V (x) W -> W (x) V; keys are (W index, V index)."""
    if v.module.group is not w.module.group:
        raise OwnerMismatch("modules over different groups")
    vm, wm = v.module, w.module
    out: dict = {}
    for j, cv in v.coords.items():
        moved = wm.act(vm.degrees[j], w.coords)
        for i, cw in moved.items():
            key = (i, j)
            val = out.get(key, 0) + cv * cw
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def braid_basis(vm: YDModule, wm: YDModule, j: int, wvec: Row) -> Row:
    """Braiding of basis vector j of ``vm`` past a W vector: returns g_j . w."""
    return wm.act(vm.degrees[j], wvec)


def check_braid_equation(m: YDModule) -> Verdict:
    """Exact braid equation on V (x) V (x) V over all basis triples."""

    def c12(t: dict) -> dict:
        out: dict = {}
        for (a, b, c), coeff in t.items():
            moved = m.act(m.degrees[a], {b: m.field.one})
            for b2, d in moved.items():
                key = (b2, a, c)
                w = out.get(key, 0) + coeff * d
                if w:
                    out[key] = w
                else:
                    out.pop(key, None)
        return out

    def c23(t: dict) -> dict:
        out: dict = {}
        for (a, b, c), coeff in t.items():
            moved = m.act(m.degrees[b], {c: m.field.one})
            for c2, d in moved.items():
                key = (a, c2, b)
                w = out.get(key, 0) + coeff * d
                if w:
                    out[key] = w
                else:
                    out.pop(key, None)
        return out

    one = m.field.one
    for i in range(m.dim):
        for j in range(m.dim):
            for k in range(m.dim):
                start = {(i, j, k): one}
                lhs = c12(c23(c12(start)))
                rhs = c23(c12(c23(start)))
                if lhs != rhs:
                    return Verdict(
                        False,
                        witness=f"braid equation fails on ({m.labels[i]}, {m.labels[j]}, {m.labels[k]})",
                    )
    return Verdict(True)


def require_homogeneous_degrees(m: YDModule, coords: Row) -> int:
    """Group degree of a homogeneous vector; NotHSubcomodule if mixed."""
    degs = {m.degrees[i] for i in coords}
    if len(degs) != 1:
        raise NotHSubcomodule("vector is not G-homogeneous")
    return degs.pop()
