"""Free braided Hopf algebras T(V) and their graded quotients.

An algebra is built degree by degree up to a truncation bound.  Degree n is
presented inside V (x) A_{n-1}: the candidate words are v.w with w a normal
word of degree n-1, and the ideal rows at degree n are the images of
(relation r) . (normal word of degree n - deg r).  Products of the form
(free stuff) . (ideal) are killed automatically by working in reduced
coordinates, which keeps the presentation small even where the free word
count explodes.  Normal words are the non-pivot candidates under
degree-lexicographic order with generator order as declared, so bases are
canonical.

The coproduct is primitive on generators and extended multiplicatively for
the braided product on A (x) A, ``(a (x) b)(c (x) d) = a (deg b . c) (x) b d``;
the antipode is ``S(v) = -v`` extended by ``S(xy) = S(deg x . y) S(x)``.
Both are computed once per degree and cached, as is the group action on
each graded component.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import (
    DegreeOverflow,
    NotACoideal,
    NotActionStable,
    NotHomogeneous,
    NotHSubcomodule,
    Verdict,
)
from .linalg import Echelon, Row, row_add_scaled
from .yd import YDModule

Word = tuple  # tuple of V-basis indices; () is the unit


def _coerce(field, x):
    if isinstance(x, int):
        return field.of(x)
    if isinstance(x, Fraction) and field.char != 0:
        return field.of(x.numerator, x.denominator)
    return x


def _is_negative(c) -> bool:
    return isinstance(c, (int, Fraction)) and c < 0


def format_word_poly(terms: dict, labels=None) -> str:
    """Render {word: coefficient} as a DSL-style expression.

    Words are tuples of basis indices when ``labels`` is given, otherwise
    tuples of label strings.  Runs of a repeated letter print as powers.
    """
    if not terms:
        return "0"

    def word_str(w) -> str:
        if not w:
            return "1"
        parts = []
        for letter, run in itertools.groupby(w):
            name = labels[letter] if labels is not None else letter
            k = len(list(run))
            parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts)

    items = sorted(terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    out = []
    for w, c in items:
        neg = _is_negative(c)
        mag = -c if neg else c
        body = word_str(w)
        if body == "1":
            piece = f"{mag}"
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag}*{body}"
        if not out:
            out.append(f"-{piece}" if neg else piece)
        else:
            out.append(f"- {piece}" if neg else f"+ {piece}")
    return " ".join(out)


class AlgebraElement:
    """An element of a graded algebra, supported on normal words."""

    __slots__ = ("parent", "support")

    def __init__(self, parent: "GradedAlgebra", support: dict):
        self.parent = parent
        self.support = {w: c for w, c in support.items() if c}

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.parent is not self.parent:
            raise ValueError("elements of different algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out = dict(self.support)
        for w, c in other.support.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return AlgebraElement(self.parent, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "AlgebraElement":
        scalar = _coerce(self.parent.field, scalar)
        return AlgebraElement(self.parent, {w: scalar * c for w, c in self.support.items()})

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return NotImplemented

    def __neg__(self) -> "AlgebraElement":
        return (-1) * self

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and other.parent is self.parent
            and other.support == self.support
        )

    def __bool__(self):
        return bool(self.support)

    @property
    def n_degree(self):
        """The common word length, or None if inhomogeneous or zero."""
        lengths = {len(w) for w in self.support}
        return lengths.pop() if len(lengths) == 1 else None

    @property
    def g_degree(self):
        """Common group degree index, or None if mixed or zero."""
        degs = {self.parent.word_gdeg(w) for w in self.support}
        return degs.pop() if len(degs) == 1 else None

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for w, c in self.support.items():
            parts.setdefault(len(w), {})[w] = c
        return parts

    def __repr__(self):
        return format_word_poly(self.support, self.parent.module.labels)


class GradedAlgebra:
    """A graded quotient of T(V) with all structure maps, truncated."""

    def __init__(
        self,
        module: YDModule,
        relations: list[dict],
        max_degree: int,
        *,
        check_coideal: bool = True,
        check_action_stability: bool = True,
    ):
        if max_degree < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.module = module
        self.field = module.field
        self.max_degree = max_degree
        self.relations = [self._normalize_relation(r) for r in relations]
        self._words: list[list[Word]] = []
        self._windex: list[dict] = []
        self._gdeg: list[list[int]] = []
        self._lmul: list[dict] = []  # per degree n>=1: (v, t) -> Row on A_n
        self._act: dict = {}
        self._coprod: list = [None] * (max_degree + 1)
        self._antipode: list = [None] * (max_degree + 1)
        self._prod: dict = {}
        self._build()
        if check_coideal and self.relations:
            self._check_coideal_property()
        if check_action_stability and self.relations:
            self._check_action_stability()

    # ------------------------------------------------------------------
    # construction

    def _normalize_relation(self, rel: dict) -> dict:
        out = {}
        for w, c in rel.items():
            c = _coerce(self.field, c)
            if c:
                out[tuple(w)] = c
        if not out:
            raise NotHomogeneous("zero relation")
        lengths = {len(w) for w in out}
        if len(lengths) != 1:
            raise NotHomogeneous(
                f"relation is not N-homogeneous: {format_word_poly(out, self.module.labels)}"
            )
        if lengths.pop() == 0:
            raise NotHomogeneous("degree-0 relation would destroy connectedness")
        gdegs = {self.word_gdeg(w) for w in out}
        if len(gdegs) != 1:
            raise NotHSubcomodule(
                f"relation is not G-homogeneous: {format_word_poly(out, self.module.labels)}"
            )
        return out

    def _build(self):
        group = self.module.group
        one = self.field.one
        self._words.append([()])
        self._windex.append({(): 0})
        self._gdeg.append([group.identity_index])
        self._lmul.append({})  # unused slot for degree 0
        for n in range(1, self.max_degree + 1):
            prev = self._words[n - 1]
            d = self.module.dim
            ncols = d * len(prev)

            def col_of(v: int, t: int) -> int:
                return v * len(prev) + t

            ech = Echelon(ncols)
            for rel in self.relations:
                dr = len(next(iter(rel)))
                if dr > n:
                    continue
                for t in range(self.dim(n - dr)):
                    row: Row = {}
                    for w, c in rel.items():
                        vec = {t: one}
                        deg = n - dr
                        for letter in reversed(w[1:]):
                            vec = self._lmul_apply(letter, vec, deg)
                            deg += 1
                        for s, coeff in vec.items():
                            col = col_of(w[0], s)
                            val = row.get(col, 0) + c * coeff
                            if val:
                                row[col] = val
                            else:
                                row.pop(col, None)
                    ech.insert(row)
            pivots = set(ech.pivot_rows)
            words_n: list[Word] = []
            col_to_norm: dict[int, int] = {}
            for v in range(d):
                for t in range(len(prev)):
                    col = col_of(v, t)
                    if col not in pivots:
                        col_to_norm[col] = len(words_n)
                        words_n.append((v,) + prev[t])
            lmul_n: dict = {}
            for v in range(d):
                for t in range(len(prev)):
                    col = col_of(v, t)
                    if col in pivots:
                        rr = ech.pivot_rows[col]
                        lmul_n[(v, t)] = {
                            col_to_norm[c]: -coeff for c, coeff in rr.items() if c != col
                        }
                    else:
                        lmul_n[(v, t)] = {col_to_norm[col]: one}
            self._words.append(words_n)
            self._windex.append({w: i for i, w in enumerate(words_n)})
            self._gdeg.append([self.word_gdeg(w) for w in words_n])
            self._lmul.append(lmul_n)

    def _check_coideal_property(self):
        top = max(len(next(iter(r))) for r in self.relations)
        free = GradedAlgebra(self.module, [], min(top, self.max_degree))
        if top > self.max_degree:
            raise DegreeOverflow("relations exceed the truncation degree")
        deferred = []
        for rel in self.relations:
            elt = AlgebraElement(free, rel)
            if not free.is_primitive(elt):
                deferred.append(rel)
        # primitively generated ideals are automatically coideals
        for rel in deferred:
            n = len(next(iter(rel)))
            total: dict = {}
            for w, c in rel.items():
                idx = free._windex[n][w]
                for (i, a, b), cc in free.coprod_basis(n, idx).items():
                    key = (i, a, b)
                    val = total.get(key, 0) + c * cc
                    if val:
                        total[key] = val
                    else:
                        total.pop(key, None)
            projected: dict = {}
            for (i, a, b), c in total.items():
                left = self.reduce_word(free._words[i][a])
                right = self.reduce_word(free._words[n - i][b])
                for la, ca in left.items():
                    for rb, cb in right.items():
                        key = (i, la, rb)
                        val = projected.get(key, 0) + c * ca * cb
                        if val:
                            projected[key] = val
                        else:
                            projected.pop(key, None)
            if projected:
                raise NotACoideal(
                    "ideal is not a coideal; witness relation "
                    f"{format_word_poly(rel, self.module.labels)} at degree {n}"
                )

    def _check_action_stability(self):
        group = self.module.group
        for g in group.generator_indices:
            for rel in self.relations:
                image: dict = {}
                for w, c in rel.items():
                    cols = [self.module.action[g][letter] for letter in w]
                    for picks in itertools.product(*[list(col.items()) for col in cols]):
                        word = tuple(p[0] for p in picks)
                        coeff = c
                        for p in picks:
                            coeff = coeff * p[1]
                        val = image.get(word, 0) + coeff
                        if val:
                            image[word] = val
                        else:
                            image.pop(word, None)
                residue: Row = {}
                for w, c in image.items():
                    row_add_scaled(residue, c, self.reduce_word(w))
                if residue:
                    raise NotActionStable(
                        f"acting by {group.element(g)!r} maps relation "
                        f"{format_word_poly(rel, self.module.labels)} outside the ideal"
                    )

    # ------------------------------------------------------------------
    # basis queries

    def dim(self, n: int) -> int:
        return len(self._words[n]) if 0 <= n <= self.max_degree else 0

    def dims(self) -> list[int]:
        return [self.dim(n) for n in range(self.max_degree + 1)]

    def words(self, n: int) -> list[Word]:
        return self._words[n]

    def word_index(self, n: int, w: Word) -> int:
        return self._windex[n][w]

    def gdeg(self, n: int) -> list[int]:
        return self._gdeg[n]

    def word_gdeg(self, w: Word) -> int:
        group = self.module.group
        g = group.identity_index
        for letter in w:
            g = group.mul(g, self.module.degrees[letter])
        return g

    def hilbert(self) -> list[int]:
        return self.dims()

    @property
    def is_free(self) -> bool:
        return not self.relations

    # ------------------------------------------------------------------
    # reduction and products

    def _lmul_apply(self, letter: int, vec: Row, deg: int) -> Row:
        """Left-multiply a degree-``deg`` vector by generator ``letter``."""
        if deg + 1 > self.max_degree:
            raise DegreeOverflow(
                f"product would reach degree {deg + 1} > truncation {self.max_degree}"
            )
        table = self._lmul[deg + 1]
        out: Row = {}
        for t, c in vec.items():
            row_add_scaled(out, c, table[(letter, t)])
        return out

    def reduce_word(self, w: Word) -> Row:
        """Coordinates of a free word on the normal basis of its degree."""
        if len(w) > self.max_degree:
            raise DegreeOverflow(
                f"word of degree {len(w)} exceeds truncation {self.max_degree}"
            )
        vec: Row = {0: self.field.one}
        deg = 0
        for letter in reversed(w):
            vec = self._lmul_apply(letter, vec, deg)
            deg += 1
        return vec

    def prod_basis(self, i: int, a: int, j: int, b: int) -> Row:
        """Product of normal basis vectors: A_i[a] . A_j[b] in A_{i+j}."""
        if i + j > self.max_degree:
            raise DegreeOverflow(
                f"product of degrees {i} and {j} exceeds truncation {self.max_degree}"
            )
        key = (i, a, j, b)
        cached = self._prod.get(key)
        if cached is not None:
            return cached
        vec: Row = {b: self.field.one}
        deg = j
        for letter in reversed(self._words[i][a]):
            vec = self._lmul_apply(letter, vec, deg)
            deg += 1
        self._prod[key] = vec
        return vec

    def mul_vec(self, i: int, veca: Row, j: int, vecb: Row) -> Row:
        """Bilinear product of coordinate vectors at degrees i and j."""
        out: Row = {}
        for a, ca in veca.items():
            for b, cb in vecb.items():
                row_add_scaled(out, ca * cb, self.prod_basis(i, a, j, b))
        return out

    def act_basis(self, g: int, n: int, idx: int) -> Row:
        return self.act_matrix(g, n)[idx]

    def act_matrix(self, g: int, n: int) -> list[Row]:
        """Columns of the action of group element g on A_n."""
        key = (g, n)
        cached = self._act.get(key)
        if cached is not None:
            return cached
        if n == 0:
            cols = [{0: self.field.one}]
        else:
            prev = self.act_matrix(g, n - 1)
            cols = []
            for w in self._words[n]:
                v, tail = w[0], w[1:]
                t = self._windex[n - 1][tail]
                out: Row = {}
                for v2, cv in self.module.action[g][v].items():
                    for t2, ct in prev[t].items():
                        row_add_scaled(out, cv * ct, self._lmul[n][(v2, t2)])
                cols.append(out)
        self._act[key] = cols
        return cols

    def act_vec(self, g: int, n: int, vec: Row) -> Row:
        cols = self.act_matrix(g, n)
        out: Row = {}
        for t, c in vec.items():
            row_add_scaled(out, c, cols[t])
        return out

    # ------------------------------------------------------------------
    # coalgebra structure

    def coprod_basis(self, n: int, idx: int) -> dict:
        """Coproduct of a normal word: {(i, a, b): c} over A_i (x) A_{n-i}."""
        if self._coprod[n] is None:
            self._coprod[n] = self._build_coprod(n)
        return self._coprod[n][idx]

    def _build_coprod(self, n: int) -> list:
        one = self.field.one
        if n == 0:
            return [{(0, 0, 0): one}]
        if self._coprod[n - 1] is None:
            self._coprod[n - 1] = self._build_coprod(n - 1)
        prev = self._coprod[n - 1]
        out = []
        for w in self._words[n]:
            v, tail = w[0], w[1:]
            gv = self.module.degrees[v]
            t = self._windex[n - 1][tail]
            acc: dict = {}
            for (i, a, b), c in prev[t].items():
                # (deg v . left) (x) (v . right)
                ga = self.act_basis(gv, i, a)
                vb = self._lmul[n - i][(v, b)]
                for a2, ca in ga.items():
                    cca = c * ca
                    for b2, cb in vb.items():
                        key = (i, a2, b2)
                        val = acc.get(key, 0) + cca * cb
                        if val:
                            acc[key] = val
                        else:
                            acc.pop(key, None)
                # (v . left) (x) right
                va = self._lmul[i + 1][(v, a)]
                for a2, ca in va.items():
                    key = (i + 1, a2, b)
                    val = acc.get(key, 0) + c * ca
                    if val:
                        acc[key] = val
                    else:
                        acc.pop(key, None)
            out.append(acc)
        return out

    def counit_vec(self, n: int, vec: Row):
        if n == 0:
            return vec.get(0, self.field.zero)
        return self.field.zero

    def antipode_basis(self, n: int, idx: int) -> Row:
        if self._antipode[n] is None:
            self._antipode[n] = self._build_antipode(n)
        return self._antipode[n][idx]

    def _build_antipode(self, n: int) -> list:
        one = self.field.one
        if n == 0:
            return [{0: one}]
        if self._antipode[n - 1] is None:
            self._antipode[n - 1] = self._build_antipode(n - 1)
        prev = self._antipode[n - 1]
        out = []
        for w in self._words[n]:
            v, tail = w[0], w[1:]
            gv = self.module.degrees[v]
            t = self._windex[n - 1][tail]
            moved = self.act_vec(gv, n - 1, {t: one})
            s_moved: Row = {}
            for s, c in moved.items():
                row_add_scaled(s_moved, c, prev[s])
            gen_vec = self._lmul[1][(v, 0)]
            res: Row = {}
            for s, c in s_moved.items():
                for u, cu in gen_vec.items():
                    row_add_scaled(res, -(c * cu), self.prod_basis(n - 1, s, 1, u))
            out.append(res)
        return out

    # ------------------------------------------------------------------
    # element-level interface

    def element(self, support: dict) -> AlgebraElement:
        """Build an element from arbitrary free words, reducing them."""
        acc: dict = {}
        for w, c in support.items():
            c = _coerce(self.field, c)
            if not c:
                continue
            w = tuple(w)
            vec = self.reduce_word(w)
            n = len(w)
            for idx, coeff in vec.items():
                word = self._words[n][idx]
                val = acc.get(word, 0) + c * coeff
                if val:
                    acc[word] = val
                else:
                    acc.pop(word, None)
        return AlgebraElement(self, acc)

    def unit(self) -> AlgebraElement:
        return AlgebraElement(self, {(): self.field.one})

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def gen(self, label_or_index) -> AlgebraElement:
        idx = (
            label_or_index
            if isinstance(label_or_index, int)
            else self.module.label_index[label_or_index]
        )
        return self.element({(idx,): self.field.one})

    def basis_element(self, n: int, idx: int) -> AlgebraElement:
        return AlgebraElement(self, {self._words[n][idx]: self.field.one})

    def vec_to_element(self, n: int, vec: Row) -> AlgebraElement:
        return AlgebraElement(self, {self._words[n][idx]: c for idx, c in vec.items()})

    def element_to_vec(self, elt: AlgebraElement) -> tuple[int, Row]:
        """Degree and coordinates of a homogeneous element."""
        n = elt.n_degree
        if n is None:
            raise NotHomogeneous("element is not N-homogeneous")
        return n, {self._windex[n][w]: c for w, c in elt.support.items()}

    def is_primitive(self, elt: AlgebraElement) -> bool:
        n = elt.n_degree
        if n is None or n == 0:
            return False
        total: dict = {}
        for w, c in elt.support.items():
            idx = self._windex[n][w]
            for key, cc in self.coprod_basis(n, idx).items():
                val = total.get(key, 0) + c * cc
                if val:
                    total[key] = val
                else:
                    total.pop(key, None)
        for w, c in elt.support.items():
            idx = self._windex[n][w]
            for key in ((0, 0, idx), (n, idx, 0)):
                val = total.get(key, 0) - c
                if val:
                    total[key] = val
                else:
                    total.pop(key, None)
        return not total

    def __repr__(self):
        kind = "free" if self.is_free else f"{len(self.relations)} relations"
        return f"GradedAlgebra(dim V={self.module.dim}, {kind}, truncated at {self.max_degree})"


# ----------------------------------------------------------------------
# module-level operations (the public algebra API)


def free_algebra(module: YDModule, max_degree: int) -> GradedAlgebra:
    return GradedAlgebra(module, [], max_degree)


def build_quotient(module: YDModule, relations: list[dict], max_degree: int) -> GradedAlgebra:
    """Quotient of T(V) by the two-sided ideal the relations generate.

    Relations must be N- and G-homogeneous; the ideal must be a coideal
    (checked; automatic when every relation is primitive) and stable under
    the group action, so that the quotient inherits the full braided Hopf
    structure.
    """
    return GradedAlgebra(module, relations, max_degree)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.parent is not b.parent:
        raise ValueError("elements of different algebras")
    A = a.parent
    acc: dict = {}
    for wa, ca in a.support.items():
        ia = len(wa)
        xa = A._windex[ia][wa]
        for wb, cb in b.support.items():
            jb = len(wb)
            if ia + jb > A.max_degree:
                raise DegreeOverflow(
                    f"product degree {ia + jb} exceeds truncation {A.max_degree}"
                )
            xb = A._windex[jb][wb]
            vec = A.prod_basis(ia, xa, jb, xb)
            cab = ca * cb
            for idx, c in vec.items():
                w = A._words[ia + jb][idx]
                val = acc.get(w, 0) + cab * c
                if val:
                    acc[w] = val
                else:
                    acc.pop(w, None)
    return AlgebraElement(A, acc)


def coproduct(a: AlgebraElement) -> dict:
    """Coproduct as {(left word, right word): coefficient}."""
    A = a.parent
    out: dict = {}
    for w, c in a.support.items():
        n = len(w)
        idx = A._windex[n][w]
        for (i, xa, xb), cc in A.coprod_basis(n, idx).items():
            key = (A._words[i][xa], A._words[n - i][xb])
            val = out.get(key, 0) + c * cc
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def antipode(a: AlgebraElement) -> AlgebraElement:
    A = a.parent
    acc: dict = {}
    for w, c in a.support.items():
        n = len(w)
        idx = A._windex[n][w]
        for idx2, cc in A.antipode_basis(n, idx).items():
            w2 = A._words[n][idx2]
            val = acc.get(w2, 0) + c * cc
            if val:
                acc[w2] = val
            else:
                acc.pop(w2, None)
    return AlgebraElement(A, acc)


def counit(a: AlgebraElement):
    return a.support.get((), a.parent.field.zero)


def check_primitive(a: AlgebraElement) -> Verdict:
    """Is Delta(a) = 1 (x) a + a (x) 1 in the parent algebra?"""
    if a.parent.is_primitive(a):
        return Verdict(True)
    return Verdict(False, witness=f"{a!r} is not primitive")


def hilbert(a: GradedAlgebra) -> list[int]:
    return a.hilbert()
