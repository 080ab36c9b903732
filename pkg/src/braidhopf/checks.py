"""Axiom suites: exact verification of the algebra / coalgebra / antipode
laws and the grading discipline on a truncated algebra.

These are the checks the CLI ``check`` command and the acceptance suite
run.  Structural identities (coassociativity, counit, antipode) are
verified on every normal word up to the bound; multiplicativity of the
coproduct and quotient consistency are verified on seeded samples since
the pair space grows quadratically.
"""

from __future__ import annotations

import random

from .algebra import GradedAlgebra
from .errors import Verdict
from .groups import FiniteGroup
from .linalg import Row, row_add_scaled


def check_group_laws(group: FiniteGroup) -> Verdict:
    """Latin-square property and associativity over the full table."""
    n = group.order
    for i in range(n):
        if sorted(group.table[i]) != list(range(n)):
            return Verdict(False, witness=f"row {i} of the multiplication table is not a permutation")
        if sorted(group.table[j][i] for j in range(n)) != list(range(n)):
            return Verdict(False, witness=f"column {i} of the multiplication table is not a permutation")
    e = group.identity_index
    for i in range(n):
        if group.table[e][i] != i or group.table[i][e] != i:
            return Verdict(False, witness=f"identity law fails at element {i}")
        j = group.inverse[i]
        if group.table[i][j] != e or group.table[j][i] != e:
            return Verdict(False, witness=f"inverse law fails at element {i}")
    t = group.table
    for i in range(n):
        for j in range(n):
            tij = t[i][j]
            for k in range(n):
                if t[tij][k] != t[i][t[j][k]]:
                    return Verdict(False, witness=f"associativity fails at ({i},{j},{k})")
    return Verdict(True)


def check_coassociativity(a: GradedAlgebra, bound: int | None = None) -> Verdict:
    bound = a.max_degree if bound is None else bound
    for n in range(bound + 1):
        for x in range(a.dim(n)):
            delta = a.coprod_basis(n, x)
            lhs: dict = {}
            for (i, p, b), c in delta.items():
                for (q, a1, a2), cc in a.coprod_basis(i, p).items():
                    key = (q, i - q, a1, a2, b)
                    val = lhs.get(key, 0) + c * cc
                    if val:
                        lhs[key] = val
                    else:
                        lhs.pop(key, None)
            rhs: dict = {}
            for (i, p, b), c in delta.items():
                for (q, b1, b2), cc in a.coprod_basis(n - i, b).items():
                    key = (i, q, p, b1, b2)
                    val = rhs.get(key, 0) + c * cc
                    if val:
                        rhs[key] = val
                    else:
                        rhs.pop(key, None)
            if lhs != rhs:
                return Verdict(
                    False,
                    witness=f"coassociativity fails on normal word {x} of degree {n}",
                    details={"degree": n},
                )
    return Verdict(True)


def check_counit(a: GradedAlgebra, bound: int | None = None) -> Verdict:
    bound = a.max_degree if bound is None else bound
    one = a.field.one
    for n in range(bound + 1):
        for x in range(a.dim(n)):
            left: Row = {}
            right: Row = {}
            for (i, p, b), c in a.coprod_basis(n, x).items():
                if i == 0:
                    val = left.get(b, 0) + c
                    if val:
                        left[b] = val
                    else:
                        left.pop(b, None)
                if i == n:
                    val = right.get(p, 0) + c
                    if val:
                        right[p] = val
                    else:
                        right.pop(p, None)
            if left != {x: one} or right != {x: one}:
                return Verdict(
                    False,
                    witness=f"counit law fails on normal word {x} of degree {n}",
                    details={"degree": n},
                )
    return Verdict(True)


def check_antipode(a: GradedAlgebra, bound: int | None = None) -> Verdict:
    """mu (S (x) id) Delta = unit . counit = mu (id (x) S) Delta, exactly."""
    bound = a.max_degree if bound is None else bound
    one = a.field.one
    for n in range(bound + 1):
        for x in range(a.dim(n)):
            acc_l: Row = {}
            acc_r: Row = {}
            for (i, p, b), c in a.coprod_basis(n, x).items():
                row_add_scaled(acc_l, c, a.mul_vec(i, a.antipode_basis(i, p), n - i, {b: one}))
                row_add_scaled(acc_r, c, a.mul_vec(i, {p: one}, n - i, a.antipode_basis(n - i, b)))
            expected: Row = {0: one} if n == 0 else {}
            if acc_l != expected or acc_r != expected:
                return Verdict(
                    False,
                    witness=f"antipode axiom fails on normal word {x} of degree {n}",
                    details={"degree": n},
                )
    return Verdict(True)


def braided_tensor_product(a: GradedAlgebra, da: dict, i: int, db: dict, j: int) -> dict:
    """Product of Delta-values in A (x) A with the braided multiplication."""
    out: dict = {}
    for (p, a1, b1), c1 in da.items():
        g = a.gdeg(i - p)[b1]
        for (q, a2, b2), c2 in db.items():
            moved = a.act_vec(g, q, {a2: c2})
            left = a.mul_vec(p, {a1: c1}, q, moved)
            right = a.prod_basis(i - p, b1, j - q, b2)
            for l2, cl in left.items():
                for r2, cr in right.items():
                    key = (p + q, l2, r2)
                    val = out.get(key, 0) + cl * cr
                    if val:
                        out[key] = val
                    else:
                        out.pop(key, None)
    return out


def check_delta_multiplicative(
    a: GradedAlgebra, bound: int | None = None, samples: int = 500, seed: int = 0
) -> Verdict:
    """Delta(xy) = Delta(x) Delta(y) on seeded sampled basis pairs."""
    bound = a.max_degree if bound is None else bound
    rng = random.Random(seed)
    pool = [(i, j) for i in range(bound + 1) for j in range(bound + 1 - i)
            if a.dim(i) and a.dim(j)]
    if not pool:
        return Verdict(True)
    checked = 0
    while checked < samples:
        i, j = pool[rng.randrange(len(pool))]
        x = rng.randrange(a.dim(i))
        y = rng.randrange(a.dim(j))
        prod = a.prod_basis(i, x, j, y)
        lhs: dict = {}
        for idx, c in prod.items():
            for key, cc in a.coprod_basis(i + j, idx).items():
                val = lhs.get(key, 0) + c * cc
                if val:
                    lhs[key] = val
                else:
                    lhs.pop(key, None)
        rhs = braided_tensor_product(a, a.coprod_basis(i, x), i, a.coprod_basis(j, y), j)
        if lhs != rhs:
            return Verdict(
                False,
                witness=f"Delta is not multiplicative on pair ({i},{x}) ({j},{y})",
                details={"degrees": (i, j)},
            )
        checked += 1
    return Verdict(True, details={"samples": checked})


def check_quotient_consistency(
    a: GradedAlgebra, bound: int | None = None, samples: int = 500, seed: int = 0
) -> Verdict:
    """reduce(w1) . reduce(w2) = reduce(w1 w2) on seeded random free words."""
    bound = a.max_degree if bound is None else bound
    rng = random.Random(seed)
    d = a.module.dim
    if d == 0 or bound == 0:
        return Verdict(True)
    for _ in range(samples):
        n1 = rng.randrange(0, bound + 1)
        n2 = rng.randrange(0, bound + 1 - n1)
        w1 = tuple(rng.randrange(d) for _ in range(n1))
        w2 = tuple(rng.randrange(d) for _ in range(n2))
        lhs = a.mul_vec(n1, a.reduce_word(w1), n2, a.reduce_word(w2))
        rhs = a.reduce_word(w1 + w2)
        if lhs != rhs:
            return Verdict(
                False,
                witness=f"reduction is inconsistent on words {w1} and {w2}",
            )
    return Verdict(True, details={"samples": samples})


def check_grading(a: GradedAlgebra, bound: int | None = None) -> Verdict:
    """Products, coproduct components and the antipode respect both
    gradings (word length is structural; the group degree is verified)."""
    bound = a.max_degree if bound is None else bound
    group = a.module.group
    for n in range(bound + 1):
        gd = a.gdeg(n)
        for x in range(a.dim(n)):
            for (i, p, b), _ in a.coprod_basis(n, x).items():
                if group.mul(a.gdeg(i)[p], a.gdeg(n - i)[b]) != gd[x]:
                    return Verdict(
                        False,
                        witness=f"coproduct component breaks the group degree at ({n},{x})",
                    )
            for s, _ in a.antipode_basis(n, x).items():
                if gd[s] != gd[x]:
                    return Verdict(
                        False,
                        witness=f"antipode breaks the group degree at ({n},{x})",
                    )
    for i in range(bound + 1):
        for j in range(bound + 1 - i):
            for x in range(a.dim(i)):
                for y in range(a.dim(j)):
                    target = group.mul(a.gdeg(i)[x], a.gdeg(j)[y])
                    for s in a.prod_basis(i, x, j, y):
                        if a.gdeg(i + j)[s] != target:
                            return Verdict(
                                False,
                                witness=f"product breaks the group degree at ({i},{x})({j},{y})",
                            )
    return Verdict(True)
