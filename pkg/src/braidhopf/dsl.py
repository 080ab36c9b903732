"""The input language for groups, modules, algebras and coideals.

A document declares one permutation group, one module over it, one algebra
(free or a quotient by relations, always truncated), any number of named
coideal subalgebras, and a task list.  The grammar is LL(1); whitespace and
``#`` line comments are insignificant.  Example::

    group S3 permutation degree 3 generators (1 2), (1 2 3);

    module V {
      basis v12 deg (1 2);
      action (1 2): v12 -> -v12, v13 -> v23, v23 -> v13;
      ...
    }

    algebra FK3 = T(V) / relations { v12^2; ... } truncate 6;

    coideal K12 = subalgebra { v12 };

    task decompose K12;

Documents are stored normalized (permutations in canonical cycle form,
expressions as coefficient dictionaries), so parsing the canonical printer
output reproduces the document structurally.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dfield
from fractions import Fraction

from .algebra import GradedAlgebra, format_word_poly
from .coideal import CoidealSubalgebra, generate_subalgebra
from .errors import (
    DslArityError,
    DslNameError,
    DslSyntaxError,
    ElaborationError,
    EngineError,
)
from .groups import FiniteGroup
from .scalars import QQ
from .yd import YDModule, check_yd

Cycles = tuple  # tuple of cycles, each a tuple of 1-based points
Poly = dict  # {tuple of label strings: Fraction}

TASK_KINDS = ("check", "hilbert", "decompose", "canmap", "freeness", "hopfmod")


# ----------------------------------------------------------------------
# permutations as canonical cycle tuples (degree-independent)


def canonical_cycles(mapping: dict[int, int]) -> Cycles:
    """Canonical cycle decomposition of a finitely supported bijection."""
    cycles = []
    seen = set()
    for start in sorted(mapping):
        if start in seen or mapping[start] == start:
            seen.add(start)
            continue
        cyc = [start]
        seen.add(start)
        nxt = mapping[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = mapping[nxt]
        cycles.append(tuple(cyc))
    return tuple(cycles)


def compose_cycles(cycle_list: list[tuple[int, ...]]) -> Cycles:
    """Compose cycles written left to right (leftmost applied last)."""
    points = sorted({p for cyc in cycle_list for p in cyc})
    mapping = {p: p for p in points}
    for p in points:
        x = p
        for cyc in reversed(cycle_list):
            if x in cyc:
                x = cyc[(cyc.index(x) + 1) % len(cyc)]
        mapping[p] = x
    return canonical_cycles(mapping)


def cycles_str(c: Cycles) -> str:
    if not c:
        return "()"
    return "".join("(" + " ".join(map(str, cyc)) + ")" for cyc in c)


def cycles_to_images(c: Cycles, degree: int) -> tuple:
    images = list(range(degree))
    for cyc in c:
        for p in cyc:
            if not 1 <= p <= degree:
                raise ValueError(f"point {p} outside 1..{degree}")
        for a, b in zip(cyc, cyc[1:]):
            images[a - 1] = b - 1
        images[cyc[-1] - 1] = cyc[0] - 1
    return tuple(images)


# ----------------------------------------------------------------------
# document structure


@dataclass
class GroupDecl:
    name: str
    degree: int
    generators: list  # list of Cycles
    line: int = dfield(default=0, compare=False)


@dataclass
class BasisDecl:
    label: str
    degree: Cycles
    line: int = dfield(default=0, compare=False)


@dataclass
class ActionRule:
    perm: Cycles
    images: dict  # label -> (sign, label)
    line: int = dfield(default=0, compare=False)


@dataclass
class ModuleDecl:
    name: str
    basis: list
    actions: list
    line: int = dfield(default=0, compare=False)


@dataclass
class AlgebraDecl:
    name: str
    module_name: str
    relations: list  # list of Poly; empty means the free algebra
    truncate: int = 0
    line: int = dfield(default=0, compare=False)


@dataclass
class CoidealDecl:
    name: str
    generators: list  # list of Poly
    line: int = dfield(default=0, compare=False)


@dataclass
class TaskDecl:
    kind: str
    args: list
    line: int = dfield(default=0, compare=False)


@dataclass
class SpecDocument:
    group: GroupDecl
    module: ModuleDecl
    algebra: AlgebraDecl
    coideals: list
    tasks: list

    def coideal_names(self) -> list[str]:
        return [c.name for c in self.coideals]


# ----------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+|\#[^\n]*)
      | (?P<arrow>->)
      | (?P<int>\d+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<sym>[;,{}()=/:+\-*^])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str  # 'int' | 'name' | symbol text | 'arrow' | 'eof'
    value: str
    line: int
    col: int


def _lex(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "sym":
                kind = lexeme
            elif kind == "arrow":
                kind = "->"
            tokens.append(Token(kind, lexeme, line, col))
        nl = lexeme.count("\n")
        if nl:
            line += nl
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# ----------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0
        self.labels: list[str] = []
        self.group_name = None
        self.module_name = None
        self.algebra_name = None
        self.coideal_names: list[str] = []

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind:
            expected = what or repr(kind)
            raise DslSyntaxError(
                f"expected {expected}, found {t.value!r}", t.line, t.col
            )
        return self.next()

    def expect_keyword(self, word: str) -> Token:
        t = self.peek()
        if t.kind != "name" or t.value != word:
            raise DslSyntaxError(f"expected {word!r}, found {t.value!r}", t.line, t.col)
        return self.next()

    def at_keyword(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "name" and t.value == word

    # -- permutations ---------------------------------------------------

    def parse_perm(self) -> Cycles:
        t = self.expect("(", "a permutation like (1 2)")
        cycle_list = []
        while True:
            points = []
            while self.peek().kind == "int":
                points.append(int(self.next().value))
            self.expect(")")
            if points:
                if len(set(points)) != len(points):
                    raise DslSyntaxError("repeated point in cycle", t.line, t.col)
                cycle_list.append(tuple(points))
            if self.peek().kind != "(":
                break
            self.next()
        return compose_cycles(cycle_list)

    # -- expressions ----------------------------------------------------

    def parse_expr(self) -> Poly:
        poly = self.parse_term(negate=self._eat_sign())
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            term = self.parse_term(negate=(op == "-"))
            for w, c in term.items():
                v = poly.get(w, 0) + c
                if v:
                    poly[w] = v
                else:
                    poly.pop(w, None)
        return poly

    def _eat_sign(self) -> bool:
        if self.peek().kind == "-":
            self.next()
            return True
        if self.peek().kind == "+":
            self.next()
        return False

    def parse_term(self, negate: bool) -> Poly:
        poly = self.parse_factor()
        while self.peek().kind == "*":
            self.next()
            poly = _poly_mul(poly, self.parse_factor())
        if negate:
            poly = {w: -c for w, c in poly.items()}
        return poly

    def parse_factor(self) -> Poly:
        base = self.parse_atom()
        if self.peek().kind == "^":
            self.next()
            t = self.expect("int", "an exponent")
            power = int(t.value)
            out: Poly = {(): Fraction(1)}
            for _ in range(power):
                out = _poly_mul(out, base)
            return out
        return base

    def parse_atom(self) -> Poly:
        t = self.peek()
        if t.kind == "int":
            self.next()
            num = int(t.value)
            den = 1
            if self.peek().kind == "/" and self.tokens[self.pos + 1].kind == "int":
                self.next()
                den = int(self.next().value)
            return {(): Fraction(num, den)}
        if t.kind == "name":
            self.next()
            if t.value not in self.labels:
                raise DslNameError(f"undeclared basis label {t.value!r}", t.line, t.col)
            return {(t.value,): Fraction(1)}
        if t.kind == "(":
            self.next()
            poly = self.parse_expr()
            self.expect(")")
            return poly
        raise DslSyntaxError(
            f"expected a number, basis label or '(', found {t.value!r}", t.line, t.col
        )

    # -- statements -----------------------------------------------------

    def parse_document(self) -> SpecDocument:
        group = module = algebra = None
        coideals: list[CoidealDecl] = []
        tasks: list[TaskDecl] = []
        while self.peek().kind != "eof":
            t = self.peek()
            if self.at_keyword("group"):
                if group is not None:
                    raise DslSyntaxError("duplicate group declaration", t.line, t.col)
                group = self.parse_group()
            elif self.at_keyword("module"):
                if group is None:
                    raise DslNameError("module declared before the group", t.line, t.col)
                if module is not None:
                    raise DslSyntaxError("duplicate module declaration", t.line, t.col)
                module = self.parse_module()
            elif self.at_keyword("algebra"):
                if module is None:
                    raise DslNameError("algebra declared before the module", t.line, t.col)
                if algebra is not None:
                    raise DslSyntaxError("duplicate algebra declaration", t.line, t.col)
                algebra = self.parse_algebra()
            elif self.at_keyword("coideal"):
                if algebra is None:
                    raise DslNameError("coideal declared before the algebra", t.line, t.col)
                coideals.append(self.parse_coideal())
            elif self.at_keyword("task"):
                tasks.append(self.parse_task())
            else:
                raise DslSyntaxError(
                    "expected 'group', 'module', 'algebra', 'coideal' or 'task', "
                    f"found {t.value!r}",
                    t.line,
                    t.col,
                )
        if group is None or module is None or algebra is None:
            t = self.peek()
            raise DslSyntaxError(
                "a document needs group, module and algebra declarations", t.line, t.col
            )
        return SpecDocument(group, module, algebra, coideals, tasks)

    def parse_group(self) -> GroupDecl:
        t0 = self.expect_keyword("group")
        name = self.expect("name", "a group name").value
        self.expect_keyword("permutation")
        self.expect_keyword("degree")
        degree = int(self.expect("int", "the permutation degree").value)
        self.expect_keyword("generators")
        gens = []
        if self.peek().kind == "(":
            gens.append(self.parse_perm())
            while self.peek().kind == ",":
                self.next()
                gens.append(self.parse_perm())
        self.expect(";")
        self.group_name = name
        return GroupDecl(name, degree, gens, line=t0.line)

    def parse_module(self) -> ModuleDecl:
        t0 = self.expect_keyword("module")
        name = self.expect("name", "a module name").value
        self.expect("{")
        basis: list[BasisDecl] = []
        actions: list[ActionRule] = []
        while self.peek().kind != "}":
            if self.at_keyword("basis"):
                t = self.next()
                label = self.expect("name", "a basis label").value
                if label in self.labels:
                    raise DslNameError(f"duplicate basis label {label!r}", t.line, t.col)
                self.expect_keyword("deg")
                perm = self.parse_perm()
                self.expect(";")
                self.labels.append(label)
                basis.append(BasisDecl(label, perm, line=t.line))
            elif self.at_keyword("action"):
                t = self.next()
                perm = self.parse_perm()
                self.expect(":")
                images: dict = {}
                while True:
                    lt = self.expect("name", "a basis label")
                    if lt.value not in self.labels:
                        raise DslNameError(
                            f"undeclared basis label {lt.value!r}", lt.line, lt.col
                        )
                    self.expect("->")
                    sign = 1
                    if self.peek().kind == "-":
                        self.next()
                        sign = -1
                    elif self.peek().kind == "+":
                        self.next()
                    rt = self.expect("name", "a basis label")
                    if rt.value not in self.labels:
                        raise DslNameError(
                            f"undeclared basis label {rt.value!r}", rt.line, rt.col
                        )
                    if lt.value in images:
                        raise DslArityError(
                            f"duplicate image for {lt.value!r}", lt.line, lt.col
                        )
                    images[lt.value] = (sign, rt.value)
                    if self.peek().kind != ",":
                        break
                    self.next()
                self.expect(";")
                actions.append(ActionRule(perm, images, line=t.line))
            else:
                t = self.peek()
                raise DslSyntaxError(
                    f"expected 'basis', 'action' or '}}', found {t.value!r}", t.line, t.col
                )
        self.expect("}")
        self.module_name = name
        return ModuleDecl(name, basis, actions, line=t0.line)

    def parse_algebra(self) -> AlgebraDecl:
        t0 = self.expect_keyword("algebra")
        name = self.expect("name", "an algebra name").value
        self.expect("=")
        self.expect_keyword("T")
        self.expect("(")
        t = self.expect("name", "the module name")
        if t.value != self.module_name:
            raise DslNameError(f"unknown module {t.value!r}", t.line, t.col)
        self.expect(")")
        relations: list[Poly] = []
        if self.peek().kind == "/":
            self.next()
            self.expect_keyword("relations")
            self.expect("{")
            while self.peek().kind != "}":
                relations.append(self.parse_expr())
                self.expect(";")
            self.expect("}")
        self.expect_keyword("truncate")
        truncate = int(self.expect("int", "the truncation degree").value)
        self.expect(";")
        self.algebra_name = name
        return AlgebraDecl(name, t.value, relations, truncate, line=t0.line)

    def parse_coideal(self) -> CoidealDecl:
        t0 = self.expect_keyword("coideal")
        name = self.expect("name", "a coideal name").value
        if name in self.coideal_names:
            raise DslNameError(f"duplicate coideal name {name!r}", t0.line, t0.col)
        self.expect("=")
        self.expect_keyword("subalgebra")
        self.expect("{")
        gens: list[Poly] = []
        if self.peek().kind != "}":
            gens.append(self.parse_expr())
            while self.peek().kind == ",":
                self.next()
                gens.append(self.parse_expr())
        self.expect("}")
        self.expect(";")
        self.coideal_names.append(name)
        return CoidealDecl(name, gens, line=t0.line)

    def parse_task(self) -> TaskDecl:
        t0 = self.expect_keyword("task")
        kind_t = self.expect("name", "a task kind")
        if kind_t.value not in TASK_KINDS:
            raise DslSyntaxError(
                f"unknown task {kind_t.value!r} (expected one of {', '.join(TASK_KINDS)})",
                kind_t.line,
                kind_t.col,
            )
        args = []
        while self.peek().kind == "name":
            args.append(self.next().value)
        self.expect(";")
        if kind_t.value in ("decompose", "canmap", "freeness", "hopfmod"):
            for a in args:
                if a not in self.coideal_names:
                    raise DslNameError(f"undeclared coideal {a!r}", t0.line, t0.col)
        return TaskDecl(kind_t.value, args, line=t0.line)


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            v = out.get(w, 0) + ca * cb
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def parse(text: str) -> SpecDocument:
    """Parse a document; diagnostics carry line and column."""
    return _Parser(text).parse_document()


# ----------------------------------------------------------------------
# canonical printer


def print_document(doc: SpecDocument) -> str:
    out = []
    g = doc.group
    gens = ", ".join(cycles_str(c) for c in g.generators)
    out.append(f"group {g.name} permutation degree {g.degree} generators {gens};")
    out.append("")
    m = doc.module
    out.append(f"module {m.name} {{")
    for b in m.basis:
        out.append(f"  basis {b.label} deg {cycles_str(b.degree)};")
    for rule in m.actions:
        images = ", ".join(
            f"{lb} -> {'-' if sign < 0 else ''}{target}"
            for lb, (sign, target) in rule.images.items()
        )
        out.append(f"  action {cycles_str(rule.perm)}: {images};")
    out.append("}")
    out.append("")
    a = doc.algebra
    if a.relations:
        out.append(f"algebra {a.name} = T({a.module_name}) / relations {{")
        for rel in a.relations:
            out.append(f"  {format_word_poly(rel)};")
        out.append(f"}} truncate {a.truncate};")
    else:
        out.append(f"algebra {a.name} = T({a.module_name}) truncate {a.truncate};")
    if doc.coideals:
        out.append("")
        for c in doc.coideals:
            gens = ", ".join(format_word_poly(p) for p in c.generators)
            out.append(f"coideal {c.name} = subalgebra {{ {gens} }};")
    if doc.tasks:
        out.append("")
        for t in doc.tasks:
            args = (" " + " ".join(t.args)) if t.args else ""
            out.append(f"task {t.kind}{args};")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# builtin family: transposition modules over symmetric groups


def fk(n: int) -> SpecDocument:
    """The document for the quadratic transposition-module quotient over S_n.

    Generators v_ij (i < j) carry degree (i j); the action is
    sigma . v_ij = v_{sigma(i) sigma(j)} with v_ji = -v_ij resolved into
    signs.  Relations: squares, the two sign-normalized three-cycle sums
    per triple, and commutators of disjoint transpositions.  Default
    truncation: 4 for n=2, 6 for n=3, 13 for n=4 (enough to see the top
    degree and the first vanishing one), 4 otherwise.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    label = {p: f"v{p[0]}{p[1]}" for p in pairs}

    gen_cycles: list[Cycles] = [((1, 2),)]
    if n > 2:
        gen_cycles.append((tuple(range(1, n + 1)),))
    group = GroupDecl(f"S{n}", n, gen_cycles)

    basis = [BasisDecl(label[p], ((p[0], p[1]),)) for p in pairs]
    actions = []
    for c in gen_cycles:
        images = {}
        perm = cycles_to_images(c, n)
        for (i, j) in pairs:
            a, b = perm[i - 1] + 1, perm[j - 1] + 1
            sign = 1
            if a > b:
                a, b, sign = b, a, -1
            images[label[(i, j)]] = (sign, label[(a, b)])
        actions.append(ActionRule(c, images))
    module = ModuleDecl("V", basis, actions)

    def vterm(i, j):
        if i < j:
            return label[(i, j)], 1
        return label[(j, i)], -1

    relations: list[Poly] = []
    for p in pairs:
        relations.append({(label[p], label[p]): Fraction(1)})
    seen = set()
    for (i, j, k) in itertools.permutations(range(1, n + 1), 3):
        (l1, s1), (l2, s2), (l3, s3) = vterm(i, j), vterm(j, k), vterm(k, i)
        poly: Poly = {}
        for (x, y, s) in ((l1, l2, s1 * s2), (l2, l3, s2 * s3), (l3, l1, s3 * s1)):
            v = poly.get((x, y), 0) + s
            if v:
                poly[(x, y)] = Fraction(v)
            else:
                poly.pop((x, y), None)
        lead = min(poly)
        if poly[lead] < 0:
            poly = {w: -c for w, c in poly.items()}
        key = tuple(sorted((w, c) for w, c in poly.items()))
        if key not in seen:
            seen.add(key)
            relations.append(poly)
    for x in range(len(pairs)):
        for y in range(x + 1, len(pairs)):
            if not set(pairs[x]) & set(pairs[y]):
                relations.append(
                    {
                        (label[pairs[x]], label[pairs[y]]): Fraction(1),
                        (label[pairs[y]], label[pairs[x]]): Fraction(-1),
                    }
                )
    truncate = {2: 4, 3: 6, 4: 13}.get(n, 4)
    algebra = AlgebraDecl(f"FK{n}", "V", relations, truncate)

    subsets: list[tuple] = []
    if n == 3:
        for size in (1, 2, 3):
            subsets.extend(itertools.combinations(pairs, size))
    else:
        subsets.extend((p,) for p in pairs)
    coideals = [
        CoidealDecl(
            "K" + "_".join(f"{i}{j}" for (i, j) in subset),
            [{(label[p],): Fraction(1)} for p in subset],
        )
        for subset in subsets
    ]

    tasks = [TaskDecl("check", []), TaskDecl("hilbert", [])]
    for subset in subsets:
        if len(subset) == 1:
            name = "K" + "".join(f"{i}{j}" for (i, j) in subset)
            tasks.append(TaskDecl("decompose", [name]))
    return SpecDocument(group, module, algebra, coideals, tasks)


# ----------------------------------------------------------------------
# elaboration


@dataclass
class Elaboration:
    document: SpecDocument
    group: FiniteGroup
    module: YDModule
    algebra: GradedAlgebra
    coideals: dict  # name -> CoidealSubalgebra, declaration order


def _fail(stmt_line: int, err: EngineError):
    raise type(err)(f"{err} (declared at line {stmt_line})") from err


def elaborate(doc: SpecDocument, field=QQ, max_degree: int | None = None) -> Elaboration:
    """Build the declared structures, checking each layer before the next.

    Order: group closure, module + Yetter-Drinfeld check, relation
    homogeneity + quotient construction (with the coideal and action
    stability checks), then each coideal subalgebra.  The first failure
    aborts, annotated with the declaration's line.
    """
    g = doc.group
    try:
        gens = [cycles_to_images(c, g.degree) for c in g.generators]
        group = FiniteGroup.from_permutation_generators(g.degree, gens)
    except (ValueError, EngineError) as e:
        raise ElaborationError(str(e), g.line, 1) from e

    m = doc.module
    labels = [b.label for b in m.basis]
    label_idx = {lb: i for i, lb in enumerate(labels)}
    degrees = []
    for b in m.basis:
        try:
            p = cycles_to_images(b.degree, g.degree)
        except ValueError as e:
            raise ElaborationError(str(e), b.line, 1) from e
        idx = group.index.get(p)
        if idx is None:
            raise ElaborationError(
                f"degree {cycles_str(b.degree)} of {b.label} is not a group element",
                b.line,
                1,
            )
        degrees.append(idx)
    rule_of: dict[int, ActionRule] = {}
    for rule in m.actions:
        p = cycles_to_images(rule.perm, g.degree)
        idx = group.index.get(p)
        if idx is None or idx not in group.generator_indices:
            raise ElaborationError(
                f"action rule for {cycles_str(rule.perm)}, which is not a declared generator",
                rule.line,
                1,
            )
        rule_of[idx] = rule
    generator_action = {}
    for gi in group.generator_indices:
        rule = rule_of.get(gi)
        if rule is None:
            raise DslArityError(
                f"no action rule for generator {group.element(gi)!r}", m.line, 1
            )
        cols = []
        for lb in labels:
            if lb not in rule.images:
                raise DslArityError(
                    f"action of {group.element(gi)!r} does not cover {lb!r}", rule.line, 1
                )
            sign, target = rule.images[lb]
            cols.append({label_idx[target]: field.of(sign)})
        generator_action[gi] = cols
    module = YDModule.from_generator_action(group, labels, degrees, generator_action, field)
    yv = check_yd(module)
    if not yv.ok:
        raise ElaborationError(f"not a Yetter-Drinfeld module: {yv.witness}", m.line, 1)

    a = doc.algebra
    bound = a.truncate if max_degree is None else max_degree
    rels = []
    for poly in a.relations:
        rels.append(
            {
                tuple(label_idx[lb] for lb in w): field.of(c.numerator, c.denominator)
                for w, c in poly.items()
            }
        )
    try:
        algebra = GradedAlgebra(module, rels, bound)
    except EngineError as e:
        _fail(a.line, e)

    coideals = {}
    for c in doc.coideals:
        try:
            gens_elts = [
                algebra.element(
                    {
                        tuple(label_idx[lb] for lb in w): field.of(cc.numerator, cc.denominator)
                        for w, cc in poly.items()
                    }
                )
                for poly in c.generators
            ]
            coideals[c.name] = generate_subalgebra(algebra, gens_elts)
        except EngineError as e:
            _fail(c.line, e)
    return Elaboration(doc, group, module, algebra, coideals)
