"""Interned intuitionistic propositional formulas.

Formulas are hash-consed: building the same tree twice returns the same
object, so identity comparison (``is``) is structural equality and every
formula is a DAG with maximal sharing.

    >>> f = parse("x1 -> x2 | x1")
    >>> f is implies(atom(1), disj(atom(2), atom(1)))
    True
    >>> str(parse("~x1"))
    '~x1'
"""
from __future__ import annotations

import threading
from enum import IntEnum
from typing import Iterable, Iterator, Sequence


class Kind(IntEnum):
    BOT = 0
    TOP = 1
    ATOM = 2
    AND = 3
    OR = 4
    IMP = 5


class ParseError(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"at position {position}: {message}")
        self.position = position
        self.message = message


class AtomOutOfRange(ValueError):
    pass


class Formula:
    """A node of the shared formula DAG. Never instantiate directly."""

    __slots__ = ("kind", "left", "right", "atom", "uid", "__weakref__")

    def __init__(self, kind, left, right, atom, uid):
        self.kind = kind
        self.left = left
        self.right = right
        self.atom = atom
        self.uid = uid

    def __repr__(self):
        return f"Formula({self})"

    def __hash__(self):
        return self.uid  # deterministic set/dict iteration across runs

    def __str__(self):
        return to_text(self)

    def __and__(self, other):
        return conj(self, other)

    def __or__(self, other):
        return disj(self, other)

    def __rshift__(self, other):
        return implies(self, other)

    def __invert__(self):
        return neg(self)

    def __reduce__(self):
        # re-intern on unpickle so identity semantics survive process boundaries
        return (_rebuild, (self.kind, self.left, self.right, self.atom))

    @property
    def children(self) -> tuple[Formula, ...]:
        if self.kind >= Kind.AND:
            return (self.left, self.right)
        return ()

    @property
    def is_negation(self) -> bool:
        return self.kind is Kind.IMP and self.right.kind is Kind.BOT


class _Store:
    """Append-only intern table; inserts are serialized, lookups are lock-free."""

    def __init__(self):
        self._table: dict[tuple, Formula] = {}
        self._lock = threading.Lock()

    def get(self, kind, left=None, right=None, atom=0):
        key = (kind, left.uid if left is not None else -1,
               right.uid if right is not None else -1, atom)
        f = self._table.get(key)
        if f is not None:
            return f
        with self._lock:
            f = self._table.get(key)
            if f is None:
                f = Formula(kind, left, right, atom, len(self._table))
                self._table[key] = f
        return f

    def __len__(self):
        return len(self._table)


_STORE = _Store()


def _rebuild(kind, left, right, atom):
    return _STORE.get(kind, left, right, atom)


def bottom() -> Formula:
    return _STORE.get(Kind.BOT)


def top() -> Formula:
    return _STORE.get(Kind.TOP)


def atom(index: int) -> Formula:
    if index < 1:
        raise AtomOutOfRange(f"atom index must be >= 1, got {index}")
    return _STORE.get(Kind.ATOM, atom=index)


def conj(a: Formula, b: Formula) -> Formula:
    return _STORE.get(Kind.AND, a, b)


def disj(a: Formula, b: Formula) -> Formula:
    return _STORE.get(Kind.OR, a, b)


def implies(a: Formula, b: Formula) -> Formula:
    return _STORE.get(Kind.IMP, a, b)


def neg(a: Formula) -> Formula:
    return implies(a, bottom())


def big_and(parts: Iterable[Formula]) -> Formula:
    """Right fold of conjunction; the empty conjunction is T."""
    parts = list(parts)
    if not parts:
        return top()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = conj(p, out)
    return out


def big_or(parts: Iterable[Formula]) -> Formula:
    """Right fold of disjunction; the empty disjunction is F."""
    parts = list(parts)
    if not parts:
        return bottom()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = disj(p, out)
    return out


def max_atom(f: Formula) -> int:
    best = 0
    for g in iter_dag(f):
        if g.kind is Kind.ATOM and g.atom > best:
            best = g.atom
    return best


def iter_dag(f: Formula) -> Iterator[Formula]:
    """Distinct sub-DAG nodes of ``f`` in postorder (children first)."""
    seen: set[int] = set()
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if g.uid in seen:
            continue
        if expanded or g.kind < Kind.AND:
            seen.add(g.uid)
            yield g
            continue
        stack.append((g, True))
        stack.append((g.right, False))
        stack.append((g.left, False))


def dag_size(f: Formula) -> int:
    return sum(1 for _ in iter_dag(f))


def tree_size(f: Formula) -> int:
    sizes: dict[int, int] = {}
    for g in iter_dag(f):
        if g.kind >= Kind.AND:
            sizes[g.uid] = 1 + sizes[g.left.uid] + sizes[g.right.uid]
        else:
            sizes[g.uid] = 1
    return sizes[f.uid]


def connective_count(f: Formula) -> int:
    """Connectives in the printed form: ``~p`` counts once, constants count zero."""
    counts: dict[int, int] = {}
    for g in iter_dag(f):
        if g.kind < Kind.AND:
            counts[g.uid] = 0
        elif g.is_negation:
            counts[g.uid] = 1 + counts[g.left.uid]
        else:
            counts[g.uid] = 1 + counts[g.left.uid] + counts[g.right.uid]
    return counts[f.uid]


class SubformulaClosure:
    """Distinct subformulas of ``root``, children before parents."""

    __slots__ = ("root", "members", "index")

    def __init__(self, root: Formula):
        self.root = root
        self.members: tuple[Formula, ...] = tuple(iter_dag(root))
        self.index: dict[Formula, int] = {g: i for i, g in enumerate(self.members)}

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, f):
        return f in self.index

    def __repr__(self):
        return f"SubformulaClosure({self.root}, size={len(self)})"


def subformula_closure(f: Formula) -> SubformulaClosure:
    return SubformulaClosure(f)


def rn_ladder(depth: int) -> list[tuple[str, Formula]]:
    """The one-variable ladder: F, T, then phi_i, psi_i for i = 1..depth.

    phi_1 = ~x1, psi_1 = x1, phi_{i+1} = phi_i -> psi_i, psi_{i+1} = phi_i | psi_i.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out = [("bot", bottom()), ("top", top())]
    phi, psi = neg(atom(1)), atom(1)
    for i in range(1, depth + 1):
        out.append((f"phi{i}", phi))
        out.append((f"psi{i}", psi))
        phi, psi = implies(phi, psi), disj(phi, psi)
    return out


# -- printing ---------------------------------------------------------------

_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_NEG, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(f: Formula) -> int:
    k = f.kind
    if k is Kind.IMP:
        return _PREC_NEG if f.right.kind is Kind.BOT else _PREC_IMP
    if k is Kind.OR:
        return _PREC_OR
    if k is Kind.AND:
        return _PREC_AND
    return _PREC_ATOM


def to_text(f: Formula) -> str:
    out: list[str] = []
    # explicit stack: ("f", formula, min_prec) or ("s", literal)
    stack: list[tuple] = [("f", f, 0)]
    while stack:
        item = stack.pop()
        if item[0] == "s":
            out.append(item[1])
            continue
        _, g, min_prec = item
        p = _prec(g)
        parts: list[tuple] = []
        if g.kind is Kind.BOT:
            parts.append(("s", "F"))
        elif g.kind is Kind.TOP:
            parts.append(("s", "T"))
        elif g.kind is Kind.ATOM:
            parts.append(("s", f"x{g.atom}"))
        elif p == _PREC_NEG:
            parts += [("s", "~"), ("f", g.left, _PREC_NEG)]
        elif g.kind is Kind.IMP:
            parts += [("f", g.left, _PREC_OR), ("s", " -> "), ("f", g.right, _PREC_IMP)]
        elif g.kind is Kind.OR:
            parts += [("f", g.left, _PREC_OR), ("s", " | "), ("f", g.right, _PREC_AND)]
        else:
            parts += [("f", g.left, _PREC_AND), ("s", " & "), ("f", g.right, _PREC_NEG)]
        if p < min_prec:
            parts = [("s", "(")] + parts + [("s", ")")]
        stack.extend(reversed(parts))
    return "".join(out)


# -- parsing ----------------------------------------------------------------

def _tokenize(text: str) -> list[tuple[int, str]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif text.startswith("->", i):
            tokens.append((i, "->"))
            i += 2
        elif c in "~&|()FT":
            tokens.append((i, c))
            i += 1
        elif c == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            digits = text[i + 1:j]
            if not digits or digits[0] == "0":
                raise ParseError(i, "malformed atom")
            tokens.append((i, text[i:j]))
            i = j
        else:
            raise ParseError(i, f"unexpected character {c!r}")
    tokens.append((len(text), "$"))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.n = n

    def peek(self) -> str:
        return self.tokens[self.pos][1]

    def take(self, expected: str | None = None) -> tuple[int, str]:
        tok = self.tokens[self.pos]
        if expected is not None and tok[1] != expected:
            raise ParseError(tok[0], f"expected {expected!r}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def formula(self) -> Formula:
        left = self.or_()
        if self.peek() == "->":
            self.take()
            return implies(left, self.formula())
        return left

    def or_(self) -> Formula:
        f = self.and_()
        while self.peek() == "|":
            self.take()
            f = disj(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        position, tok = self.take()
        if tok == "~":
            return neg(self.unary())
        if tok == "(":
            f = self.formula()
            self.take(")")
            return f
        if tok == "F":
            return bottom()
        if tok == "T":
            return top()
        if tok.startswith("x"):
            index = int(tok[1:])
            if self.n is not None and index > self.n:
                raise AtomOutOfRange(f"atom {tok} at position {position} exceeds n={self.n}")
            return atom(index)
        raise ParseError(position, f"unexpected token {tok!r}")


def parse(text: str, n: int | None = None) -> Formula:
    p = _Parser(text, n)
    f = p.formula()
    if p.peek() != "$":
        raise ParseError(p.tokens[p.pos][0], f"trailing input {p.peek()!r}")
    return f


def parse_many(texts: Sequence[str], n: int | None = None) -> list[Formula]:
    return [parse(t, n) for t in texts]


def generate_formulas(max_connectives: int, atoms: Sequence[int] = (1, 2),
                      constants: bool = False, commutative: bool = True) -> list[Formula]:
    """Every formula with at most ``max_connectives`` connectives, by increasing size.

    Leaves are the given atoms (plus F and T when ``constants``); connectives
    are ``~ & | ->``. With ``commutative`` set, ``a & b`` and ``b & a`` (and
    likewise for ``|``) are generated once.
    """
    layers: list[list[Formula]] = [[atom(a) for a in atoms] + ([bottom(), top()] if constants else [])]
    for c in range(1, max_connectives + 1):
        layer: list[Formula] = [neg(a) for a in layers[c - 1]]
        seen = set(layer)
        for i in range(c):
            j = c - 1 - i
            for pa, a in enumerate(layers[i]):
                for pb, b in enumerate(layers[j]):
                    for op in (conj, disj, implies):
                        if commutative and op is not implies and (i, pa) > (j, pb):
                            continue
                        f = op(a, b)
                        if f not in seen:
                            seen.add(f)
                            layer.append(f)
        layers.append(layer)
    return [f for layer in layers for f in layer]
