"""Interval STL formula trees and their text form."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from pacstl.errors import InputError


class SpecNode:
    """Base class of formula nodes."""

    def atomics(self) -> list:
        out = []
        for c in self.children_nodes():
            for a in c.atomics():
                if a not in out:
                    out.append(a)
        return out

    def children_nodes(self) -> tuple:
        return ()

    def count_atomics(self) -> int:
        if isinstance(self, Atomic):
            return 1
        return sum(c.count_atomics() for c in self.children_nodes())


@dataclass(frozen=True)
class Atomic(SpecNode):
    name: str

    def atomics(self):
        return [self.name]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not(SpecNode):
    child: SpecNode

    def children_nodes(self):
        return (self.child,)

    def __str__(self):
        return f"(not {self.child})"


def _nonempty(children, op):
    children = tuple(children)
    if not children:
        raise InputError(f"{op} needs at least one operand")
    return children


@dataclass(frozen=True)
class And(SpecNode):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", _nonempty(self.children, "and"))

    def children_nodes(self):
        return self.children

    def __str__(self):
        return "(and " + " ".join(map(str, self.children)) + ")"


@dataclass(frozen=True)
class Or(SpecNode):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", _nonempty(self.children, "or"))

    def children_nodes(self):
        return self.children

    def __str__(self):
        return "(or " + " ".join(map(str, self.children)) + ")"


def _window(lo, hi):
    lo, hi = float(lo), float(hi)
    if not (0.0 <= lo <= hi) or math.isinf(hi):
        raise InputError(f"temporal window needs 0 <= lo <= hi < inf, got [{lo}, {hi}]")
    return lo, hi


@dataclass(frozen=True)
class Globally(SpecNode):
    lo: float
    hi: float
    child: SpecNode

    def __post_init__(self):
        lo, hi = _window(self.lo, self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def children_nodes(self):
        return (self.child,)

    def __str__(self):
        return f"(G {self.lo:g} {self.hi:g} {self.child})"


@dataclass(frozen=True)
class Eventually(SpecNode):
    lo: float
    hi: float
    child: SpecNode

    def __post_init__(self):
        lo, hi = _window(self.lo, self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def children_nodes(self):
        return (self.child,)

    def __str__(self):
        return f"(F {self.lo:g} {self.hi:g} {self.child})"


@dataclass(frozen=True)
class Until(SpecNode):
    lo: float
    hi: float
    left: SpecNode
    right: SpecNode

    def __post_init__(self):
        lo, hi = _window(self.lo, self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def children_nodes(self):
        return (self.left, self.right)

    def __str__(self):
        return f"(U {self.lo:g} {self.hi:g} {self.left} {self.right})"


def to_steps(seconds: float, dt: float) -> int:
    """Window end point in grid steps; must be an integer multiple of ``dt``."""
    if dt <= 0:
        raise InputError("dt must be positive")
    k = seconds / dt
    n = int(round(k))
    if abs(k - n) > 1e-9 * max(1.0, abs(k)):
        raise InputError(f"window bound {seconds} is not a multiple of dt={dt}")
    return n


def horizon(spec: SpecNode, dt: float) -> int:
    """Steps of signal needed beyond the evaluation time."""
    if dt <= 0:
        raise InputError("dt must be positive")
    if isinstance(spec, Atomic):
        return 0
    if isinstance(spec, Not):
        return horizon(spec.child, dt)
    if isinstance(spec, (And, Or)):
        return max(horizon(c, dt) for c in spec.children)
    if isinstance(spec, (Globally, Eventually)):
        to_steps(spec.lo, dt)
        return to_steps(spec.hi, dt) + horizon(spec.child, dt)
    if isinstance(spec, Until):
        to_steps(spec.lo, dt)
        return to_steps(spec.hi, dt) + max(horizon(spec.left, dt), horizon(spec.right, dt))
    raise InputError(f"unknown formula node {type(spec).__name__}")


_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def parse(text: str) -> SpecNode:
    """Parse the prefix form, e.g. ``(and (not enc) (G 1.0 2.5 enc))``.

    Operators: ``not``, ``and``, ``or``, ``G``/``always``, ``F``/``eventually``,
    ``U``/``until``; any other bare word is an atomic proposition.
    """
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise InputError("empty formula")
    node, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise InputError(f"unexpected trailing input at token {pos}: {tokens[pos]!r}")
    return node


def _number(tok: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise InputError(f"expected a number, got {tok!r}") from None


def _parse(tokens, pos):
    if pos >= len(tokens):
        raise InputError("unexpected end of formula")
    tok = tokens[pos]
    if tok == ")":
        raise InputError("unbalanced ')'")
    if tok != "(":
        if not _NAME.match(tok):
            raise InputError(f"invalid atomic name {tok!r}")
        return Atomic(tok), pos + 1
    if pos + 1 >= len(tokens):
        raise InputError("unexpected end of formula")
    op = tokens[pos + 1].lower()
    pos += 2
    if op in ("g", "always", "f", "eventually", "u", "until"):
        if pos + 1 >= len(tokens):
            raise InputError(f"operator {op!r} needs a time window")
        lo, hi = _number(tokens[pos]), _number(tokens[pos + 1])
        pos += 2
    args = []
    while pos < len(tokens) and tokens[pos] != ")":
        node, pos = _parse(tokens, pos)
        args.append(node)
    if pos >= len(tokens):
        raise InputError("missing ')'")
    pos += 1

    def arity(k):
        if len(args) != k:
            raise InputError(f"operator {op!r} takes {k} operand(s), got {len(args)}")

    if op == "not":
        arity(1)
        return Not(args[0]), pos
    if op == "and":
        return And(tuple(args)), pos
    if op == "or":
        return Or(tuple(args)), pos
    if op in ("g", "always"):
        arity(1)
        return Globally(lo, hi, args[0]), pos
    if op in ("f", "eventually"):
        arity(1)
        return Eventually(lo, hi, args[0]), pos
    if op in ("u", "until"):
        arity(2)
        return Until(lo, hi, args[0], args[1]), pos
    raise InputError(f"unknown operator {op!r}")
