"""Standard factorization of Lyndon words and the factorization tree."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import _kernels
from .words import Word, is_lyndon


@dataclass(frozen=True)
class StandardFactorization:
    """``w = u v`` with ``v`` the least proper suffix of ``w``."""

    u: Word
    v: Word

    @property
    def r_len(self) -> int:
        return len(self.v)

    @property
    def n(self) -> int:
        return len(self.u) + len(self.v)

    @property
    def ratio(self) -> float:
        return self.r_len / self.n

    def to_dict(self) -> dict:
        return {"u": str(self.u), "v": str(self.v), "R": self.r_len, "n": self.n,
                "r": round(self.ratio, 4)}


def _require_factorable(w: Word) -> None:
    if len(w) < 2:
        raise ValueError("standard factorization needs a word of length >= 2")
    if not is_lyndon(w):
        raise ValueError(f"{w} is not a Lyndon word")


def standard_right_factor(w: Word) -> StandardFactorization:
    """Split a Lyndon word at its least proper suffix in O(n).

    The least suffix of ``w[1:]`` is the last factor of its Chen-Fox-Lyndon
    factorization, which Duval's scan finds in a single pass.
    """
    _require_factorable(w)
    cut = int(_kernels.min_suffix_start(w.letters, 1))
    return StandardFactorization(w[:cut], w[cut:])


def standard_right_factor_naive(w: Word) -> StandardFactorization:
    """Same contract as :func:`standard_right_factor`, by brute-force minimum."""
    _require_factorable(w)
    b = w.tobytes()
    cut = min(range(1, len(b)), key=lambda i: b[i:])
    return StandardFactorization(w[:cut], w[cut:])


def cfl_factorization(w: Word) -> list[Word]:
    """Unique factorization into a non-increasing product of Lyndon words."""
    if len(w) == 0:
        raise ValueError("empty word")
    starts = _kernels.cfl_starts(w.letters).tolist() + [len(w)]
    return [w[s:e] for s, e in zip(starts, starts[1:])]


def enumerate_lyndon(n: int, q: int = 2) -> Iterator[Word]:
    """Yield every Lyndon word of length ``n`` in increasing order.

    Duval's successor scheme walks all Lyndon words of length at most ``n``;
    only those of length exactly ``n`` are yielded.
    """
    if n < 1 or q < 2:
        raise ValueError("need n >= 1 and q >= 2")
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            yield Word._wrap(np.array(w, dtype=np.uint8), q)
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == q - 1:
            w.pop()


@dataclass
class FactorizationTree:
    """Binary tree of recursive standard factorizations; leaves are letters."""

    word: Word
    left: Optional["FactorizationTree"] = None
    right: Optional["FactorizationTree"] = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def height(self) -> int:
        heights: dict[int, int] = {}
        for node in self._postorder():
            heights[id(node)] = 0 if node.is_leaf else 1 + max(
                heights[id(node.left)], heights[id(node.right)])
        return heights[id(self)]

    def _postorder(self) -> Iterator["FactorizationTree"]:
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if node.is_leaf or expanded:
                yield node
            else:
                stack += [(node, True), (node.right, False), (node.left, False)]

    def leaves(self) -> list[Word]:
        return [node.word for node in self._postorder() if node.is_leaf]

    def to_dict(self) -> dict:
        """Nested ``{"word": ..., "children": [...]}``; leaves have no children."""
        out: dict[int, dict] = {}
        for node in self._postorder():
            d: dict = {"word": str(node.word)}
            if not node.is_leaf:
                d["children"] = [out.pop(id(node.left)), out.pop(id(node.right))]
            out[id(node)] = d
        return out[id(self)]

    def render(self, indent: str = "  ") -> str:
        lines = []
        stack = [(self, 0)]
        while stack:
            node, depth = stack.pop()
            lines.append(f"{indent * depth}{node.word}")
            if not node.is_leaf:
                stack += [(node.right, depth + 1), (node.left, depth + 1)]
        return "\n".join(lines)


def factorization_tree(w: Word) -> FactorizationTree:
    if not is_lyndon(w):
        raise ValueError(f"{w} is not a Lyndon word")
    root = FactorizationTree(w)
    todo = [root]
    while todo:
        node = todo.pop()
        if len(node.word) == 1:
            continue
        f = standard_right_factor(node.word)
        node.left, node.right = FactorizationTree(f.u), FactorizationTree(f.v)
        todo += [node.left, node.right]
    return root
