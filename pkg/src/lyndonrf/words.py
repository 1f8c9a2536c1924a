"""Words over a finite totally ordered alphabet.

Letters are small integers ``0 .. q-1`` with ``0`` the smallest letter.
Words print as ``a, b, c, ...`` when ``q <= 26`` and as comma-separated
integers otherwise.
"""

from __future__ import annotations

import string
from typing import Iterable, Sequence, Union

import numpy as np

from . import _kernels

MAX_Q = 256
_LETTERS = string.ascii_lowercase


class AlphabetError(ValueError):
    """Raised when letters fall outside the alphabet or alphabets disagree."""


class Word:
    """An immutable word of length ``n`` over ``q`` letters.

    The letters are held in a read-only ``uint8`` array, so comparison,
    hashing and slicing go through ``bytes`` and stay in C.
    """

    __slots__ = ("_a", "q")

    def __init__(self, letters: Union[Iterable[int], np.ndarray], q: int = 2):
        if not 2 <= q <= MAX_Q:
            raise AlphabetError(f"alphabet size must be in [2, {MAX_Q}], got {q}")
        if not isinstance(letters, np.ndarray):
            letters = list(letters)
        arr = np.asarray(letters, dtype=np.int64).ravel()
        if arr.size and (arr.min() < 0 or arr.max() >= q):
            raise AlphabetError(f"letters must lie in [0, {q}), got {arr.min()}..{arr.max()}")
        self._a = arr.astype(np.uint8)
        self._a.flags.writeable = False
        self.q = q

    @classmethod
    def _wrap(cls, arr: np.ndarray, q: int) -> "Word":
        # Trusted constructor: skips validation, shares no mutable state.
        w = object.__new__(cls)
        a = np.ascontiguousarray(arr, dtype=np.uint8)
        if a.flags.writeable:
            a = a.copy()
            a.flags.writeable = False
        w._a = a
        w.q = q
        return w

    @classmethod
    def parse(cls, text: str, q: int | None = None) -> "Word":
        """Parse ``"aabab"`` or ``"0,0,1,0,1"``; infer ``q`` when not given."""
        text = text.strip()
        if not text:
            raise AlphabetError("empty word")
        if "," in text or text.isdigit():
            try:
                letters = [int(tok) for tok in text.split(",")]
            except ValueError:
                raise AlphabetError(f"cannot parse word {text!r}") from None
        else:
            if any(ch not in _LETTERS for ch in text):
                raise AlphabetError(f"letters must be a-z or comma-separated integers: {text!r}")
            letters = [ord(ch) - ord("a") for ch in text]
        if q is None:
            q = max(2, max(letters) + 1)
        return cls(letters, q)

    @property
    def letters(self) -> np.ndarray:
        return self._a

    @property
    def n(self) -> int:
        return int(self._a.shape[0])

    def __len__(self) -> int:
        return self._a.shape[0]

    def __iter__(self):
        return iter(self._a.tolist())

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Word._wrap(self._a[idx], self.q)
        return int(self._a[idx])

    def __add__(self, other: "Word") -> "Word":
        _check_same_alphabet(self, other)
        return Word._wrap(np.concatenate([self._a, other._a]), self.q)

    def tobytes(self) -> bytes:
        return self._a.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.q == other.q and self.tobytes() == other.tobytes()

    def __hash__(self) -> int:
        return hash((self.q, self.tobytes()))

    def __lt__(self, other: "Word") -> bool:
        return lex_compare(self, other) < 0

    def __le__(self, other: "Word") -> bool:
        return lex_compare(self, other) <= 0

    def __gt__(self, other: "Word") -> bool:
        return lex_compare(self, other) > 0

    def __ge__(self, other: "Word") -> bool:
        return lex_compare(self, other) >= 0

    def __str__(self) -> str:
        if self.q <= len(_LETTERS):
            return "".join(_LETTERS[c] for c in self._a.tolist())
        return ",".join(str(c) for c in self._a.tolist())

    def __repr__(self) -> str:
        return f"Word({str(self)!r}, q={self.q})"


WordLike = Union[Word, str, Sequence[int]]


def as_word(w: WordLike, q: int | None = None) -> Word:
    """Coerce strings and integer sequences to :class:`Word`."""
    if isinstance(w, Word):
        if q is not None and q != w.q:
            raise AlphabetError(f"word is over {w.q} letters, expected {q}")
        return w
    if isinstance(w, str):
        return Word.parse(w, q)
    return Word(w, 2 if q is None else q)


def _check_same_alphabet(u: Word, v: Word) -> None:
    if u.q != v.q:
        raise AlphabetError(f"alphabet mismatch: q={u.q} vs q={v.q}")


def lex_compare(u: Word, v: Word) -> int:
    """Return -1, 0 or 1; a proper prefix is smaller than its extensions."""
    _check_same_alphabet(u, v)
    a, b = u.tobytes(), v.tobytes()
    return (a > b) - (a < b)


def rotate(w: Word, k: int) -> Word:
    """Cyclic left shift by ``k``, i.e. ``tau**k`` applied to ``w``."""
    if k < 0:
        raise ValueError("rotation amount must be non-negative")
    n = len(w)
    if n == 0:
        return w
    k %= n
    return Word._wrap(np.concatenate([w.letters[k:], w.letters[:k]]), w.q)


def is_primitive(w: Word) -> bool:
    """True iff ``w`` is not a proper power ``u**d`` with ``d >= 2``."""
    if len(w) == 0:
        raise ValueError("empty word")
    return bool(_kernels.is_primitive(w.letters))


def canonical_rotation(w: Word) -> Word:
    """The unique Lyndon word in the rotation class of a primitive word."""
    if not is_primitive(w):
        raise ValueError(f"{w} is not primitive; its least rotation is not a Lyndon word")
    return rotate(w, int(_kernels.least_rotation(w.letters)))


def is_lyndon(w: Word) -> bool:
    if len(w) == 0:
        return False
    return bool(_kernels.is_lyndon(w.letters))


def is_lyndon_by_suffixes(w: Word) -> bool:
    """Lyndon test straight from the definition: smaller than each proper suffix."""
    b = w.tobytes()
    return len(b) > 0 and all(b < b[i:] for i in range(1, len(b)))


def is_lyndon_by_rotations(w: Word) -> bool:
    """Lyndon test via rotations: strictly smaller than every nontrivial rotation."""
    b = w.tobytes()
    return len(b) > 0 and all(b < b[k:] + b[:k] for k in range(1, len(b)))


def preimage_count(w: Word) -> int:
    """Size of the rotation orbit of a Lyndon word, by explicit enumeration."""
    if not is_lyndon(w):
        raise ValueError(f"{w} is not a Lyndon word")
    b = w.tobytes()
    orbit = {b[k:] + b[:k] for k in range(len(b))}
    assert len(orbit) == len(b)
    return len(orbit)
