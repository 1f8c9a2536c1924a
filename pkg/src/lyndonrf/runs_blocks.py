"""Runs, long and short blocks, good words and block permutations.

A *unit* is a maximal run of the smallest letter ``0`` together with every
following run up to (not including) the next run of ``0``. Blocks are
unions of consecutive units: a long block opens on a unit whose ``0``-run
is at least ``min_run`` long and swallows units until its length reaches
``min_block_len``; every other unit is a short block on its own.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import _kernels
from .words import Word


def _runs(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run starts, lengths and letters of a letter array."""
    n = a.shape[0]
    starts = np.concatenate(([0], np.flatnonzero(a[1:] != a[:-1]) + 1))
    lengths = np.diff(np.append(starts, n))
    return starts, lengths, a[starts]


@dataclass(frozen=True, eq=False)
class RunProfile:
    """Maximal-run decomposition of a word.

    ``num_runs`` is the run count, ``lengths`` the run lengths in order,
    ``max_run`` the longest run and ``max_run_a1`` the longest run of the
    smallest letter (0 when that letter does not occur).
    """

    letters: np.ndarray
    lengths: np.ndarray
    num_runs: int
    max_run: int
    max_run_a1: int

    @property
    def runs(self) -> list[tuple[int, int]]:
        return list(zip(self.letters.tolist(), self.lengths.tolist()))

    def to_dict(self) -> dict:
        return {"runs": self.runs, "N": self.num_runs, "M": self.max_run,
                "M_a1": self.max_run_a1}


def run_profile(w: Word) -> RunProfile:
    if len(w) == 0:
        raise ValueError("empty word")
    _, lengths, letters = _runs(w.letters)
    a1 = lengths[letters == 0]
    return RunProfile(letters, lengths, int(lengths.size), int(lengths.max()),
                      int(a1.max()) if a1.size else 0)


def _log(n: int, q: int) -> float:
    return math.log(n) / math.log(q)


def _snap(x: float) -> float:
    # log(q**k)/log(q) may land a hair off k; snap so ceil/floor stay exact
    r = round(x)
    return float(r) if abs(x - r) < 1e-9 else x


@dataclass(frozen=True)
class BlockParams:
    """Integer thresholds derived from ``(n, q, epsilon)``.

    ``max_run`` is the largest admissible run (``floor(2 log_q n)``); the
    other lengths are ceilings of their real thresholds, so every check is
    an exact integer comparison.
    """

    n: int
    q: int
    epsilon: float
    min_run: int
    min_block_len: int
    max_run: int
    min_separation: int
    h_lo: float
    h_hi: float

    @classmethod
    def for_length(cls, n: int, q: int = 2, epsilon: float = 0.2) -> "BlockParams":
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if n < 2:
            raise ValueError("n must be >= 2")
        lg = _log(n, q)
        return cls(
            n=n, q=q, epsilon=epsilon,
            min_run=max(1, math.ceil(_snap((1 - epsilon) * lg))),
            min_block_len=math.ceil(_snap(3 * lg)),
            max_run=math.floor(_snap(2 * lg)),
            min_separation=math.ceil(_snap(8 * lg)),
            h_lo=n ** epsilon / 4,
            h_hi=9 * n ** epsilon / 4,
        )

    def to_dict(self) -> dict:
        return asdict(self)


class Block(NamedTuple):
    kind: str
    start: int
    word: Word


@dataclass(eq=False)
class BlockDecomposition:
    """Blocks of a word as parallel arrays of starts, ends and kinds.

    ``flags`` names anything that kept the decomposition from being clean:
    ``leading_non_a1`` (word does not start with the smallest letter),
    ``no_long_start`` (first block is short) and ``truncated_long_block``
    (a long block ran into the end of the word). ``j0`` and ``d_n`` are set
    only when the two smallest blocks are unique and no flag is raised.
    """

    word: Word
    params: BlockParams
    starts: np.ndarray
    ends: np.ndarray
    is_long: np.ndarray
    qualifying_starts: np.ndarray
    lead_run: np.ndarray
    flags: tuple[str, ...] = ()
    j0: Optional[int] = None
    d_n: Optional[float] = None

    @property
    def H(self) -> int:
        return int(self.is_long.sum())

    @property
    def K(self) -> int:
        return int(self.starts.size)

    @property
    def lengths(self) -> np.ndarray:
        return self.ends - self.starts

    def block_bytes(self, i: int) -> bytes:
        return self.word.letters[self.starts[i]:self.ends[i]].tobytes()

    @property
    def blocks(self) -> list[Block]:
        return [Block("long" if lg else "short", int(s), self.word[int(s):int(e)])
                for s, e, lg in zip(self.starts, self.ends, self.is_long)]

    def multiset(self) -> list[bytes]:
        return sorted(self.block_bytes(i) for i in range(self.K))

    def to_dict(self) -> dict:
        return {
            "blocks": [{"kind": b.kind, "start": b.start, "word": str(b.word)} for b in self.blocks],
            "H": self.H, "K": self.K, "j0": self.j0, "d_n": self.d_n,
            "flags": list(self.flags), "params": self.params.to_dict(),
        }


def _second_smallest(dec: BlockDecomposition) -> Optional[int]:
    if dec.K < 2:
        return None
    # a longer leading 0-run makes a smaller block, so only blocks whose
    # leading run reaches the second largest value can be among the two smallest
    cutoff = np.sort(dec.lead_run)[-2]
    cand = np.flatnonzero(dec.lead_run >= cutoff)
    if dec.word.letters[-1] == 0:
        # a trailing all-0 block is a prefix of longer 0-runs
        cand = np.union1d(cand, [dec.K - 1])
    keyed = sorted((dec.block_bytes(i), int(i)) for i in cand)
    if keyed[0][0] == keyed[1][0]:
        return None
    if len(keyed) > 2 and keyed[1][0] == keyed[2][0]:
        return None
    return keyed[1][1]


def decompose_blocks(w: Word, params: BlockParams) -> BlockDecomposition:
    """Greedy left-to-right cut of ``w`` into long and short blocks."""
    a = w.letters
    n = a.shape[0]
    run_starts, run_lens, run_letters = _runs(a)
    zero = run_letters == 0
    unit_starts = run_starts[zero]
    unit_alen = run_lens[zero]
    flags = []
    if a[0] != 0:
        flags.append("leading_non_a1")
        unit_starts = np.concatenate(([0], unit_starts))
        unit_alen = np.concatenate(([0], unit_alen))
    unit_ends = np.append(unit_starts[1:], n)
    qualifying = unit_starts[unit_alen >= params.min_run]

    long_s, long_e = [], []
    cur_end = 0
    for s in qualifying.tolist():
        if s < cur_end:
            continue
        idx = int(np.searchsorted(unit_ends, s + params.min_block_len))
        if idx >= unit_ends.size:
            e = n
            flags.append("truncated_long_block")
        else:
            e = int(unit_ends[idx])
        long_s.append(s)
        long_e.append(e)
        cur_end = e

    ls = np.array(long_s, dtype=np.int64)
    le = np.array(long_e, dtype=np.int64)
    if ls.size:
        k = np.searchsorted(ls, unit_starts, side="right") - 1
        inside = (k >= 0) & (unit_starts < le[np.maximum(k, 0)])
    else:
        inside = np.zeros(unit_starts.size, dtype=bool)
    short_s = unit_starts[~inside]

    starts = np.concatenate((ls, short_s))
    is_long = np.concatenate((np.ones(ls.size, bool), np.zeros(short_s.size, bool)))
    order = np.argsort(starts, kind="stable")
    starts, is_long = starts[order], is_long[order]
    ends = np.append(starts[1:], n)
    lead_run = unit_alen[np.searchsorted(unit_starts, starts)]
    if not is_long[0]:
        flags.append("no_long_start")

    dec = BlockDecomposition(w, params, starts, ends, is_long, qualifying, lead_run,
                             tuple(flags))
    if not dec.flags:
        dec.j0 = _second_smallest(dec)
        if dec.j0 is not None:
            dec.d_n = int(starts[dec.j0]) / n
    return dec


GOOD_CONDITIONS = ("max_run_a_low", "max_run_a_high", "max_run_low", "max_run_high",
                   "block_count", "separation", "duplicate_blocks", "block_structure")


@dataclass(eq=False)
class GoodWordReport:
    is_good: bool
    failed_conditions: tuple[str, ...]
    decomposition: Optional[BlockDecomposition] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"is_good": self.is_good, "failed_conditions": list(self.failed_conditions)}


def classify_good(w: Word, params: BlockParams,
                  dec: Optional[BlockDecomposition] = None) -> GoodWordReport:
    """Check every good-word condition and report all failures.

    ``block_structure`` fails when the decomposition is flagged; the other
    names follow the run, block-count, separation and distinctness tests.
    """
    if not _kernels.is_lyndon(w.letters):
        raise ValueError("classify_good expects a Lyndon word")
    prof = run_profile(w)
    if dec is None:
        dec = decompose_blocks(w, params)
    failed = []
    if prof.max_run_a1 < params.min_run:
        failed.append("max_run_a_low")
    if prof.max_run_a1 > params.max_run:
        failed.append("max_run_a_high")
    if prof.max_run < params.min_run:
        failed.append("max_run_low")
    if prof.max_run > params.max_run:
        failed.append("max_run_high")
    if not params.h_lo <= dec.H <= params.h_hi:
        failed.append("block_count")
    if dec.qualifying_starts.size > 1 and np.diff(dec.qualifying_starts).min() < params.min_separation:
        failed.append("separation")
    long_blocks = [dec.block_bytes(i) for i in np.flatnonzero(dec.is_long)]
    if len(set(long_blocks)) < len(long_blocks):
        failed.append("duplicate_blocks")
    if dec.flags:
        failed.append("block_structure")
    return GoodWordReport(not failed, tuple(failed), dec)


def _require_good(w: Word, params: BlockParams) -> BlockDecomposition:
    report = classify_good(w, params)
    if not report.is_good:
        raise ValueError(f"word is not good: {', '.join(report.failed_conditions)}")
    return report.decomposition


def permute_blocks(w: Word, sigma: Sequence[int], params: BlockParams) -> Word:
    """Keep the first block and reorder the others.

    ``sigma[i-1]`` is the index of the block placed at position ``i``, for
    ``i = 1 .. K-1``; ``sigma`` must be a permutation of ``1 .. K-1``.
    """
    dec = _require_good(w, params)
    sigma = [int(s) for s in sigma]
    if sorted(sigma) != list(range(1, dec.K)):
        raise ValueError(f"sigma must permute 1..{dec.K - 1}")
    a = w.letters
    pieces = [a[dec.starts[0]:dec.ends[0]]] + [a[dec.starts[j]:dec.ends[j]] for j in sigma]
    return Word._wrap(np.concatenate(pieces), w.q)


def second_smallest_distance(w: Word, params: BlockParams) -> float:
    """Normalized start position of the second smallest block of a good word."""
    dec = _require_good(w, params)
    if dec.d_n is None:
        raise ValueError("the two smallest blocks are not uniquely determined")
    return dec.d_n
