"""Exact and Monte Carlo distributions of the normalized right factor length.

Monte Carlo work is split into fixed-size chunks; chunk ``i`` draws from
stream ``i`` of the seed, so results do not depend on how chunks are spread
over worker processes.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .counting import atom_mass, count_lyndon
from .factorize import enumerate_lyndon, standard_right_factor_naive
from .runs_blocks import GOOD_CONDITIONS, BlockParams, _runs, classify_good
from .sampling import GENERATOR_NAME, lyndon_batch, make_rng
from .words import Word

CHUNK = 256
EXACT_GUARD = 10 ** 7


@dataclass(frozen=True)
class LimitLaw:
    """Mixture of an atom ``1/q`` at 1 and ``(q-1)/q`` times Lebesgue on [0, 1)."""

    q: int = 2

    def cdf(self, x: float) -> float:
        if x < 0:
            return 0.0
        if x >= 1:
            return 1.0
        return (self.q - 1) / self.q * x

    def moment(self, k: int) -> float:
        if k < 1:
            raise ValueError("moment order must be >= 1")
        return 1 / self.q + (self.q - 1) / (self.q * (k + 1))


def limit_cdf(x: float, q: int = 2) -> float:
    return LimitLaw(q).cdf(x)


def limit_moment(k: int, q: int = 2) -> float:
    return LimitLaw(q).moment(k)


def uniform_cdf(x):
    return np.clip(x, 0.0, 1.0)


def ks_statistic(sample: Sequence[float], cdf: Callable = uniform_cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance; ``cdf`` must accept arrays."""
    x = np.sort(np.asarray(sample, dtype=float))
    m = x.size
    if m == 0:
        raise ValueError("empty sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - f), np.max(f - (i - 1) / m)))


def chi_square(observed: Sequence[float], expected: Sequence[float]) -> float:
    o = np.asarray(observed, dtype=float)
    e = np.asarray(expected, dtype=float)
    if o.size == 0 or o.shape != e.shape:
        raise ValueError("observed and expected must be non-empty and aligned")
    if np.any(e <= 0):
        raise ValueError("expected counts must be positive")
    return float(np.sum((o - e) ** 2 / e))


def chi_square_two_sample(counts1: Sequence[float], counts2: Sequence[float]) -> float:
    """Pearson homogeneity statistic for two histograms over the same cells."""
    c1 = np.asarray(counts1, dtype=float)
    c2 = np.asarray(counts2, dtype=float)
    pooled = c1 + c2
    keep = pooled > 0
    c1, c2, pooled = c1[keep], c2[keep], pooled[keep]
    e1 = pooled * c1.sum() / pooled.sum()
    e2 = pooled * c2.sum() / pooled.sum()
    return chi_square(c1, e1) + chi_square(c2, e2)


@dataclass
class ExactDistribution:
    """Law of the right factor length ``R`` under the uniform Lyndon measure."""

    n: int
    q: int
    support: dict[int, Fraction]

    @property
    def total(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))

    @property
    def atom(self) -> Fraction:
        return self.support.get(self.n - 1, Fraction(0))

    def moment(self, k: int = 1) -> Fraction:
        """Exact ``k``-th moment of ``R/n``."""
        return sum((Fraction(r, self.n) ** k * p for r, p in self.support.items()), Fraction(0))

    def to_dict(self) -> dict:
        return {"n": self.n, "q": self.q,
                "support": {str(r): f"{p.numerator}/{p.denominator}"
                            for r, p in sorted(self.support.items())},
                "atom": float(self.atom), "mean_r": float(self.moment(1))}


def exact_r_distribution(n: int, q: int = 2, max_words: int = EXACT_GUARD) -> ExactDistribution:
    """Tally ``R`` over every Lyndon word of length ``n`` (naive right factor)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    total = count_lyndon(n, q)
    if total > max_words:
        raise ValueError(f"{total} Lyndon words exceed the enumeration guard ({max_words}); "
                         f"use the Monte Carlo estimate (limit-check) instead")
    tally: dict[int, int] = {}
    seen = 0
    for w in enumerate_lyndon(n, q):
        r = standard_right_factor_naive(w).r_len
        tally[r] = tally.get(r, 0) + 1
        seen += 1
    assert seen == total
    return ExactDistribution(n, q, {r: Fraction(c, total) for r, c in sorted(tally.items())})


# -- Monte Carlo -------------------------------------------------------------

_FIELDS = ("R", "good", "H", "j0_start", "tail_lyndon", "max_run", "max_run_a1",
           "num_runs", "max_block", "failed")


def _chunk(n: int, q: int, seed: int, index: int, size: int, epsilon: float,
           with_blocks: bool) -> dict:
    rng = make_rng(seed, index)
    mat, rejected = lyndon_batch(n, q, size, rng)
    out = {
        "R": _kernels.right_factor_rows(mat),
        "tail_lyndon": _kernels.tail_is_lyndon_rows(mat),
        "rejected": rejected,
    }
    if not with_blocks:
        return out
    params = BlockParams.for_length(n, q, epsilon)
    good = np.zeros(size, bool)
    H = np.zeros(size, np.int64)
    j0_start = np.full(size, -1, np.int64)
    max_block = np.zeros(size, np.int64)
    failed = np.zeros((size, len(GOOD_CONDITIONS)), bool)
    for r in range(size):
        w = Word._wrap(mat[r], q)
        rep = classify_good(w, params)
        dec = rep.decomposition
        good[r] = rep.is_good
        H[r] = dec.H
        max_block[r] = dec.lengths.max()
        if dec.j0 is not None:
            j0_start[r] = dec.starts[dec.j0]
        for c in rep.failed_conditions:
            failed[r, GOOD_CONDITIONS.index(c)] = True
    out.update(good=good, H=H, j0_start=j0_start, max_block=max_block, failed=failed)
    return out


def _chunk_args(args):
    return _chunk(*args)


def _run_chunks(n, q, seed, first, count, total, epsilon, with_blocks, workers):
    jobs = []
    for i in range(first, first + count):
        size = min(CHUNK, total - i * CHUNK) if total is not None else CHUNK
        jobs.append((n, q, seed, i, size, epsilon, with_blocks))
    if workers <= 1:
        return [_chunk(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_chunk_args, jobs))


def _merge(parts: list[dict]) -> dict:
    merged = {"rejected": sum(p["rejected"] for p in parts)}
    for key in parts[0]:
        if key != "rejected":
            merged[key] = np.concatenate([p[key] for p in parts])
    return merged


@dataclass
class EmpiricalReport:
    """Sampled law of ``r_n = R_n / n`` compared with the limit law.

    ``dn_mismatches`` counts good words with a unique second smallest block
    whose right factor length differs from ``n - start(Y_j0)`` although
    ``R_n < n - 1``; ``dichotomy_violations`` counts draws where
    ``R_n = n - 1`` disagrees with "deleting the first letter leaves a Lyndon
    word", plus good words for which neither right-factor case holds.
    """

    n: int
    q: int
    sample_count: int
    seed: int
    epsilon: float
    workers: int
    atom_freq: float
    atom_mass: float
    ks_continuous: Optional[float]
    moments: list[float]
    limit_moments: list[float]
    mean_r: float
    rejections: int
    dichotomy_violations: int
    good_fraction: Optional[float] = None
    good_count: int = 0
    dn_ks: Optional[float] = None
    dn_mismatches: int = 0
    h_in_range_freq: Optional[float] = None
    failed_counts: dict[str, int] = field(default_factory=dict)
    max_block_ratio: Optional[float] = None
    samples: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "samples"}
        d["generator"] = GENERATOR_NAME
        d["tolerances_note"] = "acceptance tolerances are fixed engineering choices"
        return d

    def per_sample_rows(self) -> list[tuple]:
        """``(n, R_n, r_n, is_atom, is_good, d_n)`` per draw; ``d_n`` may be empty."""
        s = self.samples
        rows = []
        for i, r in enumerate(s["R"].tolist()):
            good = bool(s["good"][i]) if "good" in s else ""
            dn = ""
            if "j0_start" in s and s["good"][i] and s["j0_start"][i] >= 0:
                dn = int(s["j0_start"][i]) / self.n
            rows.append((self.n, r, r / self.n, r == self.n - 1, good, dn))
        return rows


def _moments(x: np.ndarray, k: int = 4) -> list[float]:
    m = x.size
    return [math.fsum((x ** j).tolist()) / m for j in range(1, k + 1)]


def montecarlo_r(n: int, q: int = 2, samples: int = 20000, seed: int = 0,
                 epsilon: float = 0.2, workers: int = 1, min_good: int = 0,
                 with_blocks: bool = True, progress: bool = False) -> EmpiricalReport:
    """Sample uniform Lyndon words and summarize ``r_n`` (and ``d_n`` on good words).

    When ``min_good`` is positive, whole chunks are added past ``samples``
    until at least that many good words have been seen.
    """
    if n < 4 or samples < 1:
        raise ValueError("need n >= 4 and samples >= 1")
    if min_good and not with_blocks:
        raise ValueError("min_good requires block classification")
    nchunks = -(-samples // CHUNK)
    parts = []
    step = max(1, workers)
    done = 0
    while done < nchunks:
        count = min(step, nchunks - done)
        parts += _run_chunks(n, q, seed, done, count, samples, epsilon, with_blocks, workers)
        done += count
        if progress:
            print(f"\r[{done}/{nchunks} chunks]", end="", file=sys.stderr, flush=True)
    if min_good:
        while _merge(parts)["good"].sum() < min_good:
            parts += _run_chunks(n, q, seed, done, step, None, epsilon, with_blocks, workers)
            done += step
            if progress:
                print(f"\r[{done} chunks, extra for good words]", end="", file=sys.stderr, flush=True)
    if progress:
        print(file=sys.stderr)

    s = _merge(parts)
    R = s["R"]
    m = R.size
    r = R / n
    atom = R == n - 1
    cont = r[~atom]
    law = LimitLaw(q)
    report = EmpiricalReport(
        n=n, q=q, sample_count=m, seed=seed, epsilon=epsilon, workers=workers,
        atom_freq=float(atom.mean()),
        atom_mass=float(atom_mass(n, q)),
        ks_continuous=ks_statistic(cont) if cont.size else None,
        moments=_moments(r),
        limit_moments=[law.moment(k) for k in range(1, 5)],
        mean_r=math.fsum(r.tolist()) / m,
        rejections=int(s["rejected"]),
        dichotomy_violations=int(np.sum(atom != s["tail_lyndon"])),
        samples=s,
    )
    if with_blocks:
        good = s["good"]
        has_j0 = good & (s["j0_start"] >= 0)
        at_j0 = R == n - s["j0_start"]
        dn = s["j0_start"][has_j0] / n
        params = BlockParams.for_length(n, q, epsilon)
        report.good_count = int(good.sum())
        report.good_fraction = float(good.mean())
        report.dn_ks = ks_statistic(dn) if dn.size else None
        report.dn_mismatches = int(np.sum(has_j0 & ~atom & ~at_j0))
        report.dichotomy_violations += int(np.sum(good & ~(atom ^ (has_j0 & at_j0))))
        report.h_in_range_freq = float(np.mean((s["H"] >= params.h_lo) & (s["H"] <= params.h_hi)))
        report.failed_counts = {c: int(s["failed"][:, i].sum()) for i, c in enumerate(GOOD_CONDITIONS)}
        if good.any():
            report.max_block_ratio = float(s["max_block"][good].max() / math.log2(n))
    return report


@dataclass
class TailReport:
    """Frequencies of run-statistic tail events over uniform Lyndon words."""

    n: int
    q: int
    samples: int
    seed: int
    epsilon: float
    low_threshold: float
    high_threshold: float
    runs_deviation: float
    freq_max_a1_low: float
    freq_max_a1_high: float
    freq_runs_deviation: float
    mean_runs_ratio: float
    expected_runs_ratio: float
    predicted_orders: dict[str, float]

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["generator"] = GENERATOR_NAME
        return d


def tail_check_runs(n: int, q: int = 2, samples: int = 10000, seed: int = 0,
                    epsilon: float = 0.2) -> TailReport:
    """Empirical tails of the longest ``0``-run and of the run count.

    The predicted orders are the decay rates of the matching estimates with
    every constant set to 1; they are for eyeballing, not for assertions.
    """
    if n < 4 or samples < 1:
        raise ValueError("need n >= 4 and samples >= 1")
    params = BlockParams.for_length(n, q, epsilon)
    lg = math.log(n) / math.log(q)
    dev = n ** 0.6
    low = high = far = 0
    runs_total = 0
    for i in range(-(-samples // CHUNK)):
        size = min(CHUNK, samples - i * CHUNK)
        mat, _ = lyndon_batch(n, q, size, make_rng(seed, i))
        for row in mat:
            _, lens, letters = _runs(row)
            a1 = lens[letters == 0]
            m_a = int(a1.max()) if a1.size else 0
            low += m_a < params.min_run
            high += m_a > params.max_run
            far += abs(lens.size - n * (q - 1) / q) > dev
            runs_total += lens.size
    return TailReport(
        n=n, q=q, samples=samples, seed=seed, epsilon=epsilon,
        low_threshold=(1 - epsilon) * lg, high_threshold=2 * lg, runs_deviation=dev,
        freq_max_a1_low=low / samples, freq_max_a1_high=high / samples,
        freq_runs_deviation=far / samples,
        mean_runs_ratio=runs_total / (samples * n), expected_runs_ratio=(q - 1) / q,
        predicted_orders={"max_a1_low": math.exp(-n ** epsilon / 4),
                          "max_a1_high": 1 / n,
                          "runs_deviation": math.exp(-n ** 0.2)},
    )
