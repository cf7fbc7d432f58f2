"""Transformations on non-increasing null sequences.

Every sequence is stored exactly on a finite window [0, N).  A tail model
(zero extension or a geometric ratio) is carried as metadata for the few
consumers that need limits; the window operations themselves never look
past the window.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MONOTONE_RTOL = 1e-12


class SequenceError(ValueError):
    """An input sequence violates a validity requirement."""


class InsufficientWindowError(SequenceError):
    """A window is too short to complete a block construction."""


@dataclass(frozen=True)
class TailModel:
    """How a window extends to infinity: zero padding or a geometric decay."""

    kind: str = "zero"
    ratio: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "geometric"):
            raise SequenceError(f"unknown tail model {self.kind!r}")
        if self.kind == "geometric" and not 0.0 < self.ratio < 1.0:
            raise SequenceError("geometric tail ratio must lie in (0, 1)")

    def to_json(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "geometric":
            d["ratio"] = self.ratio
        return d

    @classmethod
    def from_json(cls, d: dict) -> "TailModel":
        return cls(kind=d["kind"], ratio=d.get("ratio", 0.0))


def _require_nonincreasing(v: np.ndarray, what: str) -> None:
    diff = np.diff(v)
    scale = np.maximum(np.abs(v[:-1]), np.abs(v[1:]))
    bad = diff > MONOTONE_RTOL * scale
    if np.any(bad):
        i = int(np.argmax(bad))
        raise SequenceError(
            f"{what} must be non-increasing; entry {i + 1} = {v[i + 1]!r} "
            f"exceeds entry {i} = {v[i]!r}"
        )


@dataclass(frozen=True)
class NullSequence:
    """A non-negative, non-increasing window with a tail model."""

    values: np.ndarray
    tail: TailModel = field(default_factory=TailModel)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise SequenceError("values must be a non-empty 1-d array")
        if np.any(v < 0):
            raise SequenceError("values must be non-negative")
        _require_nonincreasing(v, "values")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.values.size)

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])

    def extended(self, n: int) -> float:
        """Value at index n, applying the tail model past the window."""
        if n < len(self):
            return float(self.values[n])
        if self.tail.kind == "zero":
            return 0.0
        return float(self.values[-1] * self.tail.ratio ** (n - len(self) + 1))

    @classmethod
    def geometric(cls, ratio: float, n: int, first: float = 1.0) -> "NullSequence":
        vals = first * ratio ** np.arange(n, dtype=float)
        return cls(vals, TailModel("geometric", ratio))

    @classmethod
    def harmonic(cls, n: int) -> "NullSequence":
        return cls(1.0 / (np.arange(n, dtype=float) + 1.0))

    def to_json(self) -> dict:
        return {"values": [float(x) for x in self.values], "tail": self.tail.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "NullSequence":
        return cls(np.asarray(d["values"], dtype=float), TailModel.from_json(d["tail"]))

    def dump_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)

    def dump_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "value"])
            for n, x in enumerate(self.values):
                w.writerow([n, repr(float(x))])


@dataclass(frozen=True)
class IndexMap:
    """A total map on the window with h(n) >= n."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.int64)
        if v.ndim != 1 or v.size == 0:
            raise SequenceError("index map must be a non-empty 1-d array")
        if np.any(v < np.arange(v.size)):
            i = int(np.argmax(v < np.arange(v.size)))
            raise SequenceError(f"index map must satisfy h(n) >= n; h({i}) = {int(v[i])}")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.values.size)

    def __call__(self, n: int) -> int:
        return int(self.values[n])

    @classmethod
    def from_callable(cls, f, n: int) -> "IndexMap":
        return cls(np.array([f(k) for k in range(n)], dtype=np.int64))

    @classmethod
    def identity(cls, n: int) -> "IndexMap":
        return cls(np.arange(n, dtype=np.int64))


def lethargy_majorant(eps: NullSequence, h: IndexMap) -> NullSequence:
    """Smallest-style majorant xi of eps with the doubling bound xi_n <= 2 xi_{h(n)}.

    Blocks are delimited by iterating a strictly increasing replacement of h;
    on each block the value is the running maximum of the window entry at the
    block start and half the previous block value.  The output dominates eps,
    is non-increasing, and satisfies xi_n <= 2 xi_{h(n)} wherever both indices
    fall in the window.
    """
    v = eps.values
    n_win = v.size
    if len(h) < n_win:
        raise SequenceError("index map must cover the window")
    hv = h.values[:n_win].astype(np.int64)

    # Strictly increasing replacement g with g(n) > n. g(0) is clamped up to 1
    # so the first block is never empty (the running-max form alone allows
    # g(0) = h(0) = 0).
    g = np.maximum.accumulate(hv) + np.arange(n_win, dtype=np.int64)
    g[0] = max(int(g[0]), 1)

    starts = [0]
    while starts[-1] < n_win:
        m = starts[-1]
        nxt = int(g[m])
        if len(starts) == 1 and nxt > n_win:
            raise InsufficientWindowError(
                f"window of length {n_win} cannot hold one full block: "
                f"the first block would end at {nxt}"
            )
        starts.append(nxt)
        if nxt >= n_win:
            break

    out = np.empty(n_win, dtype=float)
    beta = float(v[0])
    for k in range(len(starts) - 1):
        m_k, m_next = starts[k], starts[k + 1]
        if k > 0:
            beta = max(float(v[m_k]), beta / 2.0)
        out[m_k:min(m_next, n_win)] = beta
    return NullSequence(out, TailModel())


def convex_majorant(eps: NullSequence) -> NullSequence:
    """Convex non-increasing majorant, anchored at zero at index 4 N.

    A pointwise-minimal convex majorant need not exist on the integers, so a
    canonical chain is used instead: sweeping right to left from the anchor,
    each value is the larger of the window entry and the linear extension of
    the two values to its right.  The result dominates eps, is convex and
    non-increasing, reaches zero at the anchor, and is a fixed point on
    already-convex inputs.
    """
    v = eps.values
    n_win = v.size
    anchor = 4 * n_win
    out = np.zeros(anchor + 2, dtype=float)
    for j in range(anchor - 1, -1, -1):
        floor_j = v[j] if j < n_win else 0.0
        out[j] = max(float(floor_j), 2.0 * out[j + 1] - out[j + 2])
    return NullSequence(out[:n_win], TailModel())


def nonincreasing_rearrangement(values: Sequence[float]) -> NullSequence:
    """Sort a finite non-negative list into non-increasing order.

    Ties are broken stably by original index.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise SequenceError("input must be a non-empty 1-d array")
    if np.any(v < 0):
        i = int(np.argmax(v < 0))
        raise SequenceError(f"negative entry {v[i]!r} at index {i}")
    order = np.lexsort((np.arange(v.size), -v))
    return NullSequence(v[order], TailModel())
