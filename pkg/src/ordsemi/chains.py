"""Finite chains with a restricted range.

A chain of size ``n`` is always the index set ``0 .. n-1`` with its natural
order.  A :class:`ChainPair` fixes the restricted range ``X'`` inside it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

FORWARD = "forward"
REVERSED = "reversed"


class InvalidInstance(ValueError):
    """Raised when a chain, range or subset violates its constraints."""


@dataclass(frozen=True)
class Chain:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise InvalidInstance(f"chain size must be a positive integer, got {self.size!r}")

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))


@dataclass(frozen=True)
class ChainPair:
    """A finite chain together with a nonempty restricted range."""

    chain: Chain
    range: tuple[int, ...]

    def __post_init__(self):
        rng = tuple(self.range)
        object.__setattr__(self, "range", rng)
        if not rng:
            raise InvalidInstance("range must be nonempty")
        for i, x in enumerate(rng):
            if not isinstance(x, int) or x < 0 or x >= self.chain.size:
                raise InvalidInstance(
                    f"range element {x!r} outside chain 0..{self.chain.size - 1}")
            if i and rng[i - 1] >= x:
                raise InvalidInstance(f"range must be strictly increasing, got {list(rng)}")

    @classmethod
    def of(cls, size: int, range: Iterable[int]) -> "ChainPair":
        return cls(Chain(size), tuple(range))

    @property
    def size(self) -> int:
        return self.chain.size

    @property
    def range_set(self) -> frozenset:
        return frozenset(self.range)

    def reversed(self) -> "ChainPair":
        """The same instance read in the opposite order."""
        n = self.size
        return ChainPair.of(n, sorted(n - 1 - x for x in self.range))

    def to_json(self) -> dict:
        return {"size": self.size, "range": list(self.range)}

    @classmethod
    def from_json(cls, data: dict) -> "ChainPair":
        try:
            return cls.of(int(data["size"]), [int(x) for x in data["range"]])
        except (KeyError, TypeError) as exc:
            raise InvalidInstance(f"malformed ChainPair JSON: {exc}") from None

    def __str__(self):
        return f"n={self.size} range={','.join(map(str, self.range))}"


@dataclass(frozen=True)
class GapSignature:
    """Sizes of the gap runs before, between and after the range elements.

    Empty gaps are kept as zeros, so there are always ``|range| + 1`` entries.
    """

    gaps: tuple[int, ...]

    def reversed(self) -> "GapSignature":
        return GapSignature(self.gaps[::-1])

    def __iter__(self):
        return iter(self.gaps)

    def __len__(self):
        return len(self.gaps)

    def __getitem__(self, i):
        return self.gaps[i]


@dataclass(frozen=True)
class GapBlock:
    """A maximal run ``lo..hi`` of non-range elements; ``position`` is its gap slot."""

    lo: int
    hi: int
    position: int

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def elements(self) -> range:
        return range(self.lo, self.hi + 1)

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def __str__(self):
        return "[{" + ",".join(map(str, self.elements)) + "}]"


def gap_signature(pair: ChainPair) -> GapSignature:
    rng = pair.range
    gaps = [rng[0]]
    gaps += [rng[i] - rng[i - 1] - 1 for i in range(1, len(rng))]
    gaps.append(pair.size - 1 - rng[-1])
    return GapSignature(tuple(gaps))


def gap_blocks(pair: ChainPair) -> list[GapBlock]:
    """Nonempty gap blocks in chain order."""
    bounds = [-1, *pair.range, pair.size]
    blocks = []
    for slot in range(len(bounds) - 1):
        lo, hi = bounds[slot] + 1, bounds[slot + 1] - 1
        if lo <= hi:
            blocks.append(GapBlock(lo, hi, slot))
    return blocks


def block_of(pair: ChainPair, x: int) -> Optional[GapBlock]:
    """The gap block containing ``x``, or None when ``x`` is a range element."""
    for block in gap_blocks(pair):
        if x in block:
            return block
    return None


def pair_isomorphism(a: ChainPair, b: ChainPair,
                     orientation: str = FORWARD) -> Optional[tuple[int, ...]]:
    """Order-(anti-)isomorphism ``theta: X -> Y`` carrying ``X'`` onto ``Y'``.

    Returned as the image array ``theta[x]``; None when no such map exists.
    On finite chains the map is unique when it exists: the identity for
    ``forward`` and ``x -> n-1-x`` for ``reversed``.
    """
    if orientation not in (FORWARD, REVERSED):
        raise ValueError(f"orientation must be {FORWARD!r} or {REVERSED!r}")
    if a.size != b.size:
        return None
    sa, sb = gap_signature(a), gap_signature(b)
    n = a.size
    if orientation == FORWARD:
        return tuple(range(n)) if sa == sb else None
    return tuple(n - 1 - x for x in range(n)) if sa == sb.reversed() else None


def _nonempty(subset) -> frozenset:
    s = frozenset(subset)
    if not s:
        raise InvalidInstance("convexity is only defined for nonempty subsets")
    return s


def _within(pair: ChainPair, s: frozenset) -> None:
    bad = [x for x in s if not 0 <= x < pair.size]
    if bad:
        raise InvalidInstance(f"elements {sorted(bad)} not in chain of size {pair.size}")


def is_convex(pair: ChainPair, subset: Iterable[int]) -> bool:
    s = _nonempty(subset)
    _within(pair, s)
    return max(s) - min(s) + 1 == len(s)


def _block_members(block) -> frozenset:
    if isinstance(block, GapBlock):
        return frozenset(block.elements)
    return frozenset(block)


def is_lower_convex(pair: ChainPair, subset: Iterable[int], block=None) -> bool:
    """True when every element of ``block`` outside ``subset`` lies above all of it.

    ``block`` defaults to the whole chain.
    """
    s = _nonempty(subset)
    _within(pair, s)
    universe = _block_members(block) if block is not None else frozenset(range(pair.size))
    if not s <= universe:
        return False
    rest = universe - s
    return not rest or min(rest) > max(s)


def is_upper_convex(pair: ChainPair, subset: Iterable[int], block=None) -> bool:
    s = _nonempty(subset)
    _within(pair, s)
    universe = _block_members(block) if block is not None else frozenset(range(pair.size))
    if not s <= universe:
        return False
    rest = universe - s
    return not rest or max(rest) < min(s)


def is_order_preserving(image: Sequence[int]) -> bool:
    return all(image[i] <= image[i + 1] for i in range(len(image) - 1))


def is_order_reversing(image: Sequence[int]) -> bool:
    return all(image[i] >= image[i + 1] for i in range(len(image) - 1))
