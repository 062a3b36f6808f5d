"""Transformations of a chain into its restricted range.

Composition is written left to right, ``x(ab) = (xa)b``: apply ``a`` first,
then ``b``.  ``compose(a, b)`` and ``a * b`` both mean "a then b".  Mixing
this up with the usual right-to-left convention silently transposes every
Cayley table, so keep it in mind when reading products.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .chains import (ChainPair, GapBlock, InvalidInstance, gap_blocks,
                     is_convex, is_lower_convex, is_order_preserving,
                     is_upper_convex)

DEFAULT_CAP = 10_000


class EnumerationCapExceeded(RuntimeError):
    """The semigroup is larger than the configured enumeration cap."""


def default_cap() -> int:
    env = os.environ.get("ORDSEMI_CAP")
    return int(env) if env else DEFAULT_CAP


@dataclass(frozen=True)
class Transformation:
    """A map ``X -> X'`` stored as its image array.

    Range restriction is always enforced.  Order preservation is not, since
    partial graphs and fixed points make sense for any map into ``X'``;
    use :meth:`is_order_preserving` or build through :func:`order_preserving`.
    """

    pair: ChainPair
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if len(image) != self.pair.size:
            raise InvalidInstance(
                f"image has length {len(image)}, chain has size {self.pair.size}")
        allowed = self.pair.range_set
        bad = sorted({v for v in image if v not in allowed})
        if bad:
            raise InvalidInstance(f"image values {bad} are outside the range {list(self.pair.range)}")

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __mul__(self, other: "Transformation") -> "Transformation":
        return compose(self, other)

    def is_order_preserving(self) -> bool:
        return is_order_preserving(self.image)

    @property
    def ran(self) -> frozenset:
        return frozenset(self.image)

    def preimage(self, y: int) -> frozenset:
        return frozenset(x for x, v in enumerate(self.image) if v == y)

    def two_row(self, labels: Optional[Sequence] = None) -> str:
        """Domain over image, the way the maps are usually displayed."""
        lab = labels if labels is not None else range(self.pair.size)
        top = [str(lab[x]) for x in range(self.pair.size)]
        bottom = [str(lab[v]) for v in self.image]
        width = max(len(s) for s in top + bottom)
        return "( " + " ".join(s.rjust(width) for s in top) + " )\n" \
               "( " + " ".join(s.rjust(width) for s in bottom) + " )"

    def to_json(self) -> dict:
        return {"pair": self.pair.to_json(), "image": list(self.image)}

    @classmethod
    def from_json(cls, data: dict) -> "Transformation":
        return cls(ChainPair.from_json(data["pair"]), tuple(data["image"]))


def order_preserving(pair: ChainPair, image: Iterable[int]) -> Transformation:
    """Build a transformation and insist that it is order-preserving."""
    alpha = Transformation(pair, tuple(image))
    if not alpha.is_order_preserving():
        raise InvalidInstance(f"image {list(alpha.image)} is not order-preserving")
    return alpha


def compose(alpha: Transformation, beta: Transformation) -> Transformation:
    """``alpha`` then ``beta``."""
    if alpha.pair != beta.pair:
        raise InvalidInstance("cannot compose transformations of different instances")
    b = beta.image
    return Transformation(alpha.pair, tuple(b[v] for v in alpha.image))


def count_top(pair: ChainPair) -> int:
    """Number of order-preserving maps ``X -> X'``: C(n + k - 1, n)."""
    n, k = pair.size, len(pair.range)
    return math.comb(n + k - 1, n)


def iter_top(pair: ChainPair) -> Iterator[Transformation]:
    # weakly increasing tuples over the sorted range, in lexicographic order
    for image in itertools.combinations_with_replacement(pair.range, pair.size):
        yield Transformation(pair, image)


def enumerate_top(pair: ChainPair, cap: Optional[int] = None) -> list[Transformation]:
    """All order-preserving maps into the range, in lexicographic order of images.

    This order is the canonical element indexing used by Cayley tables and
    the isomorphism oracle.
    """
    cap = default_cap() if cap is None else cap
    count = count_top(pair)
    if count > cap:
        raise EnumerationCapExceeded(
            f"T_OP({pair}) has {count} elements, above the cap of {cap}")
    return list(iter_top(pair))


def identity_on_range(pair: ChainPair) -> Transformation:
    """The order-preserving idempotent fixing the range and pushing gaps down.

    Elements below the first range point go up to it.
    """
    rng = pair.range
    image, j = [], 0
    for x in range(pair.size):
        while j + 1 < len(rng) and rng[j + 1] <= x:
            j += 1
        image.append(rng[j] if rng[j] <= x else rng[0])
    return Transformation(pair, tuple(image))


def constant_map(pair: ChainPair, a: int) -> Transformation:
    if a not in pair.range_set:
        raise InvalidInstance(f"{a} is not in the range {list(pair.range)}")
    return Transformation(pair, (a,) * pair.size)


def is_constant(alpha: Transformation) -> bool:
    return len(alpha.ran) == 1


def fixpoints(alpha: Transformation) -> frozenset:
    return frozenset(x for x, v in enumerate(alpha.image) if v == x)


def is_idempotent(alpha: Transformation) -> bool:
    return compose(alpha, alpha) == alpha


def restrict_to_range(alpha: Transformation) -> dict[int, int]:
    return {x: alpha.image[x] for x in alpha.pair.range}


def _check_in_range(pair: ChainPair, *points: int) -> None:
    for p in points:
        if p not in pair.range_set:
            raise InvalidInstance(f"{p} is not in the range {list(pair.range)}")


def _as_block(pair: ChainPair, block) -> GapBlock:
    blocks = gap_blocks(pair)
    if isinstance(block, GapBlock):
        if block not in blocks:
            raise InvalidInstance(f"{block} is not a gap block of {pair}")
        return block
    members = sorted(block)
    for b in blocks:
        if members == list(b.elements):
            return b
    raise InvalidInstance(f"{members} is not a gap block of {pair}")


def omega_three(pair: ChainPair, block, A: Iterable[int], a: int, b: int, c: int) -> Transformation:
    """Three-valued cut map: below ``A`` to ``a``, ``A`` to ``b``, above ``A`` to ``c``.

    Requires ``A`` convex inside the gap block and either
    ``a <= b < block < c`` or ``a < block < b <= c``.
    """
    blk = _as_block(pair, block)
    _check_in_range(pair, a, b, c)
    A = frozenset(A)
    if not A or not A <= frozenset(blk.elements) or not is_convex(pair, A):
        raise InvalidInstance(f"{sorted(A)} is not a nonempty convex subset of {blk}")
    if not ((a <= b < blk.lo and blk.hi < c) or (a < blk.lo and blk.hi < b <= c)):
        raise InvalidInstance(
            f"need a <= b < block < c or a < block < b <= c, got a={a} b={b} c={c} block={blk}")
    lo, hi = min(A), max(A)
    image = tuple(a if x < lo else b if x <= hi else c for x in range(pair.size))
    return Transformation(pair, image)


def omega_low(pair: ChainPair, L: Iterable[int], a: int, b: int) -> Transformation:
    """Two-valued cut map sending a lower part ``L`` of the bottom gap block to ``a``."""
    blocks = gap_blocks(pair)
    if not blocks or blocks[0].position != 0:
        raise InvalidInstance(f"{pair} has no gap block below its range")
    blk = blocks[0]
    _check_in_range(pair, a, b)
    if not a < b:
        raise InvalidInstance(f"need a < b, got a={a} b={b}")
    L = frozenset(L)
    if not L or not is_lower_convex(pair, L, blk):
        raise InvalidInstance(f"{sorted(L)} is not a lower-convex subset of {blk}")
    cut = max(L)
    return Transformation(pair, tuple(a if x <= cut else b for x in range(pair.size)))


def omega_high(pair: ChainPair, U: Iterable[int], a: int, b: int) -> Transformation:
    """Two-valued cut map sending an upper part ``U`` of the top gap block to ``b``."""
    blocks = gap_blocks(pair)
    if not blocks or blocks[-1].position != len(pair.range):
        raise InvalidInstance(f"{pair} has no gap block above its range")
    blk = blocks[-1]
    _check_in_range(pair, a, b)
    if not a < b:
        raise InvalidInstance(f"need a < b, got a={a} b={b}")
    U = frozenset(U)
    if not U or not is_upper_convex(pair, U, blk):
        raise InvalidInstance(f"{sorted(U)} is not an upper-convex subset of {blk}")
    cut = min(U)
    return Transformation(pair, tuple(b if x >= cut else a for x in range(pair.size)))


def two_valued_cut(pair: ChainPair, cut: int, a: int, b: int) -> Transformation:
    """``x < cut`` to ``a``, ``x >= cut`` to ``b``."""
    _check_in_range(pair, a, b)
    return Transformation(pair, tuple(a if x < cut else b for x in range(pair.size)))
