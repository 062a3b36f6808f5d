"""Cayley tables, a backtracking isomorphism oracle, and the maps it induces.

Elements are indexed by the canonical enumeration of
:func:`ordsemi.transformations.enumerate_top`; ``table[i, j]`` is the index of
``element[i]`` then ``element[j]``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .chains import (ChainPair, GapBlock, InvalidInstance, gap_blocks,
                     is_order_preserving, is_order_reversing)
from .structures import adjusted_chain, k_key, partial_graph
from .transformations import (Transformation, enumerate_top, fixpoints,
                              two_valued_cut)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 2_000_000
FULL_ASSOC_LIMIT = 200


class SearchBudgetExceeded(RuntimeError):
    """The oracle hit its node limit before reaching an answer."""


class WitnessError(ValueError):
    """A mapping claimed to be an isomorphism does not behave like one."""


class PreservationViolation(AssertionError):
    """An isomorphism fails to carry a gap block to a block of the same size."""


@dataclass(frozen=True, eq=False)
class CayleyTable:
    table: np.ndarray
    pair: Optional[ChainPair] = None
    elements: Optional[tuple] = None

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @cached_property
    def idempotent(self) -> np.ndarray:
        idx = np.arange(self.order)
        return self.table[idx, idx] == idx

    @cached_property
    def right_zero(self) -> np.ndarray:
        """``z`` with ``x z = z`` for every ``x``."""
        return np.all(self.table == np.arange(self.order)[None, :], axis=0)

    @cached_property
    def constant(self) -> Optional[np.ndarray]:
        if self.elements is None:
            return None
        return np.array([len(e.ran) == 1 for e in self.elements])

    @cached_property
    def ranges(self) -> Optional[list]:
        if self.elements is None:
            return None
        return [tuple(sorted(e.ran)) for e in self.elements]

    @cached_property
    def restriction_keys(self) -> Optional[list]:
        if self.elements is None:
            return None
        return [k_key(e) for e in self.elements]

    @cached_property
    def _index(self) -> dict:
        return {e.image: i for i, e in enumerate(self.elements)}

    def index_of(self, alpha: Union[Transformation, Sequence[int]]) -> int:
        image = alpha.image if isinstance(alpha, Transformation) else tuple(alpha)
        try:
            return self._index[tuple(image)]
        except KeyError:
            raise KeyError(f"{list(image)} is not an element of T_OP({self.pair})") from None

    def is_associative(self, samples: int = 20_000, seed: int = 0) -> bool:
        T = self.table
        n = self.order
        if n <= FULL_ASSOC_LIMIT:
            return bool(np.array_equal(T[T], T[:, T]))
        rng = np.random.default_rng(seed)
        i, j, k = rng.integers(0, n, size=(3, samples))
        return bool(np.array_equal(T[T[i, j], k], T[i, T[j, k]]))

    def to_json(self) -> dict:
        out = {"order": self.order, "table": self.table.tolist()}
        if self.pair is not None:
            out["pair"] = self.pair.to_json()
        return out

    @classmethod
    def from_table(cls, table, check: bool = True) -> "CayleyTable":
        T = np.asarray(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise InvalidInstance("a Cayley table must be square")
        if T.size and (T.min() < 0 or T.max() >= T.shape[0]):
            raise InvalidInstance("Cayley table entries must be element indices")
        ct = cls(T)
        if check and not ct.is_associative():
            raise InvalidInstance("table is not associative")
        return ct

    @classmethod
    def from_json(cls, data: dict) -> "CayleyTable":
        if "pair" in data:
            return build_cayley(ChainPair.from_json(data["pair"]))
        return cls.from_table(data["table"])


def _row_keys(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int32)
    return arr.view(np.dtype((np.void, arr.dtype.itemsize * arr.shape[1]))).ravel()


def build_cayley(pair: ChainPair, cap: Optional[int] = None, check: bool = True) -> CayleyTable:
    elements = tuple(enumerate_top(pair, cap))
    images = np.array([e.image for e in elements], dtype=np.int32)
    N = len(elements)
    keys = _row_keys(images)
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    table = np.empty((N, N), dtype=np.int64)
    for i in range(N):
        prods = images[:, images[i]]          # row j: element i then element j
        pk = _row_keys(prods)
        pos = np.searchsorted(sorted_keys, pk)
        if np.any(pos >= N) or np.any(sorted_keys[np.minimum(pos, N - 1)] != pk):
            raise AssertionError(f"T_OP({pair}) is not closed under composition")
        table[i] = order[pos]
    ct = CayleyTable(table, pair, elements)
    if check and not ct.is_associative():
        raise AssertionError(f"Cayley table of T_OP({pair}) is not associative")
    return ct


@dataclass(frozen=True)
class SemigroupIso:
    """Bijection between element indices; ``mapping[i]`` is the image of ``i``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(v) for v in self.mapping))

    def __getitem__(self, i):
        return self.mapping[i]

    def __len__(self):
        return len(self.mapping)

    def inverse(self) -> "SemigroupIso":
        inv = [0] * len(self.mapping)
        for i, v in enumerate(self.mapping):
            inv[v] = i
        return SemigroupIso(tuple(inv))

    def then(self, other: "SemigroupIso") -> "SemigroupIso":
        return SemigroupIso(tuple(other.mapping[v] for v in self.mapping))

    def to_json(self) -> dict:
        return {"mapping": list(self.mapping)}

    @classmethod
    def from_json(cls, data: dict) -> "SemigroupIso":
        return cls(tuple(data["mapping"]))


def identity_iso(A: CayleyTable) -> SemigroupIso:
    return SemigroupIso(tuple(range(A.order)))


def verify_iso(A: CayleyTable, B: CayleyTable, m: SemigroupIso) -> bool:
    n = A.order
    if B.order != n or len(m) != n:
        return False
    f = np.asarray(m.mapping, dtype=np.int64)
    if f.size and (f.min() < 0 or f.max() >= n or len(np.unique(f)) != n):
        return False
    return bool(np.array_equal(f[A.table], B.table[np.ix_(f, f)]))


# -- oracle ------------------------------------------------------------------

def _initial_colors(T: CayleyTable) -> np.ndarray:
    idx = np.arange(T.order)
    left_zero = np.all(T.table == idx[:, None], axis=1)
    return (T.idempotent.astype(np.int64) + 2 * T.right_zero + 4 * left_zero)


def _signatures(T: np.ndarray, c: np.ndarray, K: int) -> np.ndarray:
    idx = np.arange(T.shape[0])
    rows = np.sort(c[None, :] * K + c[T], axis=1)
    cols = np.sort(c[None, :] * K + c[T.T], axis=1)
    return np.concatenate([c[:, None], c[T[idx, idx]][:, None], rows, cols], axis=1)


def refine_colors(A: CayleyTable, B: CayleyTable,
                  cA: Optional[np.ndarray] = None,
                  cB: Optional[np.ndarray] = None):
    """Joint colour refinement of two tables to a fixpoint.

    Each round recolours ``a`` by its colour, the colour of ``a*a``, and the
    multisets of (colour of b, colour of ab) and (colour of b, colour of ba).
    Returns ``(colours_A, colours_B)`` with a shared palette, or None as soon
    as the colour histograms differ.
    """
    n = A.order
    cA = _initial_colors(A) if cA is None else cA
    cB = _initial_colors(B) if cB is None else cB
    while True:
        if not np.array_equal(np.bincount(cA, minlength=1), np.bincount(cB, minlength=1)):
            return None
        K = int(max(cA.max(), cB.max())) + 1
        sig = np.concatenate([_signatures(A.table, cA, K), _signatures(B.table, cB, K)])
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel().astype(np.int64)
        nA, nB = new[:n], new[n:]
        if len(np.unique(new)) == len(np.unique(np.concatenate([cA, cB]))):
            if not np.array_equal(np.bincount(nA), np.bincount(nB, minlength=len(np.bincount(nA)))):
                return None
            return nA, nB
        cA, cB = nA, nB


class _Search:
    """Depth-first search for isomorphisms, smallest unmapped element first.

    Every assignment is closed under products with the already mapped
    elements, so a branch dies as soon as the homomorphism law is broken.
    With ``refine`` on, each node also individualises the mapped elements and
    re-runs colour refinement; cells left with one element per side are
    forced.  Candidates are tried in increasing order, which makes the first
    solution the lexicographically least mapping.
    """

    def __init__(self, A: CayleyTable, B: CayleyTable, budget: int, refine: bool):
        self.A, self.B = A, B
        self.TA, self.TB = A.table, B.table
        self.n = A.order
        self.fwd = np.full(self.n, -1, dtype=np.int64)
        self.bwd = np.full(self.n, -1, dtype=np.int64)
        self.trail: list[int] = []
        self.budget = budget
        self.refine = refine
        self.nodes = 0

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            x = self.trail.pop()
            self.bwd[self.fwd[x]] = -1
            self.fwd[x] = -1

    def _assign(self, a: int, b: int, cA, cB) -> bool:
        fwd, bwd = self.fwd, self.bwd
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            if fwd[x] == y:
                continue
            if fwd[x] != -1 or bwd[y] != -1 or cA[x] != cB[y]:
                return False
            fwd[x], bwd[y] = y, x
            self.trail.append(x)
            S = np.fromiter(self.trail, dtype=np.int64, count=len(self.trail))
            fS = fwd[S]
            tA = np.concatenate([self.TA[x, S], self.TA[S, x]])
            tB = np.concatenate([self.TB[y, fS], self.TB[fS, y]])
            mapped = fwd[tA]
            known = mapped >= 0
            if np.any(mapped[known] != tB[known]):
                return False
            if not known.all():
                queue.extend(set(zip(tA[~known].tolist(), tB[~known].tolist())))
        return True

    def _tighten(self, cA, cB):
        """Individualise, refine, and force singleton cells until stable."""
        while True:
            S = np.flatnonzero(self.fwd >= 0)
            if S.size:
                base = int(max(cA.max(), cB.max())) + 1
                cA, cB = cA.copy(), cB.copy()
                cA[S] = base + S
                cB[self.fwd[S]] = base + S
            colors = refine_colors(self.A, self.B, cA, cB)
            if colors is None:
                return None
            cA, cB = colors
            counts = np.bincount(cA)
            single = np.flatnonzero(counts == 1)
            xs = np.flatnonzero(np.isin(cA, single))
            xs = xs[self.fwd[xs] < 0]
            if xs.size == 0:
                return cA, cB
            ys = np.empty(len(cB), dtype=np.int64)
            ys[cB] = np.arange(len(cB))    # valid for singleton colours only
            for x in xs.tolist():
                y = int(ys[cA[x]])
                if self.fwd[x] == y:
                    continue
                if not self._assign(x, y, cA, cB):
                    return None

    def _one_side(self, PA, QB, fx, fy):
        mp = self.fwd[PA][:, None, :]
        Q = QB[None, :, :]
        self_prod = (PA == fx[:, None])[:, None, :]
        fresh = (self.bwd[QB] < 0)[None, :, :] & (Q != fy[None, :, None])
        ok = np.where(mp >= 0, Q == mp,
                      np.where(self_prod, Q == fy[None, :, None], fresh & ~self_prod))
        return ok.all(axis=2)

    def _domains(self, fx, fy):
        """Candidates left for each free element by the homomorphism law alone.

        ``x -> y`` survives when every product of ``x`` with a mapped element
        either lands on the image of a mapped product, on ``y`` when the
        product is ``x`` itself, or on a still unused element otherwise.
        """
        S = np.flatnonzero(self.fwd >= 0)
        if S.size == 0:
            return np.ones((len(fx), len(fy)), dtype=bool)
        fS = self.fwd[S]
        right = self._one_side(self.TA[np.ix_(fx, S)], self.TB[np.ix_(fy, fS)], fx, fy)
        left = self._one_side(self.TA[np.ix_(S, fx)].T, self.TB[np.ix_(fS, fy)].T, fx, fy)
        return right & left

    def solutions(self, cA, cB) -> Iterator[tuple[int, ...]]:
        mark = len(self.trail)
        if self.refine:
            colors = self._tighten(cA, cB)
            if colors is None:
                self._undo(mark)
                return
            cA, cB = colors
        free = np.flatnonzero(self.fwd < 0)
        if free.size == 0:
            yield tuple(self.fwd.tolist())
            self._undo(mark)
            return
        a = int(free[0])
        cands = np.flatnonzero((self.bwd < 0) & (cB == cA[a]))
        if not self.refine:
            dom = self._domains(free, np.flatnonzero(self.bwd < 0))
            if not dom.any(axis=1).all():
                self._undo(mark)
                return
            cands = np.flatnonzero(self.bwd < 0)[dom[0]]
        for b in cands.tolist():
            self.nodes += 1
            if self.nodes > self.budget:
                raise SearchBudgetExceeded(f"oracle exceeded its budget of {self.budget} nodes")
            inner = len(self.trail)
            if self._assign(a, b, cA, cB):
                yield from self.solutions(cA, cB)
            self._undo(inner)
        self._undo(mark)


def iter_isos(A: CayleyTable, B: CayleyTable, budget: int = DEFAULT_BUDGET,
              prune: bool = True) -> Iterator[SemigroupIso]:
    """All isomorphisms ``A -> B`` in lexicographic order of their mappings.

    ``prune=False`` skips colour refinement and every other invariant, and
    relies on forward checking of the homomorphism law alone; answers are the
    same, only slower.
    """
    if A.order != B.order:
        return
    if prune:
        colors = refine_colors(A, B)
        if colors is None:
            return
        cA, cB = colors
    else:
        cA = np.zeros(A.order, dtype=np.int64)
        cB = np.zeros(B.order, dtype=np.int64)
    search = _Search(A, B, budget, refine=prune)
    for sol in search.solutions(cA, cB):
        yield SemigroupIso(sol)


def find_iso(A: CayleyTable, B: CayleyTable, budget: int = DEFAULT_BUDGET,
             prune: bool = True) -> Optional[SemigroupIso]:
    """Lexicographically least isomorphism, or None when there is none.

    Raises :class:`SearchBudgetExceeded` when the search is cut short, which is
    not the same as a refusal.
    """
    return next(iter_isos(A, B, budget, prune), None)


def automorphisms(A: CayleyTable, budget: int = DEFAULT_BUDGET) -> list[SemigroupIso]:
    return list(iter_isos(A, A, budget))


# -- induced maps on the range -------------------------------------------------

ORDER = "order"
ANTI = "anti"


@dataclass(frozen=True)
class RangeBijection:
    """Bijection ``X' -> Y'`` induced through the constant maps."""

    pairs: tuple[tuple[int, int], ...]
    orientation: str

    def __call__(self, x: int) -> int:
        return self.as_dict()[x]

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def image(self, xs) -> frozenset:
        d = self.as_dict()
        return frozenset(d[x] for x in xs)

    def inverse(self) -> "RangeBijection":
        return RangeBijection(tuple(sorted((y, x) for x, y in self.pairs)), self.orientation)

    def to_json(self) -> dict:
        return {"map": [list(p) for p in self.pairs], "orientation": self.orientation}


def _as_table(x) -> CayleyTable:
    if isinstance(x, CayleyTable):
        if x.elements is None:
            raise InvalidInstance("this operation needs a table built from a ChainPair")
        return x
    return build_cayley(x)


def extract_theta(A, B, m: SemigroupIso) -> RangeBijection:
    """Read off ``a -> a_bar`` from where ``m`` sends the constant map at ``a``.

    ``A`` and ``B`` may be ChainPairs or tables built from them.  The result is
    checked to be strictly monotone or strictly antitone.
    """
    A, B = _as_table(A), _as_table(B)
    pairs = []
    for a in A.pair.range:
        target = B.elements[m[A.index_of((a,) * A.pair.size)]]
        if len(target.ran) != 1:
            raise WitnessError(f"constant at {a} is sent to the non-constant {list(target.image)}")
        pairs.append((a, target.image[0]))
    values = [y for _, y in pairs]
    if len(set(values)) != len(values) or set(values) != B.pair.range_set:
        raise WitnessError(f"constants are not carried bijectively onto the range: {pairs}")
    if is_order_preserving(values):
        orientation = ORDER
    elif is_order_reversing(values):
        orientation = ANTI
    else:
        raise WitnessError(f"induced range map {pairs} is neither monotone nor antitone")
    return RangeBijection(tuple(pairs), orientation)


def conjugation_iso(A: CayleyTable, B: CayleyTable, theta: Sequence[int]) -> SemigroupIso:
    """The map ``alpha -> theta^-1 alpha theta`` on element indices.

    ``theta`` is the image array of a bijection ``X -> Y`` carrying the range
    of ``A`` onto the range of ``B``; the conjugate sends ``y`` to
    ``theta(alpha(theta^-1(y)))``.
    """
    n = A.pair.size
    inv = [0] * n
    for x, y in enumerate(theta):
        inv[y] = x
    mapping = []
    for alpha in A.elements:
        image = tuple(theta[alpha.image[inv[y]]] for y in range(n))
        mapping.append(B.index_of(image))
    return SemigroupIso(tuple(mapping))


def reversal_iso(B: CayleyTable) -> tuple[CayleyTable, SemigroupIso]:
    """Table of the reversed instance and the isomorphism onto it."""
    R = build_cayley(B.pair.reversed())
    n = B.pair.size
    return R, conjugation_iso(B, R, tuple(n - 1 - x for x in range(n)))


@dataclass(frozen=True)
class AdjustedChainIso:
    """Node map between adjusted chains, with the block sizes it matched."""

    domain: ChainPair
    codomain: ChainPair
    node_map: tuple
    block_sizes: tuple[tuple[int, int], ...]
    reversed_codomain: bool

    def to_json(self) -> dict:
        def enc(node):
            return {"block": [node.lo, node.hi]} if isinstance(node, GapBlock) else node
        return {"domain": self.domain.to_json(), "codomain": self.codomain.to_json(),
                "reversed_codomain": self.reversed_codomain,
                "node_map": [[enc(u), enc(v)] for u, v in self.node_map],
                "block_sizes": [list(p) for p in self.block_sizes]}


def _block_witness(pair: ChainPair, block: GapBlock) -> tuple[Transformation, int]:
    """An idempotent whose K-class size measures ``block``, and the offset.

    For an inner block between range points ``a < b`` the cut map at ``b``
    has a K-class of size ``|block| + 1``; at either end the cut map at the
    block edge has a K-class of size ``|block|``.
    """
    rng = pair.range
    s = block.position
    if s == 0:
        return two_valued_cut(pair, block.hi + 1, rng[0], rng[1]), 0
    if s == len(rng):
        return two_valued_cut(pair, block.lo, rng[-2], rng[-1]), 0
    return two_valued_cut(pair, rng[s], rng[s - 1], rng[s]), 1


def _k_class_size(T: CayleyTable, i: int) -> int:
    keys = T.restriction_keys
    return sum(1 for k in keys if k == keys[i])


def extend_theta_hat(A, B, m: SemigroupIso) -> AdjustedChainIso:
    """Extend the induced range map across the gap blocks.

    An antitone range map is first made monotone by composing ``m`` with the
    reversal of ``B``.  Each block is paired positionally, then the pairing is
    checked against the K-class of a cut idempotent and its image under
    ``m``.  Any disagreement raises :class:`PreservationViolation`.
    """
    A, B = _as_table(A), _as_table(B)
    if len(A.pair.range) < 2:
        raise InvalidInstance("block matching needs at least two range points")
    theta = extract_theta(A, B, m)
    reversed_codomain = theta.orientation == ANTI
    if reversed_codomain:
        B, rev = reversal_iso(B)
        m = m.then(rev)
        theta = extract_theta(A, B, m)
        if theta.orientation != ORDER:
            raise WitnessError("reversal did not normalise the range map")
    th = theta.as_dict()
    blocks_b = {blk.position: blk for blk in gap_blocks(B.pair)}
    node_map, sizes, used = [], [], set()
    for node in adjusted_chain(A.pair).nodes:
        if not isinstance(node, GapBlock):
            node_map.append((node, th[node]))
            continue
        partner = blocks_b.get(node.position)
        if partner is None:
            raise PreservationViolation(f"block {node} of {A.pair} has no partner in {B.pair}")
        omega, offset = _block_witness(A.pair, node)
        image_idx = m[A.index_of(omega)]
        measured = _k_class_size(B, image_idx) - offset
        if not node.size == partner.size == measured:
            raise PreservationViolation(
                f"block {node} (size {node.size}) vs partner {partner} (size {partner.size}),"
                f" K-class measure {measured}")
        node_map.append((node, partner))
        sizes.append((node.size, partner.size))
        used.add(partner.position)
    extra = set(blocks_b) - used
    if extra:
        raise PreservationViolation(f"blocks at slots {sorted(extra)} of {B.pair} are not hit")
    return AdjustedChainIso(A.pair, B.pair, tuple(node_map), tuple(sizes), reversed_codomain)


@dataclass
class PreservationReport:
    checked: int = 0
    violations: list = field(default_factory=list)
    orientation: Optional[str] = None

    @property
    def clean(self) -> bool:
        return not self.violations


def _reverse_structure(s: tuple) -> tuple:
    nu, nl, edges = s
    return (nu, nl, tuple(sorted((nu - 1 - u, nl - 1 - v) for u, v in edges)))


def check_preservation(A, B, m: SemigroupIso) -> PreservationReport:
    """Check what the isomorphism must transport, element by element.

    Fixed points, ranges and range-preimages are carried by the induced range
    map; partial graphs keep their shape (mirrored for an antitone range
    map); K-classes go to K-classes.
    """
    A, B = _as_table(A), _as_table(B)
    theta = extract_theta(A, B, m)
    th = theta.as_dict()
    report = PreservationReport(orientation=theta.orientation)
    rngA = A.pair.range_set
    rngB = B.pair.range_set
    k_image: dict = {}
    k_seen: dict = {}
    for i, alpha in enumerate(A.elements):
        beta = B.elements[m[i]]
        report.checked += 1
        tag = f"{list(alpha.image)} -> {list(beta.image)}"
        if theta.image(fixpoints(alpha)) != fixpoints(beta):
            report.violations.append(f"Fix not transported: {tag}")
        if theta.image(alpha.ran) != beta.ran:
            report.violations.append(f"range not transported: {tag}")
        for a in alpha.ran:
            pre = alpha.preimage(a) & rngA
            if theta.image(pre) != beta.preimage(th[a]) & rngB:
                report.violations.append(f"preimage of {a} not transported: {tag}")
        ga, gb = partial_graph(alpha).structure(), partial_graph(beta).structure()
        if theta.orientation == ANTI:
            ga = _reverse_structure(ga)
        if ga != gb:
            report.violations.append(f"partial graph shape differs: {tag}")
        ka, kb = A.restriction_keys[i], B.restriction_keys[m[i]]
        if k_image.setdefault(ka, kb) != kb or k_seen.setdefault(kb, ka) != ka:
            report.violations.append(f"K-class not carried to a K-class: {tag}")
    return report
