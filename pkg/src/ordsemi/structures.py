"""Adjusted chains, partial graphs, the K relation and the two-point catalog."""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .chains import ChainPair, GapBlock, InvalidInstance, gap_blocks, gap_signature
from .transformations import Transformation, compose, enumerate_top

Node = Union[int, GapBlock]


@dataclass(frozen=True)
class AdjustedChain:
    """Range elements interleaved with the nonempty gap blocks, in chain order."""

    pair: ChainPair
    nodes: tuple

    def render(self, labels: Optional[Sequence] = None) -> str:
        lab = labels if labels is not None else range(self.pair.size)
        parts = []
        for node in self.nodes:
            if isinstance(node, GapBlock):
                parts.append("[{" + ",".join(str(lab[x]) for x in node.elements) + "}]")
            else:
                parts.append(str(lab[node]))
        return " ".join(parts)

    def __str__(self):
        return self.render()

    def index_of(self, node: Node) -> int:
        return self.nodes.index(node)

    def to_json(self) -> list:
        return [{"block": [n.lo, n.hi]} if isinstance(n, GapBlock) else n for n in self.nodes]


def adjusted_chain(pair: ChainPair) -> AdjustedChain:
    blocks = {b.position: b for b in gap_blocks(pair)}
    nodes: list = []
    for slot, r in enumerate(pair.range):
        if slot in blocks:
            nodes.append(blocks[slot])
        nodes.append(r)
    last = len(pair.range)
    if last in blocks:
        nodes.append(blocks[last])
    return AdjustedChain(pair, tuple(nodes))


@dataclass(frozen=True)
class PartialGraph:
    """Upper vertices ``X'``, lower vertices ``ran alpha``, one edge per upper vertex.

    Lower vertices come from the whole domain, edges only from ``X'``; a lower
    vertex hit only from outside ``X'`` is an isolated component.
    """

    upper: tuple[int, ...]
    lower: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def components(self) -> list[tuple[tuple[int, ...], int]]:
        """Components left to right, each as (upper vertices, lower vertex)."""
        groups = defaultdict(list)
        for u, v in self.edges:
            groups[v].append(u)
        return [(tuple(sorted(groups[v])), v) for v in self.lower]

    @property
    def n_components(self) -> int:
        # union-find over both vertex layers, independent of components()
        parent: dict = {}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u in self.upper:
            parent[("u", u)] = ("u", u)
        for v in self.lower:
            parent[("l", v)] = ("l", v)
        for u, v in self.edges:
            ru, rv = find(("u", u)), find(("l", v))
            if ru != rv:
                parent[ru] = rv
        return len({find(v) for v in parent})

    def structure(self) -> tuple:
        """Shape of the graph with vertex names forgotten but order kept."""
        up = {u: i for i, u in enumerate(self.upper)}
        low = {v: i for i, v in enumerate(self.lower)}
        return (len(self.upper), len(self.lower),
                tuple(sorted((up[u], low[v]) for u, v in self.edges)))

    def to_dot(self, labels: Optional[Sequence] = None, name: str = "partial_graph") -> str:
        lab = (lambda x: str(labels[x])) if labels is not None else str
        lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [shape=circle];"]
        lines.append("  { rank=same; " + " ".join(f"u{u};" for u in self.upper) + " }")
        lines.append("  { rank=same; " + " ".join(f"l{v};" for v in self.lower) + " }")
        for u in self.upper:
            lines.append(f'  u{u} [label="{lab(u)}"];')
        for v in self.lower:
            lines.append(f'  l{v} [label="{lab(v)}"];')
        # invisible chains pin left-to-right order inside each rank
        for layer, tag in ((self.upper, "u"), (self.lower, "l")):
            if len(layer) > 1:
                lines.append("  " + " -> ".join(f"{tag}{x}" for x in layer)
                             + " [style=invis];")
        for u, v in self.edges:
            lines.append(f"  u{u} -> l{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"upper": list(self.upper), "lower": list(self.lower),
                "edges": [list(e) for e in self.edges]}


def partial_graph(alpha: Transformation) -> PartialGraph:
    upper = alpha.pair.range
    return PartialGraph(
        upper=upper,
        lower=tuple(sorted(alpha.ran)),
        edges=tuple((x, alpha.image[x]) for x in upper),
    )


def k_key(alpha: Transformation) -> tuple:
    """Restriction to the range together with the range of the whole map."""
    return (tuple(alpha.image[x] for x in alpha.pair.range), tuple(sorted(alpha.ran)))


def k_equivalent(alpha: Transformation, beta: Transformation) -> bool:
    if alpha.pair != beta.pair:
        raise InvalidInstance("K is only defined within one instance")
    return k_key(alpha) == k_key(beta)


@dataclass(frozen=True)
class KClassPartition:
    """K-classes as tuples of element indices into the canonical enumeration."""

    keys: tuple
    classes: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(len(c) for c in self.classes))

    def class_of(self, index: int) -> int:
        for i, cls in enumerate(self.classes):
            if index in cls:
                return i
        raise KeyError(index)

    def labels(self, n: int) -> list[int]:
        out = [-1] * n
        for i, cls in enumerate(self.classes):
            for j in cls:
                out[j] = i
        return out


def k_classes(pair: ChainPair, elements: Optional[Sequence[Transformation]] = None) -> KClassPartition:
    """Partition of the enumerated semigroup; classes ordered by their first member."""
    elements = enumerate_top(pair) if elements is None else elements
    groups: dict = {}
    for i, alpha in enumerate(elements):
        groups.setdefault(k_key(alpha), []).append(i)
    keys = tuple(groups)
    return KClassPartition(keys, tuple(tuple(groups[k]) for k in keys))


class LambdaShape(enum.IntEnum):
    """The five K-class shapes when the range has two points ``p < q``."""

    L1 = 1  # constant p
    L2 = 2  # constant q
    L3 = 3  # p -> p, q -> q
    L4 = 4  # p, q -> p, something above q reaches q
    L5 = 5  # p, q -> q, something below p reaches p

    def __str__(self):
        return f"λ{self.value}"


# class of (row * column) for the two-point case
LAMBDA_TABLE = {
    LambdaShape.L1: (1, 2, 1, 1, 2),
    LambdaShape.L2: (1, 2, 2, 1, 2),
    LambdaShape.L3: (1, 2, 3, 1, 2),
    LambdaShape.L4: (1, 2, 4, 1, 2),
    LambdaShape.L5: (1, 2, 5, 1, 2),
}


def _require_two_point(pair: ChainPair) -> tuple[int, int]:
    if len(pair.range) != 2:
        raise InvalidInstance(f"λ-shapes need a two-point range, got {list(pair.range)}")
    return pair.range


def classify_lambda(alpha: Transformation) -> LambdaShape:
    p, q = _require_two_point(alpha.pair)
    pa, qa = alpha.image[p], alpha.image[q]
    full = len(alpha.ran) == 2
    if (pa, qa) == (p, q):
        return LambdaShape.L3
    if (pa, qa) == (p, p):
        return LambdaShape.L4 if full else LambdaShape.L1
    if (pa, qa) == (q, q):
        return LambdaShape.L5 if full else LambdaShape.L2
    raise InvalidInstance(f"{list(alpha.image)} is not order-preserving on the range")


def lambda_class_sizes(pair: ChainPair) -> tuple[int, int, int, int, int]:
    """Predicted class sizes ``(1, 1, |M2| + 1, |M3|, |M1|)``."""
    _require_two_point(pair)
    m1, m2, m3 = gap_signature(pair).gaps
    return (1, 1, m2 + 1, m3, m1)


def lambda_classes(pair: ChainPair,
                   elements: Optional[Sequence[Transformation]] = None) -> dict[LambdaShape, list[int]]:
    """Element indices grouped by λ-shape, in enumeration order."""
    _require_two_point(pair)
    elements = enumerate_top(pair) if elements is None else elements
    out = {shape: [] for shape in LambdaShape}
    for i, alpha in enumerate(elements):
        out[classify_lambda(alpha)].append(i)
    return out


@dataclass
class LambdaTableReport:
    pair: ChainPair
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def lambda_mult_table_check(pair: ChainPair,
                            elements: Optional[Sequence[Transformation]] = None) -> LambdaTableReport:
    """Check every product against the 5x5 class table.

    Right factors of shape λ3 must also leave the left factor unchanged
    element-wise, not just class-wise.
    """
    _require_two_point(pair)
    elements = enumerate_top(pair) if elements is None else elements
    shapes = [classify_lambda(a) for a in elements]
    report = LambdaTableReport(pair)
    for i, alpha in enumerate(elements):
        row = LAMBDA_TABLE[shapes[i]]
        for j, beta in enumerate(elements):
            prod = compose(alpha, beta)
            got = classify_lambda(prod)
            want = row[shapes[j] - 1]
            report.checked += 1
            if got != want:
                report.mismatches.append(
                    (alpha.image, beta.image, f"class {got} expected λ{want}"))
            elif shapes[j] == LambdaShape.L3 and prod != alpha:
                report.mismatches.append(
                    (alpha.image, beta.image, "right factor in λ3 changed the left factor"))
    return report
