"""Deciding isomorphism from gap signatures, with explicit witnesses.

The verdict never consults the oracle; :func:`cross_validate` does that and
compares.
"""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .chains import (FORWARD, REVERSED, ChainPair, InvalidInstance,
                     gap_signature, is_order_preserving, is_order_reversing,
                     pair_isomorphism)
from .semigroup import (DEFAULT_BUDGET, CayleyTable, PreservationViolation,
                        SearchBudgetExceeded, SemigroupIso, WitnessError,
                        build_cayley, check_preservation, conjugation_iso,
                        extend_theta_hat, extract_theta, find_iso, verify_iso)
from .structures import LambdaShape, lambda_classes

log = logging.getLogger(__name__)

ISOMORPHIC = "isomorphic"
NOT_ISOMORPHIC = "not_isomorphic"

TRIVIAL_X1 = "trivial_x1"
RANGE_CARDINALITY = "range_cardinality"
SIGNATURE_X2 = "signature_x2"
SIGNATURE_GENERAL = "signature_general"


@dataclass(frozen=True)
class Decision:
    verdict: str
    rule: str
    mirror_clause_used: bool = False
    witness: Optional[dict] = None
    note: str = ""

    @property
    def isomorphic(self) -> bool:
        return self.verdict == ISOMORPHIC

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "rule": self.rule,
                "mirror_clause_used": self.mirror_clause_used,
                "witness": self.witness, "note": self.note}


def decide_iso(a: ChainPair, b: ChainPair) -> Decision:
    """Decide ``T_OP(a) ~ T_OP(b)`` from range sizes and gap signatures.

    Equal range sizes of at least two: isomorphic exactly when the signatures
    agree directly or after reversing one of them.  For two-point ranges the
    reversed case is reported as the mirror clause.
    """
    ka, kb = len(a.range), len(b.range)
    if ka == 1 and kb == 1:
        return Decision(ISOMORPHIC, TRIVIAL_X1,
                        witness={"kind": "trivial", "mapping": [0]},
                        note="both semigroups have a single element")
    if ka != kb:
        return Decision(NOT_ISOMORPHIC, RANGE_CARDINALITY,
                        note=f"ranges of size {ka} and {kb} cannot be matched by constants")
    rule = SIGNATURE_X2 if ka == 2 else SIGNATURE_GENERAL
    sa, sb = gap_signature(a), gap_signature(b)
    theta = pair_isomorphism(a, b, FORWARD)
    if theta is not None:
        if ka == 2:
            witness = {"kind": "lambda_union", "class_sizes": list(_x2_sizes(a))}
        else:
            witness = {"kind": "chain_map", "theta": list(theta), "orientation": FORWARD}
        return Decision(ISOMORPHIC, rule, witness=witness,
                        note=f"signatures agree: {sa.gaps}")
    theta = pair_isomorphism(a, b, REVERSED)
    if theta is not None:
        mirror = ka == 2
        note = f"signature {sa.gaps} is the reverse of {sb.gaps}"
        if mirror:
            note += "; decided by the mirror clause (gap triple read backwards)"
        return Decision(ISOMORPHIC, rule, mirror_clause_used=mirror,
                        witness={"kind": "chain_map", "theta": list(theta),
                                 "orientation": REVERSED},
                        note=note)
    return Decision(NOT_ISOMORPHIC, rule,
                    note=f"signatures {sa.gaps} and {sb.gaps} differ, also after reversal")


def _x2_sizes(pair: ChainPair) -> tuple:
    m1, m2, m3 = gap_signature(pair).gaps
    return (1, 1, m2 + 1, m3, m1)


def validate_theta(a: ChainPair, b: ChainPair, theta: Sequence[int]) -> str:
    """Check ``theta`` is an order-(anti-)isomorphism carrying range onto range.

    Returns the orientation; raises InvalidInstance otherwise.
    """
    theta = tuple(theta)
    if a.size != b.size or len(theta) != a.size or sorted(theta) != list(range(b.size)):
        raise InvalidInstance(f"theta {list(theta)} is not a bijection between the chains")
    if {theta[x] for x in a.range} != b.range_set:
        raise InvalidInstance(f"theta {list(theta)} does not carry {list(a.range)} onto {list(b.range)}")
    if is_order_preserving(theta):
        return FORWARD
    if is_order_reversing(theta):
        return REVERSED
    raise InvalidInstance(f"theta {list(theta)} is neither monotone nor antitone")


def construct_iso_from_theta(a, b, theta: Sequence[int],
                             orientation: Optional[str] = None) -> SemigroupIso:
    """Conjugation by a chain (anti-)isomorphism, on canonical indices."""
    A = a if isinstance(a, CayleyTable) else build_cayley(a)
    B = b if isinstance(b, CayleyTable) else build_cayley(b)
    found = validate_theta(A.pair, B.pair, theta)
    if orientation is not None and orientation != found:
        raise InvalidInstance(f"theta is {found}, not {orientation}")
    return conjugation_iso(A, B, tuple(theta))


def _bijection(f, size: int, what: str) -> tuple[int, ...]:
    if f is None:
        return tuple(range(size))
    f = tuple(f)
    if sorted(f) != list(range(size)):
        raise InvalidInstance(f"{what} must be a permutation of 0..{size - 1}, got {list(f)}")
    return f


def construct_iso_x2(a, b, f3=None, f4=None, f5=None) -> SemigroupIso:
    """Union of arbitrary bijections between matching λ-classes.

    ``f3``, ``f4``, ``f5`` are permutations of positions within the λ3, λ4 and
    λ5 classes (both listed in enumeration order): the ``i``-th member on the
    left goes to the ``f[i]``-th member on the right.  Omitted ones pair
    members in enumeration order.  The two constant classes are singletons.
    """
    A = a if isinstance(a, CayleyTable) else build_cayley(a)
    B = b if isinstance(b, CayleyTable) else build_cayley(b)
    if len(A.pair.range) != 2 or len(B.pair.range) != 2:
        raise InvalidInstance("the λ-class construction needs two-point ranges")
    ca = lambda_classes(A.pair, A.elements)
    cb = lambda_classes(B.pair, B.elements)
    sizes_a = [len(ca[s]) for s in LambdaShape]
    sizes_b = [len(cb[s]) for s in LambdaShape]
    if sizes_a != sizes_b:
        raise InvalidInstance(f"λ-class sizes differ: {sizes_a} vs {sizes_b}")
    perms = {LambdaShape.L1: (0,), LambdaShape.L2: (0,),
             LambdaShape.L3: _bijection(f3, sizes_a[2], "f3"),
             LambdaShape.L4: _bijection(f4, sizes_a[3], "f4"),
             LambdaShape.L5: _bijection(f5, sizes_a[4], "f5")}
    mapping = [0] * A.order
    for shape in LambdaShape:
        for i, src in enumerate(ca[shape]):
            mapping[src] = cb[shape][perms[shape][i]]
    return SemigroupIso(tuple(mapping))


def witness_iso(decision: Decision, a, b) -> SemigroupIso:
    """Materialise the witness of an isomorphic verdict as an element mapping."""
    if not decision.isomorphic:
        raise ValueError("no witness for a non-isomorphic verdict")
    kind = decision.witness["kind"]
    if kind == "trivial":
        return SemigroupIso((0,))
    if kind == "lambda_union":
        return construct_iso_x2(a, b)
    return construct_iso_from_theta(a, b, decision.witness["theta"],
                                    decision.witness["orientation"])


# -- instance families and the cross-check -------------------------------------

def instance_family(max_size: int, min_size: int = 1, min_range: int = 2,
                    max_range: Optional[int] = None) -> list[ChainPair]:
    """Every instance with ``min_size <= n <= max_size`` and range size in bounds."""
    out = []
    for n in range(min_size, max_size + 1):
        hi = n if max_range is None else min(n, max_range)
        for k in range(max(1, min_range), hi + 1):
            for rng in itertools.combinations(range(n), k):
                out.append(ChainPair.of(n, rng))
    return out


def _pair_key(p: ChainPair) -> tuple:
    return (p.size, len(p.range), p.range)


@dataclass
class PairOutcome:
    a: ChainPair
    b: ChainPair
    decision: Decision
    oracle: Optional[bool]           # None when the budget ran out
    witness: Optional[SemigroupIso] = None
    preservation: list = field(default_factory=list)

    @property
    def agrees(self) -> bool:
        return self.oracle is not None and self.oracle == self.decision.isomorphic

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(),
                "decision": self.decision.to_json(),
                "oracle": None if self.oracle is None else
                ("isomorphic" if self.oracle else "not_isomorphic"),
                "witness": None if self.witness is None else self.witness.to_json(),
                "agrees": self.agrees,
                "preservation_violations": self.preservation}


@dataclass
class CrossValidationReport:
    outcomes: list = field(default_factory=list)

    @property
    def mismatches(self) -> list:
        return [o for o in self.outcomes if o.oracle is not None and not o.agrees]

    @property
    def skipped(self) -> list:
        return [o for o in self.outcomes if o.oracle is None]

    @property
    def violations(self) -> list:
        return [o for o in self.outcomes if o.preservation]

    @property
    def isomorphic_pairs(self) -> int:
        return sum(1 for o in self.outcomes if o.oracle)

    @property
    def clean(self) -> bool:
        return not (self.mismatches or self.skipped or self.violations)

    def summary(self) -> str:
        return (f"{len(self.outcomes)} pairs, {self.isomorphic_pairs} isomorphic, "
                f"{len(self.mismatches)} mismatches, {len(self.violations)} with "
                f"preservation violations, {len(self.skipped)} skipped")

    def to_json(self) -> dict:
        return {"pairs": len(self.outcomes), "isomorphic": self.isomorphic_pairs,
                "mismatches": [o.to_json() for o in self.mismatches],
                "violations": [o.to_json() for o in self.violations],
                "skipped": [o.to_json() for o in self.skipped],
                "clean": self.clean,
                "outcomes": [o.to_json() for o in self.outcomes]}


def audit_witness(A: CayleyTable, B: CayleyTable, m: SemigroupIso) -> list[str]:
    """Preservation checks on one isomorphism; returns violation messages."""
    problems = []
    if not verify_iso(A, B, m):
        return ["oracle witness fails verify_iso"]
    try:
        report = check_preservation(A, B, m)
        problems += report.violations
        if len(A.pair.range) >= 2:
            extend_theta_hat(A, B, m)
    except (WitnessError, PreservationViolation) as exc:
        problems.append(f"{type(exc).__name__}: {exc}")
    return problems


def _compare(A: CayleyTable, B: CayleyTable, budget: int, audit: bool) -> PairOutcome:
    decision = decide_iso(A.pair, B.pair)
    try:
        m = find_iso(A, B, budget=budget)
    except SearchBudgetExceeded:
        log.warning("budget exceeded on %s vs %s", A.pair, B.pair)
        return PairOutcome(A.pair, B.pair, decision, None)
    out = PairOutcome(A.pair, B.pair, decision, m is not None, m)
    if m is not None and audit:
        out.preservation = audit_witness(A, B, m)
    return out


def _compare_job(args) -> PairOutcome:
    a, b, budget, audit = args
    return _compare(build_cayley(a), build_cayley(b), budget, audit)


def cross_validate(instances: Iterable[ChainPair],
                   pairs: Optional[Iterable[tuple[ChainPair, ChainPair]]] = None,
                   budget: int = DEFAULT_BUDGET, audit: bool = True,
                   workers: int = 1) -> CrossValidationReport:
    """Compare :func:`decide_iso` with the oracle on every ordered pair.

    ``pairs`` restricts the comparison to the given ordered pairs; otherwise
    all ordered pairs of ``instances`` are used.  Oracle witnesses are also
    run through the preservation checks when ``audit`` is set.  Outcomes are
    sorted by instance keys, so the report does not depend on ``workers``.
    """
    instances = sorted(set(instances), key=_pair_key)
    if pairs is None:
        pairs = [(a, b) for a in instances for b in instances]
    pairs = sorted(set(pairs), key=lambda ab: (_pair_key(ab[0]), _pair_key(ab[1])))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            outcomes = list(pool.map(_compare_job, [(a, b, budget, audit) for a, b in pairs],
                                     chunksize=16))
    else:
        tables: dict = {}

        def table(p):
            if p not in tables:
                tables[p] = build_cayley(p)
            return tables[p]

        outcomes = [_compare(table(a), table(b), budget, audit) for a, b in pairs]
    return CrossValidationReport(outcomes)
