"""Epimorphism counting and pro-p quotient decisions over explicit groups.

Two search paths are provided and kept honest against each other by the test
suite: plain filtered enumeration (``count_epimorphisms``) and coset-pruned
search for one-relator pro-p presentations (``is_prop_quotient``), with the
strict central-reduction variant available where the relator's exponent data
makes lifts irrelevant.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Optional, Sequence

from . import kernels
from .groups import FiniteGroup, Subgroup
from .words import Presentation, Word

DEFAULT_BUDGET = 10**9


def configured_budget(budget: Optional[int] = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("ADMISSIBILITY_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class BudgetExceeded(RuntimeError):
    """Search-space estimate exceeds the configured budget.

    Raised before any scanning starts; carries the estimate so callers can
    report it.
    """

    def __init__(self, estimate: int, budget: int, context: str = ""):
        self.estimate = estimate
        self.budget = budget
        msg = f"estimated {estimate} candidate tuples exceeds budget {budget}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class CentralReductionInapplicable(RuntimeError):
    """The relator's exponent sums are not killed by the central subgroup."""


@dataclass(frozen=True)
class QuotientVerdict:
    """Outcome of a quotient test, with the witness or refutation data."""

    holds: bool
    witness: Optional[tuple[int, ...]]
    method: str
    tuples_scanned: int
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _pure_power_generator(word: Word) -> Optional[tuple[int, int]]:
    """(generator, exponent-sum) when the word mentions a single generator.

    Any word in one generator evaluates to that generator raised to its
    exponent sum, so such relators become candidate filters.
    """
    gens = word.referenced_generators()
    if len(gens) != 1:
        return None
    g = next(iter(gens))
    return g, word.exponent_sums(g + 1)[g]


def _candidate_lists(pres: Presentation, G: FiniteGroup) -> tuple[list[list[int]], list[Word]]:
    orders = G.element_orders()
    bounds: list[Optional[int]] = list(pres.torsion)
    remaining: list[Word] = []
    for rel in pres.relators:
        pure = _pure_power_generator(rel)
        if pure is not None:
            g, e = pure
            if e == 0:
                continue
            bound = abs(e)
            bounds[g] = math.gcd(bounds[g], bound) if bounds[g] else bound
        else:
            remaining.append(rel)
    cand = []
    for g in range(pres.ngen):
        if bounds[g] is None:
            cand.append(list(range(G.order)))
        else:
            cand.append([x for x in range(G.order) if bounds[g] % orders[x] == 0])
    return cand, remaining


def search_space(pres: Presentation, G: FiniteGroup) -> int:
    cand, _ = _candidate_lists(pres, G)
    return math.prod(len(c) for c in cand)


def count_epimorphisms(pres: Presentation, G: FiniteGroup, *,
                       budget: Optional[int] = None, workers: int = 1) -> int:
    """Exact number of generator assignments that satisfy every relator and
    torsion bound and generate G."""
    if pres.mode != "finite":
        raise ValueError("epimorphism counting requires an abstract-finite presentation")
    cand, remaining = _candidate_lists(pres, G)
    estimate = math.prod(len(c) for c in cand)
    limit = configured_budget(budget)
    if estimate > limit:
        raise BudgetExceeded(estimate, limit, "epimorphism count")
    programs = [rel.postfix() for rel in remaining]
    if workers > 1 and cand and len(cand[0]) >= workers:
        return _scan_chunked(G, cand, programs, workers)
    hits, _, _ = kernels.scan_assignments(G, cand, programs,
                                          check_generation=True, find_first=False)
    return hits


def _scan_chunked(G: FiniteGroup, cand: list[list[int]], programs, workers: int) -> int:
    """Partition the outermost candidate list into deterministic chunks.

    The merge is a plain sum, so the result is identical for any worker count.
    """
    from concurrent.futures import ThreadPoolExecutor

    first = cand[0]
    size = (len(first) + workers - 1) // workers
    chunks = [first[i:i + size] for i in range(0, len(first), size)]

    def run(chunk):
        hits, _, _ = kernels.scan_assignments(G, [chunk] + cand[1:], programs,
                                              check_generation=True, find_first=False)
        return hits

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(run, chunks))


def count_normal_subgroups_with_quotient(pres: Presentation, G: FiniteGroup, *,
                                         budget: Optional[int] = None) -> int:
    """Epimorphism count divided by |Aut(G)| (their fibers are the Aut-orbits)."""
    count = count_epimorphisms(pres, G, budget=budget)
    aut = G.automorphism_count()
    if count % aut:
        raise RuntimeError(f"epimorphism count {count} not divisible by |Aut| = {aut}")
    return count // aut


# ---------------------------------------------------------------------------
# pro-p quotient tests
# ---------------------------------------------------------------------------


def _require_p_group(pres: Presentation, G: FiniteGroup) -> int:
    if pres.mode != "pro-p":
        raise ValueError("quotient test requires a pro-p presentation")
    p = G.p_group_prime()
    if p is None or (p != 1 and p != pres.p):
        raise ValueError(
            f"target of order {G.order} is not a {pres.p}-group"
        )
    return pres.p


def _verify_witness(pres: Presentation, G: FiniteGroup, witness: Sequence[int]) -> None:
    for rel in pres.relators:
        if rel.evaluate(witness, G) != G.identity:
            raise RuntimeError("witness fails a relator")
    if len(set(G.closure(witness))) != G.order:
        raise RuntimeError("witness does not generate")


def is_prop_quotient(pres: Presentation, G: FiniteGroup, *, strategy: str = "auto",
                     budget: Optional[int] = None) -> QuotientVerdict:
    """Whether the finite p-group G is a quotient of the pro-p presentation.

    A p-group is a quotient exactly when some generator assignment generates G
    and kills every relator.  Free presentations are decided by minimal
    generator count; one-relator presentations go through coset-pruned search
    (images are fixed modulo a central non-generating subgroup first), or
    through the strict central reduction when its precondition holds.
    """
    _require_p_group(pres, G)
    if any(b is not None for b in pres.torsion):
        raise ValueError("torsion bounds are not supported in pro-p quotient tests")
    if pres.is_free:
        rank = pres.ngen
        d = G.minimal_generator_count()
        if d > rank:
            return QuotientVerdict(False, None, "free-rank", 0,
                                   f"minimal generator count {d} exceeds rank {rank}")
        gens = list(G.generating_sequence())
        witness = tuple(gens + [G.identity] * (rank - len(gens)))
        _verify_witness(pres, G, witness)
        return QuotientVerdict(True, witness, "free-rank", 0,
                               f"minimal generator count {d} <= rank {rank}")
    if strategy == "central-reduction":
        return central_reduction_quotient_test(pres, G, budget=budget)
    if strategy == "auto":
        try:
            return central_reduction_quotient_test(pres, G, budget=budget)
        except CentralReductionInapplicable:
            pass
    elif strategy != "backtracking":
        raise ValueError(f"unknown strategy {strategy!r}")
    return _backtracking_quotient_test(pres, G, budget=budget)


def _central_core(G: FiniteGroup) -> frozenset[int]:
    """Z(G) intersected with the Frattini subgroup: central and non-generating,
    so search may fix images modulo it."""
    return G.center().members & G.frattini_subgroup().members


def _power_subset(G: FiniteGroup, members: frozenset[int], e: int) -> frozenset[int]:
    return frozenset(G.power(c, e) for c in members)


def _coset_data(G: FiniteGroup, members: frozenset[int]):
    sub = Subgroup(G, members, _checked=True)
    quotient, proj = G.quotient(sub)
    cosets: list[list[int]] = [[] for _ in range(quotient.order)]
    for x in range(G.order):
        cosets[proj[x]].append(x)
    reps = [min(c) for c in cosets]
    return quotient, proj, cosets, reps


def _backtracking_quotient_test(pres: Presentation, G: FiniteGroup, *,
                                budget: Optional[int] = None) -> QuotientVerdict:
    limit = configured_budget(budget)
    k = pres.ngen
    core = _central_core(G)
    quotient, proj, cosets, reps = _coset_data(G, core)
    nq = quotient.order
    if nq**k > limit:
        raise BudgetExceeded(nq**k, limit, "coset blocks alone")

    phi_quotient, proj_phi = G.quotient(G.frattini_subgroup())
    phi_of_coset = [int(proj_phi[r]) for r in reps]

    def spans(block: tuple[int, ...]) -> bool:
        images = [phi_of_coset[q] for q in block]
        return len(phi_quotient.closure(images)) == phi_quotient.order

    sums = [rel.exponent_sums(k) for rel in pres.relators]
    reachable: list[frozenset[int]] = []
    for s in sums:
        g = 0
        for e in s:
            g = math.gcd(g, abs(e))
        reachable.append(_power_subset(G, core, g) if g else frozenset({G.identity}))

    candidate_blocks: list[tuple[int, ...]] = []
    scanned = 0
    span_cache: dict[tuple[int, ...], bool] = {}
    for block in itertools.product(range(nq), repeat=k):
        key = tuple(sorted(set(block)))
        hit = span_cache.get(key)
        if hit is None:
            hit = spans(block)
            span_cache[key] = hit
        if not hit:
            continue
        assignment = [reps[q] for q in block]
        scanned += 1
        ok = True
        for rel, reach in zip(pres.relators, reachable):
            if rel.evaluate(assignment, G) not in reach:
                ok = False
                break
        if ok:
            candidate_blocks.append(block)

    block_cost = len(core) ** k
    estimate = scanned + len(candidate_blocks) * block_cost
    if estimate > limit:
        raise BudgetExceeded(estimate, limit, "lift scan over candidate blocks")

    programs = [rel.postfix() for rel in pres.relators]
    for block in candidate_blocks:
        cand = [cosets[q] for q in block]
        hits, witness, block_scanned = kernels.scan_assignments(
            G, cand, programs, check_generation=False, find_first=True)
        scanned += block_scanned
        if hits:
            _verify_witness(pres, G, witness)
            return QuotientVerdict(True, witness, "backtracking", scanned)
    return QuotientVerdict(False, None, "backtracking", scanned,
                           "no spanning assignment kills the relators")


def central_reduction_quotient_test(pres: Presentation, G: FiniteGroup, *,
                                    central: Optional[frozenset[int]] = None,
                                    budget: Optional[int] = None) -> QuotientVerdict:
    """Quotient decision by enumerating images modulo a central subgroup only.

    Precondition (checked symbolically): the exponent of the central subgroup
    divides every per-generator exponent sum of every relator, so relator
    values are independent of the central parts; generation is equivalent to
    spanning modulo the Frattini subgroup because the central subgroup is
    contained in it.  On its domain this agrees with ``is_prop_quotient``.
    """
    _require_p_group(pres, G)
    limit = configured_budget(budget)
    core = central if central is not None else _central_core(G)
    center = G.center().members
    phi = G.frattini_subgroup().members
    if not core <= center:
        raise ValueError("provided subgroup is not central")
    if not core <= phi:
        raise ValueError("provided central subgroup is not contained in the Frattini subgroup")
    exponent = 1
    for c in core:
        exponent = math.lcm(exponent, G.element_order(c))
    k = pres.ngen
    for rel in pres.relators:
        for t, e in enumerate(rel.exponent_sums(k)):
            if e % exponent:
                raise CentralReductionInapplicable(
                    f"central exponent {exponent} does not divide the exponent sum {e} "
                    f"of generator {pres.generators[t]}"
                )

    quotient, proj, cosets, reps = _coset_data(G, frozenset(core))
    nq = quotient.order
    if nq**k > limit:
        raise BudgetExceeded(nq**k, limit, "central reduction scan")

    phi_quotient, proj_phi = G.quotient(Subgroup(G, frozenset(phi), _checked=True))
    phi_of_coset = [int(proj_phi[r]) for r in reps]
    span_cache: dict[tuple[int, ...], bool] = {}

    scanned = 0
    for block in itertools.product(range(nq), repeat=k):
        scanned += 1
        key = tuple(sorted(set(block)))
        hit = span_cache.get(key)
        if hit is None:
            images = [phi_of_coset[q] for q in block]
            hit = len(phi_quotient.closure(images)) == phi_quotient.order
            span_cache[key] = hit
        if not hit:
            continue
        assignment = tuple(reps[q] for q in block)
        if all(rel.evaluate(assignment, G) == G.identity for rel in pres.relators):
            _verify_witness(pres, G, assignment)
            return QuotientVerdict(True, assignment, "central-reduction", scanned)
    return QuotientVerdict(False, None, "central-reduction", scanned,
                           f"all {nq**k} coset tuples scanned without a hit")
