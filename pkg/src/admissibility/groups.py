"""Finite groups as explicit multiplication tables.

Everything downstream (word evaluation, epimorphism search, certificate
checks) consumes groups in this single representation: a dense order x order
table of element indices.  Orders stay in the low thousands, so table lookup
beats any structured representation for search throughput, and construction
invariants (Latin square, associativity, two-sided identity and inverses) are
cheap enough to verify eagerly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 4096

# Full n^3 associativity verification is used up to this order; above it we
# switch to Light's test on a generating sequence plus seeded random sampling.
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 256
_ASSOCIATIVITY_SAMPLES = 2048


class GroupConstructionError(ValueError):
    """A multiplication table or construction parameter violates a group axiom."""


def _prime_factors(n: int) -> list[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    part = 1
    while n % p == 0:
        part *= p
        n //= p
    return part


class FiniteGroup:
    """A finite group given by its full multiplication table.

    Elements are the indices 0..order-1; ``table[a, b]`` is the index of the
    product a*b.  Instances are immutable after construction (the table is a
    read-only numpy array) and all queries are pure, so values can be shared
    freely between concurrent searches.
    """

    def __init__(
        self,
        table,
        labels: Optional[Sequence[str]] = None,
        generator_hints: Optional[Sequence[int]] = None,
        name: Optional[str] = None,
        *,
        order_cap: int = DEFAULT_ORDER_CAP,
        strict_associativity: Optional[bool] = None,
        validate: bool = True,
    ):
        arr = np.ascontiguousarray(np.asarray(table, dtype=np.intc))
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise GroupConstructionError(f"table must be square, got shape {arr.shape}")
        n = arr.shape[0]
        if n == 0:
            raise GroupConstructionError("empty table")
        if n > order_cap:
            raise GroupConstructionError(
                f"order {n} exceeds cap {order_cap}; pass order_cap= to raise it"
            )
        self.order = n
        self.table = arr
        self.name = name
        if labels is not None:
            labels = [str(x) for x in labels]
            if len(labels) != n:
                raise GroupConstructionError(
                    f"{len(labels)} labels for {n} elements"
                )
        self.labels = labels
        self.generator_hints = tuple(int(g) for g in generator_hints) if generator_hints else None
        self._cache: dict = {}
        if validate:
            self._verify(strict_associativity)
        else:
            self.identity = self._find_identity()
        arr.setflags(write=False)

    # -- construction checks ------------------------------------------------

    def _find_identity(self) -> int:
        n, t = self.order, self.table
        idx = np.arange(n, dtype=np.intc)
        rows = np.nonzero((t == idx[None, :]).all(axis=1))[0]
        for e in rows:
            if (t[:, e] == idx).all():
                return int(e)
        raise GroupConstructionError("no two-sided identity element")

    def _verify(self, strict: Optional[bool]) -> None:
        n, t = self.order, self.table
        if t.min() < 0 or t.max() >= n:
            raise GroupConstructionError("table entries out of range")
        idx = np.arange(n, dtype=np.intc)
        if not (np.sort(t, axis=1) == idx[None, :]).all():
            raise GroupConstructionError("table is not a Latin square (row defect)")
        if not (np.sort(t, axis=0) == idx[:, None]).all():
            raise GroupConstructionError("table is not a Latin square (column defect)")
        self.identity = self._find_identity()
        inv = np.where(t == self.identity)[1]
        if not (t[inv, idx] == self.identity).all():
            raise GroupConstructionError("some element has no two-sided inverse")
        if strict is None:
            strict = n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT
        if strict:
            self._verify_associativity_full()
        else:
            self._verify_associativity_generators()

    def _verify_associativity_full(self) -> None:
        t = self.table
        if self.order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
            if not np.array_equal(t[t, :], t[:, t]):
                raise GroupConstructionError("associativity fails")
            return
        # chunk over the first coordinate to bound memory
        for a in range(self.order):
            if not np.array_equal(t[t[a], :], t[a][t]):
                raise GroupConstructionError(f"associativity fails at element {a}")

    def _verify_associativity_generators(self) -> None:
        t = self.table
        gens = self.generating_sequence()
        # Light's test: closure is built from left-associated products, so
        # checking a*(g*b) == (a*g)*b for generators g settles all triples.
        for g in gens:
            if not np.array_equal(t[t[:, g], :], t[:, t[g, :]]):
                raise GroupConstructionError(f"associativity fails at generator {g}")
        rng = np.random.default_rng(0)
        m = _ASSOCIATIVITY_SAMPLES
        a = rng.integers(0, self.order, m)
        b = rng.integers(0, self.order, m)
        c = rng.integers(0, self.order, m)
        if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
            raise GroupConstructionError("associativity fails on sampled triples")

    # -- basic arithmetic ----------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @property
    def inverse_array(self) -> np.ndarray:
        inv = self._cache.get("inv")
        if inv is None:
            inv = np.ascontiguousarray(
                np.where(self.table == self.identity)[1].astype(np.intc)
            )
            inv.setflags(write=False)
            self._cache["inv"] = inv
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverse_array[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity
        t = self.table
        while k:
            if k & 1:
                result = int(t[result, a])
            a = int(t[a, a])
            k >>= 1
        return result

    def conjugate(self, a: int, by: int) -> int:
        """by^-1 * a * by."""
        t = self.table
        return int(t[t[self.inv(by), a], by])

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        t = self.table
        return int(t[t[self.inv(a), self.inv(b)], t[a, b]])

    def rows(self) -> list[list[int]]:
        """Table as nested Python lists; used by the pure-Python kernel."""
        rows = self._cache.get("rows")
        if rows is None:
            rows = self.table.tolist()
            self._cache["rows"] = rows
        return rows

    def label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        return str(a)

    def __repr__(self) -> str:
        name = self.name or "FiniteGroup"
        return f"<{name} of order {self.order}>"

    # -- element orders -------------------------------------------------------

    def element_order(self, a: int) -> int:
        x, k = a, 1
        t = self.table
        while x != self.identity:
            x = int(t[x, a])
            k += 1
        return k

    def element_orders(self) -> list[int]:
        orders = self._cache.get("orders")
        if orders is None:
            orders = [self.element_order(a) for a in range(self.order)]
            self._cache["orders"] = orders
        return orders

    def exponent(self) -> int:
        return math.lcm(*self.element_orders())

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def p_group_prime(self) -> Optional[int]:
        """The prime p if the order is a nontrivial p-power, 1 for the trivial
        group, None otherwise."""
        factors = _prime_factors(self.order)
        if not factors:
            return 1
        if len(factors) == 1:
            return factors[0]
        return None

    # -- subgroups -------------------------------------------------------------

    def generated_subgroup(self, gens: Iterable[int]) -> "Subgroup":
        members = self.closure(gens)
        return Subgroup(self, frozenset(members), _checked=True)

    def closure(self, gens: Iterable[int]) -> list[int]:
        """Elements of the subgroup generated by ``gens`` (BFS order)."""
        t = self.rows()
        seen = bytearray(self.order)
        seen[self.identity] = 1
        out = [self.identity]
        stack = [self.identity]
        gens = [int(g) for g in gens]
        while stack:
            x = stack.pop()
            row = t[x]
            for g in gens:
                y = row[g]
                if not seen[y]:
                    seen[y] = 1
                    out.append(y)
                    stack.append(y)
        return out

    def generating_sequence(self) -> tuple[int, ...]:
        """Greedy generating sequence: scan elements in index order, keep the
        ones that enlarge the closure.  Deterministic."""
        seq = self._cache.get("gens")
        if seq is None:
            gens: list[int] = []
            have = {self.identity}
            for x in range(self.order):
                if x not in have:
                    gens.append(x)
                    have = set(self.closure(gens))
                    if len(have) == self.order:
                        break
            seq = tuple(gens)
            self._cache["gens"] = seq
        return seq

    def center(self) -> "Subgroup":
        sub = self._cache.get("center")
        if sub is None:
            mask = (self.table == self.table.T).all(axis=1)
            sub = Subgroup(self, frozenset(np.nonzero(mask)[0].tolist()), _checked=True)
            self._cache["center"] = sub
        return sub

    def centralizer_size(self, a: int) -> int:
        return int((self.table[a] == self.table[:, a]).sum())

    def derived_subgroup(self) -> "Subgroup":
        sub = self._cache.get("derived")
        if sub is None:
            t, inv = self.table, self.inverse_array
            comms: set[int] = set()
            for a in range(self.order):
                # [a, b] over all b at once
                vals = t[t[inv[a], inv], t[a]]
                comms.update(vals.tolist())
            members = self.closure(comms)
            sub = Subgroup(self, frozenset(members), _checked=True)
            self._cache["derived"] = sub
        return sub

    def frattini_subgroup(self) -> "Subgroup":
        """Frattini subgroup of a p-group, computed as G^p [G, G]."""
        sub = self._cache.get("frattini")
        if sub is None:
            p = self.p_group_prime()
            if p is None:
                raise ValueError("Frattini computation supported for p-groups only")
            gens = set(self.derived_subgroup().members)
            for a in range(self.order):
                gens.add(self.power(a, p))
            sub = Subgroup(self, frozenset(self.closure(gens)), _checked=True)
            self._cache["frattini"] = sub
        return sub

    def minimal_generator_count(self) -> int:
        """d(G) for a p-group: the rank of G modulo its Frattini subgroup."""
        p = self.p_group_prime()
        if p is None:
            raise ValueError("minimal generator count defined here for p-groups only")
        if p == 1:
            return 0
        quotient_order = self.order // self.frattini_subgroup().order
        return round(math.log(quotient_order, p))

    def normalizer(self, members: frozenset[int]) -> list[int]:
        t, inv = self.rows(), self.inverse_array
        out = []
        for g in range(self.order):
            gi = inv[g]
            row = t[g]
            if all(t[row[s]][gi] in members for s in members):
                out.append(g)
        return out

    def sylow_subgroup(self, p: int) -> "Subgroup":
        """A p-Sylow subgroup, grown deterministically.

        Starts from the trivial subgroup and repeatedly adjoins the least
        p-element of the normalizer not already present; each step multiplies
        the order by p, so the climb terminates at the full p-part.
        """
        if p < 2 or _prime_factors(p) != [p]:
            raise ValueError(f"{p} is not prime")
        target = p_part(self.order, p)
        current = frozenset({self.identity})
        if target == 1:
            return Subgroup(self, current, _checked=True)
        orders = self.element_orders()
        p_elements = [a for a in range(self.order) if orders[a] != 1 and p_part(orders[a], p) == orders[a]]
        while len(current) < target:
            candidates = self.normalizer(current)
            grown = False
            for g in candidates:
                if g in current or g not in p_elements:
                    continue
                bigger = frozenset(self.closure(set(current) | {g}))
                if p_part(len(bigger), p) == len(bigger):
                    current = bigger
                    grown = True
                    break
            if not grown:  # unreachable for a correct table
                raise RuntimeError("Sylow climb stalled")
        return Subgroup(self, current, _checked=True)

    # -- quotients --------------------------------------------------------------

    def quotient(self, sub: "Subgroup") -> tuple["FiniteGroup", np.ndarray]:
        """Quotient by a normal subgroup; returns (G/N, projection array)."""
        if sub.parent is not self:
            raise ValueError("subgroup belongs to a different group")
        if not sub.is_normal():
            raise ValueError("quotient requires a normal subgroup")
        n = self.order
        members = sorted(sub.members)
        proj = np.full(n, -1, dtype=np.intc)
        reps: list[int] = []
        for x in range(n):
            if proj[x] < 0:
                r = len(reps)
                reps.append(x)
                proj[self.table[x, members]] = r
        q = len(reps)
        qtable = proj[self.table[np.ix_(reps, reps)]]
        labels = None
        if self.labels is not None:
            labels = [f"{self.labels[r]}N" for r in reps]
        quotient = FiniteGroup(qtable, labels=labels, name=f"{self.name or 'G'}/N")
        proj.setflags(write=False)
        return quotient, proj

    def abelianization(self) -> "FiniteGroup":
        return self.quotient(self.derived_subgroup())[0]

    def abelian_invariants(self) -> tuple[int, ...]:
        """Elementary divisors of an abelian group, from its order profile.

        For an abelian p-group the number of solutions of x^(p^k) = e
        determines the partition, prime by prime.
        """
        if not self.is_abelian():
            raise ValueError("abelian_invariants requires an abelian group")
        orders = self.element_orders()
        divisors: list[int] = []
        for p in _prime_factors(self.order):
            primary = p_part(self.order, p)
            counts = [0]
            k = 1
            while True:
                # elements of the p-primary component killed by p^k
                c = sum(1 for o in orders if p_part(o, p) == o and o <= p**k)
                counts.append(round(math.log(c, p)))
                if c == primary or k > 64:
                    break
                k += 1
            conj = [counts[j] - counts[j - 1] for j in range(1, len(counts))]
            parts = []
            j = 1
            while True:
                lam = sum(1 for mk in conj if mk >= j)
                if lam == 0:
                    break
                parts.append(lam)
                j += 1
            divisors.extend(p**lam for lam in parts)
        return tuple(sorted(divisors, reverse=True))

    # -- fingerprints and isomorphism -------------------------------------------

    def fingerprint(self) -> tuple:
        fp = self._cache.get("fingerprint")
        if fp is None:
            orders = self.element_orders()
            profile = tuple(sorted((o, c) for o, c in
                                   _multiset(orders).items()))
            ab = self.abelianization()
            ab_profile = tuple(sorted(_multiset(ab.element_orders()).items()))
            fp = (
                self.order,
                profile,
                self.center().order,
                self.derived_subgroup().order,
                ab_profile,
            )
            self._cache["fingerprint"] = fp
        return fp

    def find_isomorphism(self, other: "FiniteGroup") -> Optional[list[int]]:
        """An isomorphism to ``other`` as an index map, or None.

        Fingerprint prescreen, then backtracking over generator images with
        closure-consistency checks; candidate scan order is lexicographic, so
        the result is deterministic.
        """
        if self.order != other.order or self.fingerprint() != other.fingerprint():
            return None
        return _generator_image_search(self, other, count_all=False)

    def is_isomorphic(self, other: "FiniteGroup") -> bool:
        return self.find_isomorphism(other) is not None

    def automorphism_count(self) -> int:
        count = self._cache.get("aut")
        if count is None:
            count = _generator_image_search(self, self, count_all=True)
            self._cache["aut"] = count
        return count


def _multiset(xs: Iterable[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for x in xs:
        out[x] = out.get(x, 0) + 1
    return out


def _generator_image_search(G: FiniteGroup, H: FiniteGroup, count_all: bool):
    """Backtracking over images of a generating sequence of G in H.

    Returns an isomorphism (as a list) when count_all is False, else the number
    of isomorphisms G -> H (the automorphism count when H is G).
    """
    gens = G.generating_sequence()
    if not gens:  # trivial group
        return 1 if count_all else [H.identity]
    g_orders = G.element_orders()
    h_orders = H.element_orders()
    candidates = []
    for g in gens:
        og = g_orders[g]
        cg = G.centralizer_size(g)
        candidates.append(
            [h for h in range(H.order) if h_orders[h] == og and H.centralizer_size(h) == cg]
        )

    g_rows = G.rows()
    h_rows = H.rows()
    n = G.order

    def build_map(images: list[int]) -> Optional[list[int]]:
        mapping = [-1] * n
        used = bytearray(H.order)
        mapping[G.identity] = H.identity
        used[H.identity] = 1
        frontier = [G.identity]
        pos = 0
        pairs = list(zip(gens[: len(images)], images))
        while pos < len(frontier):
            x = frontier[pos]
            pos += 1
            fx = mapping[x]
            for g, h in pairs:
                y = g_rows[x][g]
                fy = h_rows[fx][h]
                if mapping[y] < 0:
                    if used[fy]:
                        return None
                    mapping[y] = fy
                    used[fy] = 1
                    frontier.append(y)
                elif mapping[y] != fy:
                    return None
        return mapping

    total = 0

    def descend(depth: int, images: list[int]):
        nonlocal total
        if depth == len(gens):
            mapping = build_map(images)
            if mapping is not None and all(m >= 0 for m in mapping):
                if count_all:
                    total += 1
                    return None
                return mapping
            return None
        for h in candidates[depth]:
            images.append(h)
            if build_map(images) is not None:
                result = descend(depth + 1, images)
                if result is not None:
                    return result
            images.pop()
        return None

    found = descend(0, [])
    if count_all:
        return total
    return found


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a fixed parent group, as a frozen member set."""

    parent: FiniteGroup
    members: frozenset[int]
    _checked: bool = False

    def __post_init__(self):
        if not self._checked:
            t = self.parent.table
            inv = self.parent.inverse_array
            if self.parent.identity not in self.members:
                raise ValueError("subgroup must contain the identity")
            for a in self.members:
                if int(inv[a]) not in self.members:
                    raise ValueError(f"subgroup not closed under inverse at {a}")
                for b in self.members:
                    if int(t[a, b]) not in self.members:
                        raise ValueError(f"subgroup not closed under product at ({a},{b})")

    @property
    def order(self) -> int:
        return len(self.members)

    def is_normal(self) -> bool:
        t = self.parent.rows()
        inv = self.parent.inverse_array
        for g in range(self.parent.order):
            gi = int(inv[g])
            for s in self.members:
                if t[t[gi][s]][g] not in self.members:
                    return False
        return True

    def contains_sylow_of(self, p: int) -> bool:
        """Whether the subgroup contains a subgroup of full p-power order.

        By Sylow's theorem this holds exactly when the p-part of the parent
        order divides the subgroup order, so the check is conjugation
        insensitive.
        """
        return self.order % p_part(self.parent.order, p) == 0

    def as_group(self) -> FiniteGroup:
        members = sorted(self.members)
        index = {m: i for i, m in enumerate(members)}
        table = [[index[int(self.parent.table[a, b])] for b in members] for a in members]
        labels = None
        if self.parent.labels is not None:
            labels = [self.parent.labels[m] for m in members]
        return FiniteGroup(table, labels=labels, name="subgroup")

    def __contains__(self, a: int) -> bool:
        return a in self.members


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupConstructionError("cyclic group order must be positive")
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    labels = ["e"] + [f"g^{k}" if k > 1 else "g" for k in range(1, n)]
    return FiniteGroup(table, labels=labels, generator_hints=[1 % n], name=f"C{n}")


def abelian(invariants: Sequence[int]) -> FiniteGroup:
    """Direct product of cyclic groups of the given orders.

    Elements are mixed-radix encodings of exponent vectors, most significant
    factor first."""
    radix = [int(m) for m in invariants]
    if not radix or any(m < 1 for m in radix):
        raise GroupConstructionError("invariants must be positive integers")
    n = math.prod(radix)
    idx = np.arange(n, dtype=np.int64)
    table = np.zeros((n, n), dtype=np.int64)
    stride = 1
    for m in reversed(radix):
        comp = (idx // stride) % m
        table += stride * ((comp[:, None] + comp[None, :]) % m)
        stride *= m
    vecs = list(itertools.product(*[range(m) for m in radix]))
    labels = ["(" + ",".join(map(str, v)) + ")" for v in vecs]
    strides = []
    s = 1
    for m in reversed(radix):
        strides.append(s)
        s *= m
    strides.reverse()
    hints = [strides[j] for j in range(len(radix)) if radix[j] > 1]
    name = "x".join(f"C{m}" for m in radix)
    return FiniteGroup(table, labels=labels, generator_hints=hints or [0], name=name)


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group on n letters (small n; the table is built from all
    permutations)."""
    if n < 1 or n > 6:
        raise GroupConstructionError("symmetric(n) supported for 1 <= n <= 6")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    table = np.zeros((size, size), dtype=np.intc)
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            table[i, j] = index[tuple(a[b[k]] for k in range(n))]
    labels = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(table, labels=labels, name=f"S{n}")


@dataclass(frozen=True)
class MetacyclicParams:
    """Parameters (m, n, i, t) of the two-generator presentation
    x^m = y^i, y^n = 1, x^-1 y x = y^t; i and t are taken mod n."""

    m: int
    n: int
    i: int
    t: int

    def normalized(self) -> "MetacyclicParams":
        return MetacyclicParams(self.m, self.n, self.i % self.n, self.t % self.n)

    def validate(self) -> None:
        m, n, i, t = self.m, self.n, self.i, self.t
        if m < 1 or n < 1:
            raise GroupConstructionError("metacyclic parameters m, n must be positive")
        if math.gcd(t, n) != 1:
            raise GroupConstructionError(f"t={t} is not a unit mod n={n}")
        if pow(t, m, n) != 1 % n:
            raise GroupConstructionError(
                f"consistency congruence t^m = 1 (mod n) fails: {t}^{m} != 1 (mod {n})"
            )
        if (i * (t - 1)) % n != 0:
            raise GroupConstructionError(
                f"consistency congruence i(t-1) = 0 (mod n) fails: {i}*({t}-1) != 0 (mod {n})"
            )

    @property
    def order(self) -> int:
        return self.m * self.n


def _metacyclic_label(a: int, b: int) -> str:
    parts = []
    if a == 1:
        parts.append("x")
    elif a > 1:
        parts.append(f"x^{a}")
    if b == 1:
        parts.append("y")
    elif b > 1:
        parts.append(f"y^{b}")
    return "*".join(parts) if parts else "e"


def build_metacyclic(params: MetacyclicParams, *, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Group of order m*n on generators x, y with x^m = y^i, y^n = 1,
    x^-1 y x = y^t.  Elements are normal forms x^a y^b."""
    params = params.normalized()
    params.validate()
    m, n, i, t = params.m, params.n, params.i, params.t
    size = m * n
    if size > order_cap:
        raise GroupConstructionError(f"order {size} exceeds cap {order_cap}")
    tpow = np.array([pow(t, c, n) for c in range(m)], dtype=np.int64)
    a = np.arange(m)
    b = np.arange(n)
    # (x^a y^b)(x^c y^d) = x^((a+c) mod m) y^(i*((a+c)//m) + b*t^c + d mod n)
    A, B, C, D = np.ix_(a, b, a, b)
    asum = A + C
    exponent = (i * (asum // m) + B * tpow[C] + D) % n
    table = ((asum % m) * n + exponent).reshape(size, size)
    labels = [_metacyclic_label(x, y) for x in a for y in b]
    hints = []
    if m > 1:
        hints.append(n)  # x
    if n > 1:
        hints.append(1)  # y
    g = FiniteGroup(table, labels=labels, generator_hints=hints or [0],
                    name=f"M({m},{n},{i},{t})", order_cap=order_cap)
    g._cache["metacyclic_params"] = params
    return g


@dataclass(frozen=True)
class CentralExtensionSpec:
    """Data for a central extension of an elementary abelian group.

    The base is (Z/p)^rank on generators g_1..g_rank; the center is the
    abelian group with the given cyclic orders.  ``commutators`` assigns to
    each pair j > i the central value [g_j, g_i]; ``powers`` assigns to each
    generator its p-th power.  Central values are exponent vectors over the
    center's cyclic factors.  Consistency of the data is not assumed: the
    assembled table is verified and rejected on associativity failure.
    """

    p: int
    rank: int
    center: tuple[int, ...]
    commutators: tuple[tuple[int, int, tuple[int, ...]], ...]  # (j, i, value), j > i
    powers: tuple[tuple[int, ...], ...]

    def center_order(self) -> int:
        return math.prod(self.center) if self.center else 1


def build_central_extension(spec: CentralExtensionSpec, *, order_cap: int = DEFAULT_ORDER_CAP,
                            base_labels: Optional[Sequence[str]] = None) -> FiniteGroup:
    """Assemble the multiplication table from normal forms g_1^v1...g_r^vr * z.

    The product rule folds commutator swaps and p-th powers into the central
    part; the resulting table is then verified in full, so inconsistent
    commutator/power data is rejected rather than silently accepted.
    """
    p, r = spec.p, spec.rank
    if p < 2 or len(_prime_factors(p)) != 1:
        raise GroupConstructionError(f"{p} is not prime")
    if any(m < 1 or p_part(m, p) != m for m in spec.center):
        raise GroupConstructionError("center orders must be powers of p")
    if len(spec.powers) != r:
        raise GroupConstructionError("one power value per base generator required")
    zord = spec.center_order()
    size = (p**r) * zord
    if size > order_cap:
        raise GroupConstructionError(f"order {size} exceeds cap {order_cap}")

    radix = list(spec.center)
    zvecs = list(itertools.product(*[range(m) for m in radix])) if radix else [()]
    zindex = {v: i for i, v in enumerate(zvecs)}

    def zadd(u, v):
        return tuple((x + y) % m for x, y, m in zip(u, v, radix))

    def zscale(u, k):
        return tuple((x * k) % m for x, m in zip(u, radix))

    comm = {}
    for (j, i, value) in spec.commutators:
        if not (0 <= i < j < r):
            raise GroupConstructionError(f"commutator pair ({j},{i}) out of range")
        if len(value) != len(radix):
            raise GroupConstructionError("commutator value has wrong center arity")
        comm[(j, i)] = tuple(int(x) % m for x, m in zip(value, radix))
    powers = []
    for value in spec.powers:
        if len(value) != len(radix):
            raise GroupConstructionError("power value has wrong center arity")
        powers.append(tuple(int(x) % m for x, m in zip(value, radix)))

    base_vecs = list(itertools.product(range(p), repeat=r))
    bindex = {v: i for i, v in enumerate(base_vecs)}
    nb = len(base_vecs)
    zero = tuple(0 for _ in radix)

    base_add = np.zeros((nb, nb), dtype=np.intc)
    corr = np.zeros((nb, nb), dtype=np.intc)
    for bi, v in enumerate(base_vecs):
        for bj, w in enumerate(base_vecs):
            base_add[bi, bj] = bindex[tuple((x + y) % p for x, y in zip(v, w))]
            z = zero
            for (jj, ii), c in comm.items():
                k = (v[jj] * w[ii]) % p
                if k:
                    z = zadd(z, zscale(c, k))
            for idx in range(r):
                carry = (v[idx] + w[idx]) // p
                if carry:
                    z = zadd(z, zscale(powers[idx], carry))
            corr[bi, bj] = zindex[z]

    zadd_table = np.zeros((zord, zord), dtype=np.intc)
    for zi, u in enumerate(zvecs):
        for zj, v in enumerate(zvecs):
            zadd_table[zi, zj] = zindex[zadd(u, v)]

    # element index = base_index * zord + z_index
    VA, ZA = np.divmod(np.arange(size, dtype=np.intc)[:, None], zord)
    VB, ZB = np.divmod(np.arange(size, dtype=np.intc)[None, :], zord)
    table = base_add[VA, VB] * zord + zadd_table[zadd_table[ZA, ZB], corr[VA, VB]]

    if base_labels is None:
        base_labels = [f"g{k+1}" for k in range(r)]
    labels = []
    for v in base_vecs:
        stem = "*".join(
            base_labels[k] if v[k] == 1 else f"{base_labels[k]}^{v[k]}"
            for k in range(r) if v[k]
        )
        for u in zvecs:
            ztxt = "z(" + ",".join(map(str, u)) + ")" if any(u) else ""
            txt = "*".join(x for x in (stem, ztxt) if x)
            labels.append(txt or "e")
    hints = [bindex[tuple(1 if k == j else 0 for k in range(r))] * zord for j in range(r)]
    hints += [zindex[tuple(1 if k == j else 0 for k in range(len(radix)))] for j in range(len(radix))]
    try:
        g = FiniteGroup(table, labels=labels, generator_hints=hints,
                        name=f"central-ext(p^{r} by {zord})", order_cap=order_cap)
    except GroupConstructionError as exc:
        raise GroupConstructionError(f"central extension data is inconsistent: {exc}") from exc
    return g


def heisenberg(p: int) -> FiniteGroup:
    """Extraspecial group of order p^3 and exponent p (p odd): the relations
    are x^p = y^p = u^p = [x,u] = [y,u] = 1, [y,x] = u."""
    spec = CentralExtensionSpec(
        p=p, rank=2, center=(p,), commutators=((1, 0, (1,)),), powers=((0,), (0,)),
    )
    g = build_central_extension(spec, base_labels=["x", "y"])
    g.name = f"Heisenberg({p})"
    return g


def semidirect_product(N: FiniteGroup, H: FiniteGroup, action: Sequence[Sequence[int]],
                       *, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Semidirect product N x| H for an action H -> Aut(N).

    ``action[h]`` lists the image of each N-element under the automorphism
    attached to h.  The homomorphism law is verified on a generating sequence
    of H (which pins it everywhere); the automorphism law is verified for the
    generators as well.  Element index is h * |N| + n.
    """
    act = np.asarray(action, dtype=np.intc)
    if act.shape != (H.order, N.order):
        raise GroupConstructionError(
            f"action must be {H.order} permutations of {N.order} points, got {act.shape}"
        )
    idx = np.arange(N.order, dtype=np.intc)
    if not (np.sort(act, axis=1) == idx[None, :]).all():
        raise GroupConstructionError("action rows must be permutations of N")
    if not (act[H.identity] == idx).all():
        raise GroupConstructionError("action of the identity must be trivial")
    gens = H.generating_sequence()
    tN = N.table
    for g in gens:
        ag = act[g]
        if not np.array_equal(ag[tN], tN[np.ix_(ag, ag)]):
            raise GroupConstructionError(f"action of generator {g} is not an automorphism of N")
    for g in gens:
        composed = act[g][act]  # (|H|, |N|): act[g] o act[h]
        if not np.array_equal(act[H.table[g]], composed):
            raise GroupConstructionError("action is not a homomorphism")

    size = N.order * H.order
    if size > order_cap:
        raise GroupConstructionError(f"order {size} exceeds cap {order_cap}")
    table = np.zeros((size, size), dtype=np.intc)
    for h1 in range(H.order):
        # (h1, n1)(h2, n2) = (h1 h2, phi(h2)^-1(n1) n2)?  With the convention
        # (n1, h1)(n2, n2) = (n1 * phi(h1)(n2), h1 h2) and index h*|N|+n:
        m1 = tN[:, act[h1]]  # m1[n1, n2] = n1 * phi(h1)(n2)
        block = (H.table[h1][None, :, None] * N.order + m1[:, None, :]).reshape(N.order, size)
        table[h1 * N.order:(h1 + 1) * N.order, :] = block
    labels = None
    if N.labels is not None and H.labels is not None:
        labels = [f"({N.labels[n]};{H.labels[h]})" for h in range(H.order) for n in range(N.order)]
    return FiniteGroup(table, labels=labels, name=f"{N.name or 'N'}x|{H.name or 'H'}",
                       order_cap=order_cap)


def trivial_action(N: FiniteGroup, H: FiniteGroup) -> list[list[int]]:
    return [list(range(N.order)) for _ in range(H.order)]


def direct_product(A: FiniteGroup, B: FiniteGroup, *, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    return semidirect_product(A, B, trivial_action(A, B), order_cap=order_cap)


def wreath_fp_cp(p: int) -> FiniteGroup:
    """(Z/p)^p with Z/p cyclically shifting the coordinates."""
    N = abelian([p] * p)
    H = cyclic(p)
    vecs = list(itertools.product(*[range(p) for _ in range(p)]))
    index = {v: i for i, v in enumerate(vecs)}
    action = []
    for h in range(p):
        perm = [index[tuple(v[(k - h) % p] for k in range(p))] for v in vecs]
        action.append(perm)
    g = semidirect_product(N, H, action)
    g.name = f"C{p} wr C{p}"
    return g


def heisenberg_linear_action(p: int) -> list[list[int]]:
    """Action of (Z/p)^3 on (Z/p)^3 through two commuting unipotent maps.

    Basis vector e1 acts by (a,b,c) -> (a+b, b, c), e2 by (a,b,c) -> (a+c, b, c)
    and e3 acts trivially; the two maps commute, so this is a homomorphism
    into the unipotent upper-triangular group.
    """
    vecs = list(itertools.product(range(p), repeat=3))
    index = {v: i for i, v in enumerate(vecs)}

    def phi(h):
        h1, h2, _ = h

        def apply(v):
            a, b, c = v
            return ((a + h1 * b + h2 * c) % p, b, c)

        return [index[apply(v)] for v in vecs]

    return [phi(h) for h in vecs]


def semidirect_rank3_unipotent(p: int, *, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """(Z/p)^3 x| (Z/p)^3 under the unipotent action above; order p^6."""
    N = abelian([p, p, p])
    H = abelian([p, p, p])
    return semidirect_product(N, H, heisenberg_linear_action(p), order_cap=order_cap)


# ---------------------------------------------------------------------------
# metacyclic recognition
# ---------------------------------------------------------------------------


def _cyclic_normal_subgroups(G: FiniteGroup) -> list[tuple[int, frozenset[int]]]:
    """Distinct cyclic normal subgroups, each with a generator of full order."""
    seen: set[frozenset[int]] = set()
    out = []
    for y in range(G.order):
        members = frozenset(_cyclic_span(G, y))
        if members in seen:
            continue
        seen.add(members)
        sub = Subgroup(G, members, _checked=True)
        if sub.is_normal():
            out.append((y, members))
    return out


def _cyclic_span(G: FiniteGroup, y: int) -> list[int]:
    out = [G.identity]
    x = y
    while x != G.identity:
        out.append(x)
        x = G.mul(x, y)
    return out


def _dlog(G: FiniteGroup, base: int, target: int, modulus: int) -> Optional[int]:
    x = G.identity
    for k in range(modulus):
        if x == target:
            return k
        x = G.mul(x, base)
    return None


def enumerate_metacyclic_presentations(G: FiniteGroup) -> list[MetacyclicParams]:
    """All parameter tuples (m, n, i, t), i mod n, realized by pairs (x, y) in
    G with <y> cyclic normal of order n, G/<y> cyclic of order m generated by
    the class of x, x^-1 y x = y^t and x^m = y^i.

    Every tuple whose presented group is isomorphic to G arises this way (push
    the presentation's generators through an isomorphism), so the enumeration
    is exhaustive.
    """
    results: set[MetacyclicParams] = set()
    size = G.order
    for y0, members in _cyclic_normal_subgroups(G):
        n = len(members)
        m = size // n
        sub = Subgroup(G, members, _checked=True)
        quotient, proj = G.quotient(sub)
        # quotient must be cyclic, generated by the class of x
        qorders = quotient.element_orders()
        if m not in qorders:
            continue
        span = _cyclic_span(G, y0)
        if n > 1:
            generators_of_n = [span[k] for k in range(1, n) if math.gcd(k, n) == 1]
        else:
            generators_of_n = [G.identity]
        xs = [G.identity] if m == 1 else [x for x in range(size) if qorders[proj[x]] == m]
        for y in generators_of_n:
            for x in xs:
                conj = G.mul(G.mul(G.inv(x), y), x)
                t = _dlog(G, y, conj, n)
                if t is None:
                    continue
                i = _dlog(G, y, G.power(x, m), n)
                if i is None:
                    continue
                params = MetacyclicParams(m, n, i % n, t % n)
                try:
                    params.validate()
                except GroupConstructionError:
                    continue
                results.add(params)
    return sorted(results, key=lambda p: (p.m, p.n, p.i, p.t))


def is_metacyclic(G: FiniteGroup) -> Optional[MetacyclicParams]:
    """A witnessing parameter tuple when G is metacyclic, else None."""
    cached = G._cache.get("metacyclic_params")
    if cached is not None:
        return cached
    found = G._cache.get("metacyclic_search")
    if found is None:
        presentations = enumerate_metacyclic_presentations(G)
        found = presentations[0] if presentations else False
        G._cache["metacyclic_search"] = found
    return found if found else None
