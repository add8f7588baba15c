"""Quantum subgroups, coset spaces and divisibility.

A subgroup is a decidable membership predicate on irreducibles, closed under
conjugation, containing the trivial one, and closed under fusion.  Cosets of
``Irr(G)`` modulo ``Irr(H)`` are equivalence classes for the relation
``r ~ s`` iff ``conj(r) (x) s`` contains a member of H (left quotient), or
``s (x) conj(r)`` does (right quotient).  All computations here are windowed:
words and subgroup members are enumerated up to a depth, and the verdicts
carry that depth as their certificate.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .fusion import (
    FO,
    FU,
    FormalSum,
    FusionRing,
    Irrep,
    MalformedIrrepError,
    Z,
    _fuse_bounded,
    _fuse_raw,
    fu_words_up_to,
    is_fu_word,
)

DEFAULT_BUDGET = 10**6


def closure_budget() -> int:
    """Node budget for coset closures, overridable via FQK_BUDGET."""
    raw = os.environ.get("FQK_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_BUDGET


class CosetBudgetError(RuntimeError):
    """Raised when a closure search exceeds the configured node budget."""

    def __init__(self, budget: int, visited: int):
        super().__init__(
            "coset closure budget exceeded: visited %d nodes (budget %d)"
            % (visited, budget)
        )
        self.budget = budget
        self.visited = visited


# ---------------------------------------------------------------------------
# Subgroup specifications


class SubgroupSpec:
    """Base interface: a membership predicate plus a windowed enumeration."""

    token = "?"

    def check_ring(self, ring: FusionRing) -> None:
        raise NotImplementedError

    def contains(self, ring: FusionRing, word) -> bool:
        raise NotImplementedError

    def members_up_to(self, ring: FusionRing, depth: int) -> list:
        """Members of Irr(H) within the window, canonical order, with the
        trivial word first."""
        raise NotImplementedError

    def describe(self) -> str:
        return self.token


@dataclass(frozen=True)
class FactorSubgroup(SubgroupSpec):
    """One free-product factor, as the set of single-letter words."""

    index: int

    @property
    def token(self):
        return "factor:%d" % self.index

    def check_ring(self, ring):
        if not 0 <= self.index < ring.factor_count:
            raise MalformedIrrepError(
                "no factor %d in %r" % (self.index, ring)
            )

    def contains(self, ring, word):
        return len(word) == 0 or (
            len(word) == 1 and word[0][0] == self.index
        )

    def members_up_to(self, ring, depth):
        block = ring.blocks[self.index]
        out = [Irrep(())]
        for lab in block.labels_up_to(depth):
            if block.label_weight(lab) <= depth:
                out.append(Irrep(((self.index, lab),)))
        return out

    def describe(self):
        return "factor %d" % self.index


@dataclass(frozen=True)
class FUInFOZSubgroup(SubgroupSpec):
    """The embedded free unitary ring inside FO(m) * Z, i.e. the set of
    unitary-type words (generated by ``u_1 z`` and ``z^-1 u_1``)."""

    m: int | None = None

    token = "fu-in-foz"

    def check_ring(self, ring):
        ok = (
            len(ring.blocks) == 2
            and ring.blocks[0].kind == "FO"
            and ring.blocks[1].kind == "Z"
            and not ring.is_fu
        )
        if not ok:
            raise MalformedIrrepError(
                "fu-in-foz needs an FO(m)*Z ring, got %r" % (ring,)
            )
        if self.m is not None and ring.blocks[0].n != self.m:
            raise MalformedIrrepError(
                "fu-in-foz size mismatch: subgroup FU(%d) inside %r"
                % (self.m, ring)
            )

    def contains(self, ring, word):
        return is_fu_word(word)

    def members_up_to(self, ring, depth):
        words = fu_words_up_to(depth, max_index=depth)
        words.sort(key=ring.word_sort_key)
        return [Irrep(w) for w in words]

    def describe(self):
        return "FU inside FO*Z"


@dataclass(frozen=True)
class EvenSubgroup(SubgroupSpec):
    """The even part of a single FO block (even indices)."""

    token = "fo-even"

    def check_ring(self, ring):
        if ring.is_fu or len(ring.blocks) != 1 or ring.blocks[0].kind != "FO":
            raise MalformedIrrepError(
                "fo-even needs a single FO ring, got %r" % (ring,)
            )

    def contains(self, ring, word):
        return len(word) == 0 or (len(word) == 1 and word[0][1] % 2 == 0)

    def members_up_to(self, ring, depth):
        out = [Irrep(())]
        for k in range(2, depth + 1, 2):
            out.append(Irrep(((0, k),)))
        return out

    def describe(self):
        return "even part"


@dataclass(frozen=True)
class TrivialSubgroup(SubgroupSpec):
    """The trivial subgroup; every irreducible is its own coset."""

    token = "trivial"

    def check_ring(self, ring):
        pass

    def contains(self, ring, word):
        return len(word) == 0

    def members_up_to(self, ring, depth):
        return [Irrep(())]

    def describe(self):
        return "trivial subgroup"


def embed_fu_generator(which: str, m: int) -> Irrep:
    """The image of the free unitary generator (or its conjugate) inside
    FO(m) * Z: ``u -> u_1 z`` and ``ubar -> z^-1 u_1``."""
    if m < 2:
        from .fusion import UnsupportedBlockSizeError

        raise UnsupportedBlockSizeError("unsupported block size: FU(%d)" % m)
    if which == "u":
        return Irrep(((0, 1), (1, 1)))
    if which == "ubar":
        return Irrep(((1, -1), (0, 1)))
    raise ValueError("generator must be 'u' or 'ubar', got %r" % (which,))


def fu_generated_up_to(ring: FusionRing, depth: int) -> set:
    """Closure of the two free unitary generators under windowed fusion,
    starting from the trivial word.  Used to cross-check the closed-form
    membership predicate."""
    FUInFOZSubgroup().check_ring(ring)
    gens = [((0, 1), (1, 1)), ((1, -1), (0, 1))]
    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                for t in _fuse_bounded(ring, w, g, depth):
                    if t not in seen and ring.in_window(t, depth):
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return {Irrep(w) for w in seen}


# ---------------------------------------------------------------------------
# Cosets


@dataclass(frozen=True)
class Coset:
    """An equivalence class in a windowed coset space.

    ``side`` is "left" for G/H (relation via conj(r) (x) s) and "right" for
    H\\G (relation via s (x) conj(r)); ``members`` lists the class within the
    window, canonically ordered with the representative first.
    """

    side: str
    representative: Irrep
    members: tuple = field(compare=False)
    depth_certificate: int = field(compare=False, default=0)

    def __len__(self):
        return len(self.members)

    def __contains__(self, word):
        return word in self.members


def _moves(ring, word, ts, depth, side):
    """Windowed one-step neighbours of ``word`` for the coset relation."""
    wlen = ring.word_length(word)
    out = set()
    for t, tlen in ts:
        if side == "left":
            a, b = word, t
        else:
            a, b = t, word
        if not a or not b or a[-1][0] != b[0][0]:
            if wlen + tlen <= depth:
                out.add(a + b)
            continue
        for m in _fuse_bounded(ring, a, b, depth):
            if ring.in_window(m, depth):
                out.add(m)
    out.discard(word)
    return out


def _prepared_members(ring, subgroup, depth):
    subgroup.check_ring(ring)
    ts = []
    for t in subgroup.members_up_to(ring, depth):
        if t:
            ts.append((tuple(t), ring.word_length(t)))
    return ts


def coset_of(
    ring: FusionRing,
    subgroup: SubgroupSpec,
    word,
    depth: int,
    side: str = "left",
    budget: int | None = None,
) -> Coset:
    """Breadth-first closure of the coset relation from ``word`` within the
    window; returns the class with its canonical representative."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    word = ring.validate(word)
    if not ring.in_window(word, depth):
        raise MalformedIrrepError(
            "malformed irrep: %r not enumerable within depth %d"
            % (tuple(word), depth)
        )
    if budget is None:
        budget = closure_budget()
    ts = _prepared_members(ring, subgroup, depth)
    seen = {tuple(word)}
    frontier = [tuple(word)]
    while frontier:
        nxt = []
        for w in frontier:
            for m in _moves(ring, w, ts, depth, side):
                if m not in seen:
                    if len(seen) >= budget:
                        raise CosetBudgetError(budget, len(seen))
                    seen.add(m)
                    nxt.append(m)
        frontier = nxt
    members = sorted(seen, key=ring.word_sort_key)
    return Coset(
        side=side,
        representative=Irrep(members[0]),
        members=tuple(Irrep(m) for m in members),
        depth_certificate=depth,
    )


def cosets_up_to(
    ring: FusionRing,
    subgroup: SubgroupSpec,
    depth: int,
    side: str = "left",
    budget: int | None = None,
) -> list:
    """Partition of the windowed irreducibles into cosets, ordered by
    representative."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if budget is None:
        budget = closure_budget()
    subgroup.check_ring(ring)
    words = [tuple(w) for w in ring.irreps_up_to(depth)]
    if len(words) > budget:
        raise CosetBudgetError(budget, len(words))

    if isinstance(subgroup, FactorSubgroup):
        classes = _factor_classes(ring, words, subgroup.index, side)
    else:
        classes = _generic_classes(ring, subgroup, words, depth, side)

    out = []
    for mem in classes:
        mem.sort(key=ring.word_sort_key)
        out.append(
            Coset(
                side=side,
                representative=Irrep(mem[0]),
                members=tuple(Irrep(m) for m in mem),
                depth_certificate=depth,
            )
        )
    out.sort(key=lambda c: ring.word_sort_key(c.representative))
    return out


def _factor_classes(ring, words, index, side):
    """Coset classes modulo one free-product factor.

    The fusion recursion makes each class the set of words sharing a fixed
    word after stripping the boundary letter in the chosen factor (trailing
    for the left quotient, leading for the right one); this closed form is
    cross-checked against the generic closure in the test suite.
    """
    classes: dict = {}
    for w in words:
        if side == "left":
            key = w[:-1] if (w and w[-1][0] == index) else w
        else:
            key = w[1:] if (w and w[0][0] == index) else w
        classes.setdefault(key, []).append(w)
    return list(classes.values())


def _generic_classes(ring, subgroup, words, depth, side):
    ts = _prepared_members(ring, subgroup, depth)
    parent = {w: w for w in words}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for w in words:
        for m in _moves(ring, w, ts, depth, side):
            if m in parent:
                union(w, m)
    classes: dict = {}
    for w in words:
        classes.setdefault(find(w), []).append(w)
    return list(classes.values())


# ---------------------------------------------------------------------------
# Divisibility


@dataclass(frozen=True)
class DivisibilityVerdict:
    """Outcome of the windowed divisibility test.

    When ``divisible`` holds, ``representatives`` maps each coset
    representative to a certified member r with r (x) s irreducible for every
    windowed member s of the subgroup.  Otherwise ``counterexample`` names a
    coset in which every windowed member fails.
    """

    divisible: bool
    depth: int
    coset_count: int
    representatives: dict | None = None
    counterexample: Coset | None = None

    def describe(self) -> str:
        if self.divisible:
            return "divisible up to depth %d" % self.depth
        return "not divisible: every windowed member of the coset of %r fails" % (
            tuple(self.counterexample.representative),
        )


def _irreducible_with_all(ring, word, ts):
    """True when word (x) t is a single term of multiplicity 1 for every t."""
    for t, _ in ts:
        if word and word[-1][0] == t[0][0]:
            dec = _fuse_raw(ring, word, t)
            if len(dec) != 1 or next(iter(dec.values())) != 1:
                return False
        # Different boundary factors concatenate to a single word.
    return True


def is_divisible(
    ring: FusionRing,
    subgroup: SubgroupSpec,
    depth: int,
    budget: int | None = None,
) -> DivisibilityVerdict:
    """Search each windowed coset for a member whose fusion with every
    windowed subgroup member is irreducible."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    cosets = cosets_up_to(ring, subgroup, depth, side="left", budget=budget)
    ts = _prepared_members(ring, subgroup, depth)
    ts_by_block: dict = {}
    for t, tlen in ts:
        ts_by_block.setdefault(t[0][0], []).append((t, tlen))

    reps = {}
    for coset in cosets:
        found = None
        for member in coset.members:
            w = tuple(member)
            same = ts_by_block.get(w[-1][0], ()) if w else ()
            if _irreducible_with_all(ring, w, same):
                found = member
                break
        if found is None:
            return DivisibilityVerdict(
                divisible=False,
                depth=depth,
                coset_count=len(cosets),
                counterexample=coset,
            )
        reps[coset.representative] = found
    return DivisibilityVerdict(
        divisible=True,
        depth=depth,
        coset_count=len(cosets),
        representatives=reps,
    )


SUBGROUP_TOKENS = {
    "fu-in-foz": lambda: FUInFOZSubgroup(),
    "fo-even": lambda: EvenSubgroup(),
    "trivial": lambda: TrivialSubgroup(),
}


def subgroup_from_token(token: str) -> SubgroupSpec:
    """Parse a subgroup token: ``factor:<i>``, ``fu-in-foz`` or ``fo-even``."""
    token = token.strip()
    if token.startswith("factor:"):
        try:
            return FactorSubgroup(int(token.split(":", 1)[1]))
        except ValueError:
            pass
    maker = SUBGROUP_TOKENS.get(token)
    if maker is not None:
        return maker()
    raise ValueError(
        "unknown subgroup %r; supported: factor:<i>, fu-in-foz, fo-even"
        % (token,)
    )
