"""Integer K-theory of free quantum groups.

Two routes are implemented.  The tree route computes the K-groups of the
coset complex of a two-factor free product: the boundary matrix sends the
basis element of a word to the pair of its classes in the two coset spaces,
weighted by the dimension of the stripped boundary letter; its kernel and
cokernel are the odd and even K-groups.  The Pimsner-Voiculescu route
assembles the block matrix of generator actions minus dimensions on a
coefficient module and reads the K-groups of the crossed product off its
kernel and cokernel.

Both routes use exact integer arithmetic.  Tree computations are windowed by
word length and reported only when two consecutive windows agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fusion import (
    FO,
    FU,
    FreeProduct,
    FusionRing,
    Irrep,
    Z,
    _fuse_raw,
    make_ring,
)
from .intmatrix import IntMatrix, ModuleShapeError, ker_coker
from .subgroups import FactorSubgroup, cosets_up_to
from .tensoralg import GroupPresentation


class NotStabilizedError(RuntimeError):
    """Raised when consecutive windows disagree on the K-group data."""

    def __init__(self, depth, first, second):
        super().__init__(
            "not stabilized at requested depth %d: %r vs %r"
            % (depth, first, second)
        )
        self.depth = depth
        self.results = (first, second)


# ---------------------------------------------------------------------------
# Abelian group descriptors


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group in invariant-factor normal form."""

    rank: int
    torsion: tuple = ()
    generators: tuple = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion factors must form a divisibility chain")

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def render(self) -> str:
        bits = []
        if self.rank == 1:
            bits.append("Z")
        elif self.rank > 1:
            bits.append("Z^%d" % self.rank)
        bits.extend("Z/%d" % t for t in self.torsion)
        return " + ".join(bits) if bits else "0"

    def to_json_dict(self) -> dict:
        return {
            "rank": self.rank,
            "torsion": list(self.torsion),
            "generators": [str(g) for g in self.generators],
        }


@dataclass(frozen=True)
class UnresolvedExtension:
    """An extension of abelian groups left unresolved (reported by pieces)."""

    subgroup: AbelianGroup
    quotient: AbelianGroup

    def render(self) -> str:
        return "extension of %s by %s (unresolved)" % (
            self.quotient.render(),
            self.subgroup.render(),
        )

    def to_json_dict(self) -> dict:
        return {
            "extension_unresolved": True,
            "subgroup": self.subgroup.to_json_dict(),
            "quotient": self.quotient.to_json_dict(),
        }


@dataclass(frozen=True)
class KGroupReport:
    """Even and odd K-groups with generator labels and provenance."""

    k0: AbelianGroup | UnresolvedExtension
    k1: AbelianGroup | UnresolvedExtension
    route: str
    stabilized_at: int | None = None
    warnings: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "K0": self.k0.to_json_dict(),
            "K1": self.k1.to_json_dict(),
            "route": self.route,
            "stabilized_at": self.stabilized_at,
            "warnings": list(self.warnings),
        }

    def render_text(self) -> str:
        lines = [
            "K0  %s" % _render_group_with_gens(self.k0),
            "K1  %s" % _render_group_with_gens(self.k1),
            "route: %s" % self.route,
        ]
        if self.stabilized_at is not None:
            lines.append("stabilized at depth %d" % self.stabilized_at)
        for w in self.warnings:
            lines.append("warning: %s" % w)
        return "\n".join(lines)


def _render_group_with_gens(g) -> str:
    if isinstance(g, UnresolvedExtension):
        return g.render()
    s = g.render()
    if g.generators:
        s += "    generators: " + ", ".join(str(x) for x in g.generators)
    return s


# ---------------------------------------------------------------------------
# The boundary matrix of the coset complex


def boundary_matrix(G0, G1, depth: int, budget=None) -> IntMatrix:
    """Labeled boundary matrix of the windowed coset complex of G0 * G1.

    Columns are indexed by the windowed words; rows by the cosets modulo the
    two factors.  A word r = w t ending in factor 0 maps to
    -dim(t) [w]_0 + [r]_1, a word ending in factor 1 to -[r]_0 + dim(t) [w]_1,
    and the empty word to -[e]_0 + [e]_1.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    ring = make_ring(FreeProduct(G0, G1))
    if ring.factor_count != 2:
        raise ValueError("boundary_matrix needs exactly two factors")
    words = ring.irreps_up_to(depth)
    reps = []
    for j in (0, 1):
        rep: dict = {}
        for c in cosets_up_to(ring, FactorSubgroup(j), depth, budget=budget):
            for m in c.members:
                rep[m] = c.representative
        reps.append(rep)
    row_labels = [("G/G0", r) for r in sorted({v for v in reps[0].values()}, key=ring.word_sort_key)]
    row_labels += [("G/G1", r) for r in sorted({v for v in reps[1].values()}, key=ring.word_sort_key)]
    row_index = {lab: i for i, lab in enumerate(row_labels)}
    entries: dict = {}
    blocks = ring.blocks
    for j_col, r in enumerate(words):
        if len(r) == 0:
            i0 = row_index[("G/G0", reps[0][r])]
            i1 = row_index[("G/G1", reps[1][r])]
            entries[(i0, j_col)] = entries.get((i0, j_col), 0) - 1
            entries[(i1, j_col)] = entries.get((i1, j_col), 0) + 1
            continue
        blk, lab = r[-1]
        parent = Irrep(tuple(r)[:-1])
        d = blocks[blk].dim_label(lab)
        if blk == 0:
            i0 = row_index[("G/G0", reps[0][parent])]
            i1 = row_index[("G/G1", reps[1][r])]
            entries[(i0, j_col)] = entries.get((i0, j_col), 0) - d
            entries[(i1, j_col)] = entries.get((i1, j_col), 0) + 1
        else:
            i0 = row_index[("G/G0", reps[0][r])]
            i1 = row_index[("G/G1", reps[1][parent])]
            entries[(i0, j_col)] = entries.get((i0, j_col), 0) - 1
            entries[(i1, j_col)] = entries.get((i1, j_col), 0) + d
    return IntMatrix(row_labels, words, entries)


# ---------------------------------------------------------------------------
# Fast windowed ranks of the coset complex
#
# The boundary matrix has one unit entry per column, in a row hit by no other
# unit; eliminating columns from the longest words down therefore produces no
# fill-in (each pivot row holds nothing but its pivot once all longer columns
# are gone).  The run below performs that elimination with per-row occupancy
# counts, which certifies every pivot row was reduced to its single unit
# entry; any violation aborts to signal a broken window.


class _TreeEliminationError(AssertionError):
    pass


def _letters_by_weight(block, depth: int):
    out: dict = {}
    for lab in block.labels_up_to(depth):
        w = block.label_weight(lab)
        if w <= depth:
            out.setdefault(w, []).append(block.dim_label(lab))
    return {w: np.array(d, dtype=np.int64) for w, d in out.items()}


def tree_complex_ranks(ring: FusionRing, depth: int):
    """(kernel_rank, coker_rank, coker_torsion, shape) of the windowed
    boundary matrix, computed by the zero-fill elimination."""
    if ring.factor_count != 2 or ring.is_fu:
        raise ValueError("tree complex needs exactly two factors")
    letters = [_letters_by_weight(b, depth) for b in ring.blocks]
    counts = [
        {w: len(d) for w, d in letters[j].items()} for j in (0, 1)
    ]

    # Level-by-level enumeration: per word, its parent id and last block.
    parents = [np.zeros(1, dtype=np.int64)]  # level 0: the empty word
    lastblock = [np.full(1, -1, dtype=np.int8)]
    total = 1
    per_level: list = [np.array([0], dtype=np.int64)]
    for lvl in range(1, depth + 1):
        par_parts = []
        blk_parts = []
        for b in (0, 1):
            for w, dims in sorted(letters[b].items()):
                if w > lvl:
                    continue
                src_ids = per_level[lvl - w]
                srcs = src_ids[lastblock[lvl - w] != b]
                if len(srcs) == 0:
                    continue
                par_parts.append(np.repeat(srcs, len(dims)))
                blk_parts.append(np.full(len(srcs) * len(dims), b, dtype=np.int8))
        if par_parts:
            par = np.concatenate(par_parts)
            blk = np.concatenate(blk_parts)
        else:
            par = np.zeros(0, dtype=np.int64)
            blk = np.zeros(0, dtype=np.int8)
        ids = np.arange(total, total + len(par), dtype=np.int64)
        total += len(par)
        parents.append(par)
        lastblock.append(blk)
        per_level.append(ids)

    n_words = total
    all_parents = np.concatenate(parents)
    all_lastblock = np.concatenate(lastblock)

    # Row occupancy: each word w != e owns the row of the side it does not
    # end in; that row holds the unit entry of column w plus one entry per
    # child of w (all children lie in the other block).  The empty word owns
    # both side rows.
    pending = np.ones(n_words, dtype=np.int64)
    for lvl in range(depth + 1):
        ids = per_level[lvl]
        if len(ids) == 0:
            continue
        budget_left = depth - lvl
        for b in (0, 1):
            nkids = sum(
                c for w, c in counts[b].items() if w <= budget_left
            )
            if lvl == 0:
                continue  # the empty word is handled separately below
            mask = all_lastblock[ids] != b
            pending[ids[mask]] += nkids
    eps_pending = [1, 1]
    for b in (0, 1):
        eps_pending[b] += sum(c for w, c in counts[b].items() if w <= depth)

    # Eliminate levels from the deepest down; every pivot must be a lone unit.
    for lvl in range(depth, 0, -1):
        ids = per_level[lvl]
        if len(ids) == 0:
            continue
        if not np.all(pending[ids] == 1):
            raise _TreeEliminationError(
                "pivot row not reduced to its unit at level %d" % lvl
            )
        pars = all_parents[ids]
        mask_eps = pars == 0
        if np.any(mask_eps):
            blocks_here = all_lastblock[ids[mask_eps]]
            eps_pending[0] -= int(np.sum(blocks_here == 0))
            eps_pending[1] -= int(np.sum(blocks_here == 1))
        rest = pars[~mask_eps]
        if len(rest):
            np.add.at(pending, rest, -1)
    if eps_pending[0] != 1:
        raise _TreeEliminationError("empty-word row 0 not reduced to its unit")
    eps_pending[1] -= 1  # clearing the empty-word column
    if eps_pending[1] != 0:
        raise _TreeEliminationError("leftover row is not zero")

    n_rows = n_words + 1
    rank = n_words  # every column was eliminated on a unit pivot
    return (0, n_rows - rank, (), (n_rows, n_words))


def k_of_tree_algebra(G0, G1, depth: int) -> KGroupReport:
    """K-groups of the quotient complex of a two-factor free product: the odd
    group is the kernel of the boundary matrix, the even one its cokernel.

    Computed at the requested depth and at depth + 1; reported only when the
    two windows agree.  Equivalent to ker/coker of :func:`boundary_matrix`,
    against which it is cross-checked in the tests.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    ring = make_ring(FreeProduct(G0, G1))
    results = []
    for d in (depth, depth + 1):
        k1_rank, k0_rank, torsion, _shape = tree_complex_ranks(ring, d)
        results.append((k1_rank, k0_rank, torsion))
    if results[0] != results[1]:
        raise NotStabilizedError(depth, results[0], results[1])
    k1_rank, k0_rank, torsion = results[0]
    gens0 = ("1",) if (k0_rank == 1 and not torsion) else tuple(
        "x%d" % i for i in range(k0_rank)
    )
    report = KGroupReport(
        k0=AbelianGroup(rank=k0_rank, torsion=torsion, generators=gens0),
        k1=AbelianGroup(rank=k1_rank),
        route="tree_boundary",
        stabilized_at=depth,
        warnings=_ring_warnings(ring),
    )
    return report


def _ring_warnings(ring: FusionRing) -> tuple:
    if ring.is_fu:
        return ()
    out = []
    for b in ring.blocks:
        if b.kind == "FO" and b.n == 2:
            out.append(
                "FO block of size 2: K-group statements are certified only"
                " for sizes >= 3"
            )
    return tuple(out)


# ---------------------------------------------------------------------------
# Pimsner-Voiculescu route


@dataclass(frozen=True)
class CoefficientModule:
    """Finitely generated free K-theory data of a coefficient algebra: ranks
    in both degrees, one pair of action matrices per generator, and the
    integer dimension of each generator."""

    k0_rank: int
    k1_rank: int
    actions: dict
    dims: dict
    k0_labels: tuple = ()
    k1_labels: tuple = ()

    def label0(self, i):
        return self.k0_labels[i] if i < len(self.k0_labels) else "k0:%d" % i

    def label1(self, i):
        return self.k1_labels[i] if i < len(self.k1_labels) else "k1:%d" % i


def trivial_module(pres: GroupPresentation) -> CoefficientModule:
    """K-theory of the complex numbers: rank one in degree zero, with each
    generator acting by its dimension."""
    dims = pres.generator_dims()
    actions = {}
    for g in pres.generator_names():
        on_k0 = IntMatrix(("1",), ("1",), {(0, 0): dims[g]})
        on_k1 = IntMatrix((), ())
        actions[g] = (on_k0, on_k1)
    return CoefficientModule(
        k0_rank=1,
        k1_rank=0,
        actions=actions,
        dims=dict(dims),
        k0_labels=("1",),
    )


def _sigma_blocks(pres: GroupPresentation, module: CoefficientModule, degree: int):
    names = pres.generator_names()
    rank = module.k0_rank if degree == 0 else module.k1_rank
    label = module.label0 if degree == 0 else module.label1
    row_labels = tuple(label(i) for i in range(rank))
    blocks = []
    for g in names:
        if g not in module.actions or g not in module.dims:
            raise ModuleShapeError("module shape error: missing generator %r" % g)
        act = module.actions[g][degree]
        if act.shape != (rank, rank):
            raise ModuleShapeError(
                "module shape error: action of %r on K%d is %r, expected %dx%d"
                % (g, degree, act.shape, rank, rank)
            )
        dim = module.dims[g]
        entries = dict(act.entries)
        for i in range(rank):
            v = entries.get((i, i), 0) - dim
            if v:
                entries[(i, i)] = v
            else:
                entries.pop((i, i), None)
        col_labels = tuple(
            g if rank == 1 else "%s[%d]" % (g, i) for i in range(rank)
        )
        blocks.append(IntMatrix(row_labels, col_labels, entries))
    out = blocks[0]
    for b in blocks[1:]:
        out = out.hstack(b)
    return out


def pv_matrices(pres: GroupPresentation, module: CoefficientModule):
    """The two block-row matrices (one per degree) whose blocks are the
    generator actions minus the generator dimensions."""
    return _sigma_blocks(pres, module, 0), _sigma_blocks(pres, module, 1)


def _group_from_pieces(sub_kc, sub_labels, quot_rank, quot_labels):
    """Assemble one K-group from the cokernel piece (subgroup) and the kernel
    piece (quotient) of the defining exact sequence."""
    sub = AbelianGroup(
        rank=sub_kc.coker_rank,
        torsion=sub_kc.coker_torsion,
        generators=sub_labels,
    )
    quot = AbelianGroup(rank=quot_rank, generators=quot_labels)
    if sub.is_free:
        return AbelianGroup(
            rank=sub.rank + quot.rank,
            generators=sub.generators + quot.generators,
        )
    return UnresolvedExtension(subgroup=sub, quotient=quot)


def _vector_labels(vectors) -> tuple:
    """Readable labels for generator vectors: the bare label for a signed
    unit vector, else the full integer combination."""
    labels = []
    for vec in vectors:
        if len(vec) == 1:
            ((lab, v),) = vec.items()
            if v in (1, -1):
                labels.append(str(lab))
                continue
        labels.append(
            "["
            + ", ".join(
                "%d*%s" % (v, l)
                for l, v in sorted(vec.items(), key=lambda t: str(t[0]))
            )
            + "]"
        )
    return tuple(labels)


def pv_k_groups(pres: GroupPresentation, module: CoefficientModule) -> KGroupReport:
    """K-groups of the crossed product from the six-term sequence: each
    degree is an extension of the kernel in the other degree by the cokernel
    in its own degree; resolved (split) when both pieces are free."""
    sigma0, sigma1 = pv_matrices(pres, module)
    kc0 = ker_coker(sigma0)
    kc1 = ker_coker(sigma1)
    k0 = _group_from_pieces(
        kc0,
        _vector_labels(kc0.coker_generators),
        kc1.kernel_rank,
        _vector_labels(kc1.kernel_basis),
    )
    k1 = _group_from_pieces(
        kc1,
        _vector_labels(kc1.coker_generators),
        kc0.kernel_rank,
        _vector_labels(kc0.kernel_basis),
    )
    return KGroupReport(
        k0=k0,
        k1=k1,
        route="pv_sequence",
        stabilized_at=None,
        warnings=pres.fo_warnings(),
    )


# ---------------------------------------------------------------------------
# The regular coefficient module (right multiplication on the fusion basis)


@dataclass(frozen=True)
class TruncatedAction:
    """A windowed action matrix together with the terms that fell outside the
    window (column word, product term, multiplicity)."""

    matrix: IntMatrix
    dropped: tuple

    @property
    def is_exact(self) -> bool:
        return not self.dropped


def right_action_matrix(ring: FusionRing, r, depth: int) -> TruncatedAction:
    """Matrix of x -> x * conj(r) on the windowed fusion basis.

    Entries whose product leaves the window are reported in ``dropped``;
    callers combining these matrices must check :attr:`TruncatedAction.is_exact`.
    """
    r = ring.validate(r)
    if not ring.in_window(r, depth):
        raise ValueError("%r is not within depth %d" % (tuple(r), depth))
    basis = ring.irreps_up_to(depth)
    index = {w: i for i, w in enumerate(basis)}
    rbar = tuple(ring.conj(r))
    entries: dict = {}
    dropped = []
    for j, x in enumerate(basis):
        for term, mult in _fuse_raw(ring, tuple(x), rbar).items():
            ti = index.get(Irrep(term))
            if ti is None:
                dropped.append((x, Irrep(term), mult))
            else:
                entries[(ti, j)] = entries.get((ti, j), 0) + mult
    return TruncatedAction(
        matrix=IntMatrix(basis, basis, entries), dropped=tuple(dropped)
    )


def presentation_ring(pres: GroupPresentation) -> FusionRing:
    """The fusion ring named by a presentation (free product in the alphabet
    order: unitary blocks first)."""
    factors = [FU(m) for m in pres.fu_sizes] + [FO(n) for n in pres.fo_sizes]
    if len(factors) == 1:
        return make_ring(factors[0])
    return make_ring(FreeProduct(*factors))


def generator_irreps(pres: GroupPresentation) -> dict:
    """The irreducible carrying each alphabet generator inside the
    presentation ring."""
    ring = presentation_ring(pres)
    names = pres.generator_names()
    out = {}
    idx = 0
    pos = 0
    fu_u = ((0, 1), (1, 1))
    fu_ubar = ((1, -1), (0, 1))
    for _ in pres.fu_sizes:
        if ring.is_fu:
            out[names[pos]] = Irrep(fu_u)
            out[names[pos + 1]] = Irrep(fu_ubar)
        else:
            out[names[pos]] = Irrep(((idx, fu_u),))
            out[names[pos + 1]] = Irrep(((idx, fu_ubar),))
        pos += 2
        idx += 1
    for _ in pres.fo_sizes:
        if ring.factor_count == 1:
            out[names[pos]] = Irrep(((0, 1),))
        else:
            out[names[pos]] = Irrep(((idx, 1),))
        pos += 1
        idx += 1
    return out


def regular_module(pres: GroupPresentation, depth: int):
    """The windowed regular coefficient module (right multiplication on the
    fusion basis) plus the dropped out-of-window terms."""
    ring = presentation_ring(pres)
    gens = generator_irreps(pres)
    dims = pres.generator_dims()
    basis = ring.irreps_up_to(depth)
    actions = {}
    dropped = []
    for g, irrep in gens.items():
        act = right_action_matrix(ring, irrep, depth)
        dropped.extend((g,) + d for d in act.dropped)
        actions[g] = (act.matrix, IntMatrix((), ()))
    module = CoefficientModule(
        k0_rank=len(basis),
        k1_rank=0,
        actions=actions,
        dims=dict(dims),
        k0_labels=tuple(str(tuple(w)) for w in basis),
    )
    return module, tuple(dropped)
