"""Sparse exact integer matrices with labeled bases, Smith normal form, and
kernel/cokernel presentations of finitely generated abelian groups.

Everything is arbitrary-precision integer arithmetic; no floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction


class ModuleShapeError(ValueError):
    """Raised for inconsistent matrix/module shapes."""


class IntMatrix:
    """A sparse integer matrix with labeled row and column bases.

    Labels are arbitrary hashable objects, unique within each basis; no zero
    entries are stored.
    """

    __slots__ = ("row_labels", "col_labels", "entries")

    def __init__(self, row_labels, col_labels, entries=()):
        self.row_labels = tuple(row_labels)
        self.col_labels = tuple(col_labels)
        if len(set(self.row_labels)) != len(self.row_labels):
            raise ModuleShapeError("duplicate row labels")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise ModuleShapeError("duplicate column labels")
        m, n = len(self.row_labels), len(self.col_labels)
        ent = entries.items() if isinstance(entries, dict) else entries
        self.entries = {}
        for (i, j), v in ent:
            if not (0 <= i < m and 0 <= j < n):
                raise ModuleShapeError("entry (%d, %d) out of shape" % (i, j))
            if v:
                self.entries[(i, j)] = v

    # -- construction --------------------------------------------------------

    @classmethod
    def from_rows(cls, rows, row_labels=None, col_labels=None) -> "IntMatrix":
        m = len(rows)
        n = len(rows[0]) if rows else 0
        if row_labels is None:
            row_labels = ["r%d" % i for i in range(m)]
        if col_labels is None:
            col_labels = ["c%d" % j for j in range(n)]
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ModuleShapeError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(row_labels, col_labels, entries)

    @classmethod
    def identity(cls, labels) -> "IntMatrix":
        labels = tuple(labels)
        return cls(labels, labels, {(i, i): 1 for i in range(len(labels))})

    @classmethod
    def zero(cls, row_labels, col_labels) -> "IntMatrix":
        return cls(row_labels, col_labels, {})

    # -- basic queries -------------------------------------------------------

    @property
    def shape(self):
        return (len(self.row_labels), len(self.col_labels))

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(
            (self.row_labels, self.col_labels, frozenset(self.entries.items()))
        )

    def __repr__(self):
        return "IntMatrix(%dx%d, %d entries)" % (*self.shape, len(self.entries))

    def to_rows(self):
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j) -> dict:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        if len(self.col_labels) != len(other.row_labels):
            raise ModuleShapeError("shape mismatch in matmul")
        by_row: dict = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(i, []).append((k, v))
        by_mid: dict = {}
        for (k, j), v in other.entries.items():
            by_mid.setdefault(k, []).append((j, v))
        acc: dict = {}
        for i, row in by_row.items():
            for k, v in row:
                for j, w in by_mid.get(k, ()):
                    key = (i, j)
                    s = acc.get(key, 0) + v * w
                    if s:
                        acc[key] = s
                    else:
                        del acc[key]
        return IntMatrix(self.row_labels, other.col_labels, acc)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.col_labels,
            self.row_labels,
            {(j, i): v for (i, j), v in self.entries.items()},
        )

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.row_labels != other.row_labels:
            raise ModuleShapeError("row labels differ in hstack")
        off = len(self.col_labels)
        entries = dict(self.entries)
        for (i, j), v in other.entries.items():
            entries[(i, j + off)] = v
        return IntMatrix(
            self.row_labels, self.col_labels + other.col_labels, entries
        )

    # -- serialization -------------------------------------------------------

    def to_json_dict(self, render=str) -> dict:
        triples = sorted((i, j, v) for (i, j), v in self.entries.items())
        return {
            "rows": [render(l) for l in self.row_labels],
            "cols": [render(l) for l in self.col_labels],
            "triples": [[i, j, v] for i, j, v in triples],
        }

    def to_json(self, render=str) -> str:
        return json.dumps(
            self.to_json_dict(render), sort_keys=True, separators=(",", ":")
        )

    @classmethod
    def from_json_dict(cls, data) -> "IntMatrix":
        entries = {(i, j): v for i, j, v in data["triples"]}
        return cls(data["rows"], data["cols"], entries)


def det(A: IntMatrix) -> int:
    """Exact determinant (rational elimination; meant for small matrices)."""
    m, n = A.shape
    if m != n:
        raise ModuleShapeError("determinant needs a square matrix")
    rows = [[Fraction(v) for v in row] for row in A.to_rows()]
    sign = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if rows[i][k]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            if rows[i][k]:
                f = rows[i][k] / rows[k][k]
                for j in range(k, n):
                    rows[i][j] -= f * rows[k][j]
    prod = Fraction(sign)
    for k in range(n):
        prod *= rows[k][k]
    assert prod.denominator == 1
    return int(prod)


def rational_rank(A: IntMatrix) -> int:
    """Rank over the rationals (independent of the integer elimination)."""
    m, n = A.shape
    rows = [[Fraction(v) for v in row] for row in A.to_rows()]
    rank = 0
    col = 0
    while rank < m and col < n:
        piv = None
        for i in range(rank, m):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, m):
            if rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                for j in range(col, n):
                    rows[i][j] -= f * rows[rank][j]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """U * A * V = D with U, V unimodular and D diagonal carrying the
    divisibility chain of invariant factors."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: tuple


class _Sparse:
    """Mutable sparse matrix for eliminations: dict rows plus column index."""

    __slots__ = ("rows", "cols", "m", "n")

    def __init__(self, m, n, entries):
        self.m = m
        self.n = n
        self.rows = [dict() for _ in range(m)]
        self.cols = [set() for _ in range(n)]
        items = entries.items() if isinstance(entries, dict) else entries
        for (i, j), v in items:
            if v:
                self.rows[i][j] = v
                self.cols[j].add(i)

    def set(self, i, j, v):
        if v:
            self.rows[i][j] = v
            self.cols[j].add(i)
        elif j in self.rows[i]:
            del self.rows[i][j]
            self.cols[j].discard(i)

    def add_row(self, dst, src, factor):
        """row[dst] += factor * row[src]"""
        if not factor:
            return
        rd = self.rows[dst]
        cols = self.cols
        for j, v in self.rows[src].items():
            s = rd.get(j, 0) + factor * v
            if s:
                rd[j] = s
                cols[j].add(dst)
            elif j in rd:
                del rd[j]
                cols[j].discard(dst)

    def add_col(self, dst, src, factor):
        """col[dst] += factor * col[src]"""
        if not factor:
            return
        for i in list(self.cols[src]):
            v = self.rows[i].get(src, 0)
            if v:
                self.set(i, dst, self.rows[i].get(dst, 0) + factor * v)

    def swap_rows(self, a, b):
        if a == b:
            return
        ra, rb = self.rows[a], self.rows[b]
        for j in ra.keys() | rb.keys():
            ina, inb = j in ra, j in rb
            if ina and not inb:
                self.cols[j].discard(a)
                self.cols[j].add(b)
            elif inb and not ina:
                self.cols[j].discard(b)
                self.cols[j].add(a)
        self.rows[a], self.rows[b] = rb, ra

    def swap_cols(self, a, b):
        if a == b:
            return
        touched = self.cols[a] | self.cols[b]
        new_a, new_b = set(), set()
        for i in touched:
            r = self.rows[i]
            va = r.pop(a, 0)
            vb = r.pop(b, 0)
            if vb:
                r[a] = vb
                new_a.add(i)
            if va:
                r[b] = va
                new_b.add(i)
        self.cols[a], self.cols[b] = new_a, new_b

    def scale_row(self, i, factor):
        for j in self.rows[i]:
            self.rows[i][j] *= factor


class _Transform:
    """A unimodular row-operation accumulator (ops as left multiplications)."""

    __slots__ = ("rows",)

    def __init__(self, n):
        self.rows = [{i: 1} for i in range(n)]

    def add(self, dst, src, factor):
        rd = self.rows[dst]
        for j, v in self.rows[src].items():
            s = rd.get(j, 0) + factor * v
            if s:
                rd[j] = s
            else:
                del rd[j]

    def swap(self, a, b):
        self.rows[a], self.rows[b] = self.rows[b], self.rows[a]

    def negate(self, i):
        self.rows[i] = {j: -v for j, v in self.rows[i].items()}

    def matrix(self, labels) -> IntMatrix:
        entries = {}
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                entries[(i, j)] = v
        return IntMatrix(labels, labels, entries)


def _pick_pivot(sp: _Sparse, active_r, active_c):
    """Smallest nonzero absolute value among active entries, ties broken by
    (row, col) position."""
    best = None
    for i in active_r:
        for j, v in sp.rows[i].items():
            if j not in active_c:
                continue
            key = (abs(v), i, j)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return best[1], best[2]


def snf(A: IntMatrix) -> SNFResult:
    """Smith normal form with unimodular transforms.

    Pivoting takes the smallest nonzero absolute value (ties by position),
    which bounds entry growth; the divisibility chain is enforced before
    each diagonal position is retired.
    """
    m, n = A.shape
    sp = _Sparse(m, n, A.entries)
    U = _Transform(m)
    Vt = _Transform(n)  # column ops on A, recorded transposed

    diag = []
    k = 0
    active_r = set(range(m))
    active_c = set(range(n))
    while k < min(m, n):
        pos = _pick_pivot(sp, active_r, active_c)
        if pos is None:
            break
        pi, pj = pos
        if pi != k:
            sp.swap_rows(pi, k)
            U.swap(pi, k)
        if pj != k:
            sp.swap_cols(pj, k)
            Vt.swap(pj, k)
        while True:
            changed = False
            p = sp.rows[k][k]
            for i in list(sp.cols[k]):
                if i == k:
                    continue
                v = sp.rows[i].get(k, 0)
                if not v:
                    continue
                q = v // p
                sp.add_row(i, k, -q)
                U.add(i, k, -q)
                if sp.rows[i].get(k, 0):
                    sp.swap_rows(i, k)
                    U.swap(i, k)
                    changed = True
                    break
            if changed:
                continue
            p = sp.rows[k][k]
            for j in list(sp.rows[k]):
                if j == k:
                    continue
                v = sp.rows[k].get(j, 0)
                if not v:
                    continue
                q = v // p
                sp.add_col(j, k, -q)
                Vt.add(j, k, -q)
                if sp.rows[k].get(j, 0):
                    sp.swap_cols(j, k)
                    Vt.swap(j, k)
                    changed = True
                    break
            if not changed and len(sp.rows[k]) == 1 and len(sp.cols[k]) == 1:
                break
        p = sp.rows[k][k]
        offender = None
        for i in active_r:
            if i == k:
                continue
            for j, v in sp.rows[i].items():
                if j == k or j not in active_c:
                    continue
                if v % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            sp.add_row(k, offender, 1)
            U.add(k, offender, 1)
            continue
        if p < 0:
            sp.scale_row(k, -1)
            U.negate(k)
            p = -p
        diag.append(p)
        active_r.discard(k)
        active_c.discard(k)
        k += 1

    D = IntMatrix(
        A.row_labels, A.col_labels, {(i, i): v for i, v in enumerate(diag)}
    )
    Umat = U.matrix(A.row_labels)
    Vmat = Vt.matrix(A.col_labels).transpose()
    return SNFResult(
        U=Umat, D=D, V=Vmat, invariant_factors=tuple(v for v in diag if v)
    )


def invariant_factors_only(A: IntMatrix) -> tuple:
    """Invariant factors without transform bookkeeping.

    Uses unit pivots first and normalizes the resulting elementary divisors
    into a divisibility chain afterwards, which is basis independent.
    """
    m, n = A.shape
    sp = _Sparse(m, n, A.entries)
    diag = []
    active_r = set(range(m))
    active_c = set(range(n))
    unit_queue = [
        (i, j)
        for i in range(m)
        for j, v in sp.rows[i].items()
        if v in (1, -1)
    ]
    unit_queue.reverse()
    produced = 0
    limit = min(m, n)
    while produced < limit:
        pos = None
        while unit_queue:
            i, j = unit_queue.pop()
            if (
                i in active_r
                and j in active_c
                and sp.rows[i].get(j, 0) in (1, -1)
            ):
                pos = (i, j)
                break
        if pos is None:
            pos = _pick_pivot(sp, active_r, active_c)
        if pos is None:
            break
        pi, pj = pos
        while True:
            changed = False
            p = sp.rows[pi][pj]
            for i in list(sp.cols[pj]):
                if i == pi:
                    continue
                v = sp.rows[i].get(pj, 0)
                if not v:
                    continue
                q = v // p
                sp.add_row(i, pi, -q)
                if sp.rows[i].get(pj, 0):
                    pi = i
                    changed = True
                    break
            if changed:
                continue
            p = sp.rows[pi][pj]
            for j in list(sp.rows[pi]):
                if j == pj:
                    continue
                v = sp.rows[pi].get(j, 0)
                if not v:
                    continue
                q = v // p
                sp.add_col(j, pj, -q)
                if sp.rows[pi].get(j, 0):
                    pj = j
                    changed = True
                    break
            if not changed and len(sp.rows[pi]) == 1 and len(sp.cols[pj]) == 1:
                break
        diag.append(abs(sp.rows[pi][pj]))
        sp.set(pi, pj, 0)
        active_r.discard(pi)
        active_c.discard(pj)
        produced += 1
    return normalize_factors(diag)


def normalize_factors(values) -> tuple:
    """Normalize a multiset of elementary divisors into a divisibility chain
    (repeated pairwise gcd/lcm passes; diag(a, b) ~ diag(gcd, lcm))."""
    vals = sorted(abs(v) for v in values if v)
    changed = True
    while changed:
        changed = False
        for i in range(len(vals) - 1):
            a, b = vals[i], vals[i + 1]
            if b % a:
                g = _gcd(a, b)
                vals[i], vals[i + 1] = g, a // g * b
                changed = True
        if changed:
            vals.sort()
    return tuple(vals)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# Kernel and cokernel


@dataclass(frozen=True)
class KerCokerResult:
    """Kernel and cokernel of an integer matrix as a map from its column
    space to its row space.

    The kernel basis is given in column-label coordinates, the cokernel
    generators (torsion pieces first, then free ones) in row-label
    coordinates; both are empty when transforms were not requested.
    """

    kernel_rank: int
    kernel_basis: tuple
    coker_rank: int
    coker_torsion: tuple
    coker_generators: tuple
    rank: int


def ker_coker(A: IntMatrix, transforms: bool = True) -> KerCokerResult:
    """Kernel and cokernel via Smith normal form.

    With ``transforms`` (default) the kernel basis and cokernel generator
    vectors are produced; without, only ranks and torsion.
    """
    m, n = A.shape
    if transforms:
        res = snf(A)
        factors = res.invariant_factors
        rank = len(factors)
        kernel = []
        v_cols: dict = {}
        for (i, j), v in res.V.entries.items():
            if j >= rank:
                v_cols.setdefault(j, {})[A.col_labels[i]] = v
        for j in range(rank, n):
            kernel.append(v_cols.get(j, {}))
        # Cokernel generators are the columns of U^-1 at the torsion and
        # free positions of D.
        u_inv = _invert_unimodular(res.U)
        gens = []
        for i, f in enumerate(factors):
            if f != 1:
                gens.append(
                    {A.row_labels[r]: v for r, v in u_inv.column(i).items()}
                )
        for i in range(rank, m):
            gens.append(
                {A.row_labels[r]: v for r, v in u_inv.column(i).items()}
            )
        torsion = tuple(f for f in factors if f != 1)
        return KerCokerResult(
            kernel_rank=n - rank,
            kernel_basis=tuple(kernel),
            coker_rank=m - rank,
            coker_torsion=torsion,
            coker_generators=tuple(gens),
            rank=rank,
        )
    factors = invariant_factors_only(A)
    rank = len(factors)
    return KerCokerResult(
        kernel_rank=n - rank,
        kernel_basis=(),
        coker_rank=m - rank,
        coker_torsion=tuple(f for f in factors if f != 1),
        coker_generators=(),
        rank=rank,
    )


def _invert_unimodular(U: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix via rational elimination."""
    m, n = U.shape
    if m != n:
        raise ModuleShapeError("inverse needs a square matrix")
    aug = [
        [Fraction(v) for v in row] + [Fraction(int(i == k)) for k in range(n)]
        for i, row in enumerate(U.to_rows())
    ]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if aug[i][k]:
                piv = i
                break
        if piv is None:
            raise ModuleShapeError("matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        scale = aug[k][k]
        aug[k] = [x / scale for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    entries = {}
    for i in range(n):
        for j in range(n):
            v = aug[i][n + j]
            assert v.denominator == 1
            if v:
                entries[(i, j)] = int(v)
    return IntMatrix(U.col_labels, U.row_labels, entries)
