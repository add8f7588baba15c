"""Fusion rings of free quantum groups.

A ring is assembled from blocks: ``FO(n)`` with the ladder fusion rule
``u_k (x) u_l = u_|k-l| + u_|k-l|+2 + ... + u_k+l`` and self-conjugate
generators, ``Z`` (the group ring of the integers), and ``FU(m)``, which is
realized as the set of unitary-type words inside ``FO(m) * Z`` generated by
``u_1 z`` and ``z^-1 u_1``.  Free products of blocks have irreducibles given
by alternating words in the nontrivial irreducibles of the factors, fused by
the standard recursion: concatenate across different factors, otherwise fuse
the boundary letters and recurse on the full cancellation term.

All coefficients are exact integers; everything here is a pure function of
immutable data.  Words are tuples of ``(block_index, label)`` letters; the
empty word is the trivial irreducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class MalformedIrrepError(ValueError):
    """Raised when a word is not a valid irreducible of the given ring."""


class UnsupportedBlockSizeError(ValueError):
    """Raised for FO/FU parameters below 2."""


class Irrep(tuple):
    """An irreducible corepresentation label: an alternating word of letters.

    Subclasses ``tuple`` so that raw letter tuples and ``Irrep`` instances
    hash and compare interchangeably.  The empty word is the trivial
    corepresentation.
    """

    __slots__ = ()

    def __repr__(self):
        return "Irrep(%r)" % (tuple(self),)

    @property
    def letters(self):
        return tuple(self)

    def is_trivial(self) -> bool:
        return not self


TRIVIAL = Irrep(())


class FormalSum:
    """A finitely supported integer combination of irreducibles.

    Used both for fusion decompositions (all coefficients >= 1) and for
    integer K-theory classes (arbitrary integer coefficients).  No zero
    coefficients are stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for word, coeff in items:
            if coeff:
                w = word if isinstance(word, Irrep) else Irrep(word)
                c = acc.get(w, 0) + coeff
                if c:
                    acc[w] = c
                else:
                    del acc[w]
        self._terms = acc

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, word) -> int:
        return self._terms.get(word, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Irrep]:
        return iter(self._terms)

    def __contains__(self, word) -> bool:
        return word in self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalSum):
            return self._terms == other._terms
        if isinstance(other, Mapping):
            return self._terms == {Irrep(k): v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "FormalSum") -> "FormalSum":
        acc = dict(self._terms)
        for w, c in other._terms.items():
            n = acc.get(w, 0) + c
            if n:
                acc[w] = n
            else:
                acc.pop(w, None)
        out = FormalSum.__new__(FormalSum)
        out._terms = acc
        return out

    def scaled(self, k: int) -> "FormalSum":
        out = FormalSum.__new__(FormalSum)
        out._terms = {w: c * k for w, c in self._terms.items()} if k else {}
        return out

    def __repr__(self):
        return "FormalSum(%r)" % (self._terms,)


# ---------------------------------------------------------------------------
# Ring descriptors


@dataclass(frozen=True)
class FO:
    """Free orthogonal block of size n (classical dimension of the generator)."""

    n: int


@dataclass(frozen=True)
class FU:
    """Free unitary block of size m, realized inside FO(m) * Z."""

    m: int


@dataclass(frozen=True)
class Z:
    """The group ring of the integers."""


@dataclass(frozen=True)
class FreeProduct:
    factors: tuple

    def __init__(self, *factors):
        flat = []
        for f in factors:
            if isinstance(f, FreeProduct):
                flat.extend(f.factors)
            elif isinstance(f, FusionRing):
                if len(f.blocks) > 1 and not f.is_fu:
                    flat.extend(b.descriptor() for b in f.blocks)
                else:
                    flat.append(f.spec)
            else:
                flat.append(f)
        object.__setattr__(self, "factors", tuple(flat))


# ---------------------------------------------------------------------------
# Blocks.  A block implements letter-level fusion, conjugation, dimension,
# enumeration and ordering; free-product words are handled generically on top.


class _FOBlock:
    kind = "FO"

    def __init__(self, n: int):
        if n < 2:
            raise UnsupportedBlockSizeError("unsupported block size: FO(%d)" % n)
        self.n = n
        self._dims = [1, n]
        self._fuse_cache: dict = {}

    def descriptor(self):
        return FO(self.n)

    def conj_label(self, k):
        return k

    def dim_label(self, k) -> int:
        dims = self._dims
        while len(dims) <= k:
            dims.append(self.n * dims[-1] - dims[-2])
        return dims[k]

    def fuse_labels(self, k, l):
        # Terms u_j for j = |k-l|, |k-l|+2, ..., k+l, each with multiplicity 1.
        key = (k, l) if k <= l else (l, k)
        out = self._fuse_cache.get(key)
        if out is None:
            lo, hi = key
            out = tuple((j if j else None, 1) for j in range(hi - lo, hi + lo + 1, 2))
            self._fuse_cache[key] = out
        return out

    def label_weight(self, k) -> int:
        return 1

    def label_ok(self, k, depth) -> bool:
        return 1 <= k <= depth

    def label_key(self, k):
        return k

    def labels_up_to(self, depth):
        return list(range(1, depth + 1))

    def validate_label(self, k) -> None:
        if not isinstance(k, int) or k < 1:
            raise MalformedIrrepError("malformed irrep: bad FO index %r" % (k,))


class _ZBlock:
    kind = "Z"

    def descriptor(self):
        return Z()

    def conj_label(self, k):
        return -k

    def dim_label(self, k) -> int:
        return 1

    def fuse_labels(self, a, b):
        s = a + b
        return ((s if s else None, 1),)

    def label_weight(self, k) -> int:
        return 1

    def label_ok(self, k, depth) -> bool:
        return k != 0 and abs(k) <= depth

    def label_key(self, k):
        return (abs(k), 0 if k < 0 else 1)

    def labels_up_to(self, depth):
        out = []
        for a in range(1, depth + 1):
            out.append(-a)
            out.append(a)
        return out

    def validate_label(self, k) -> None:
        if not isinstance(k, int) or k == 0:
            raise MalformedIrrepError("malformed irrep: bad Z exponent %r" % (k,))


class _FUBlock:
    """Free unitary block: letters are nonempty unitary-type words of the
    ambient FO(m) * Z ring (see :func:`is_fu_word`)."""

    kind = "FU"

    def __init__(self, m: int):
        if m < 2:
            raise UnsupportedBlockSizeError("unsupported block size: FU(%d)" % m)
        self.m = m
        self.ambient = FusionRing(FreeProduct(FO(m), Z()))
        self._fuse_cache: dict = {}

    def descriptor(self):
        return FU(self.m)

    def conj_label(self, w):
        return _conj_raw(self.ambient, w)

    def dim_label(self, w) -> int:
        return _dim_raw(self.ambient, w)

    def fuse_labels(self, a, b):
        key = (a, b)
        out = self._fuse_cache.get(key)
        if out is None:
            dec = _fuse_raw(self.ambient, a, b)
            amb = self.ambient
            out = tuple(
                (w if w else None, dec[w])
                for w in sorted(dec, key=amb.word_sort_key)
            )
            self._fuse_cache[key] = out
        return out

    def label_weight(self, w) -> int:
        return len(w)

    def label_ok(self, w, depth) -> bool:
        return 0 < len(w) <= depth and all(
            self.ambient.blocks[j].label_ok(lab, depth) for j, lab in w
        )

    def label_key(self, w):
        return (len(w), self.ambient.word_sort_key(w)[1])

    def labels_up_to(self, depth):
        words = [w for w in fu_words_up_to(depth, max_index=depth) if w]
        words.sort(key=self.label_key)
        return words

    def validate_label(self, w) -> None:
        try:
            _validate_word(self.ambient, w)
        except MalformedIrrepError:
            raise MalformedIrrepError("malformed irrep: bad FU letter %r" % (w,))
        if not w or not is_fu_word(w):
            raise MalformedIrrepError(
                "malformed irrep: %r is not a unitary-type word" % (w,)
            )


def _make_block(spec):
    if isinstance(spec, FO):
        return _FOBlock(spec.n)
    if isinstance(spec, FU):
        return _FUBlock(spec.m)
    if isinstance(spec, Z):
        return _ZBlock()
    raise TypeError("not a block descriptor: %r" % (spec,))


# ---------------------------------------------------------------------------
# Unitary-type words inside FO(m) * Z


def is_fu_word(word) -> bool:
    """True iff ``word`` (a word of FO(m) * Z, blocks 0/1) labels an
    irreducible of the embedded free unitary ring.

    The nonempty such words are exactly
    ``z^[e0]- u_n1 z^e1 ... u_np z^[ep]+`` with ``e_i = +-1``, ``n_i >= 1``
    and the sign recursion ``e_{i+1} = -(-1)^{n_{i+1}} e_i``, where the
    brackets keep a leading z only for ``e0 = -1`` (exponent -1) and a
    trailing z only for ``ep = +1`` (exponent +1).
    """
    if not word:
        return True
    letters = list(word)
    # Leading z letter, if present, must have exponent exactly -1.
    sign = 1
    if letters[0][0] == 1:
        if letters[0][1] != -1:
            return False
        sign = -1
        letters = letters[1:]
    if not letters:
        return False
    # Now expect u_n (z^e u_n)* with each e matching the running sign, and
    # finally a trailing z^1 iff the running sign ends positive.
    expecting = 0  # block expected next: 0 = FO, 1 = Z
    count_u = 0
    for pos, (blk, lab) in enumerate(letters):
        if blk != expecting:
            return False
        if blk == 0:
            count_u += 1
            sign = sign if lab % 2 == 1 else -sign
            expecting = 1
        else:
            last = pos == len(letters) - 1
            if last:
                if lab != 1 or sign != 1:
                    return False
            else:
                if lab != sign or lab not in (-1, 1):
                    return False
            expecting = 0
    if count_u == 0:
        return False
    if letters[-1][0] == 0 and sign == 1:
        return False  # positive final sign forces a trailing z
    return True


def fu_words_up_to(depth: int, max_index: int | None = None):
    """All unitary-type words of ambient length <= depth, FO indices bounded
    by ``max_index`` (default: depth).  Includes the empty word."""
    if max_index is None:
        max_index = depth
    out = [()]
    if depth < 1:
        return out

    def build(eps0, indices):
        sign = eps0
        letters = []
        if eps0 == -1:
            letters.append((1, -1))
        for i, n in enumerate(indices):
            letters.append((0, n))
            sign = sign if n % 2 == 1 else -sign
            last = i == len(indices) - 1
            if last:
                if sign == 1:
                    letters.append((1, 1))
            else:
                letters.append((1, sign))
        return tuple(letters)

    max_p = (depth + 1) // 2
    for p in range(1, max_p + 1):
        stack = [()]
        for _ in range(p):
            stack = [t + (n,) for t in stack for n in range(1, max_index + 1)]
        for indices in stack:
            for eps0 in (1, -1):
                w = build(eps0, indices)
                if len(w) <= depth:
                    out.append(w)
    return out


# ---------------------------------------------------------------------------
# Rings


class FusionRing:
    """An immutable fusion ring: one block, or a free product of blocks.

    A standalone FU(m) ring is carried by the two ambient blocks FO(m) and Z
    with its irreducibles restricted to unitary-type words.
    """

    def __init__(self, spec):
        spec = _normalize_spec(spec)
        self.spec = spec
        self.is_fu = isinstance(spec, FU)
        if self.is_fu:
            if spec.m < 2:
                raise UnsupportedBlockSizeError(
                    "unsupported block size: FU(%d)" % spec.m
                )
            self.blocks = (_FOBlock(spec.m), _ZBlock())
        elif isinstance(spec, FreeProduct):
            self.blocks = tuple(_make_block(f) for f in spec.factors)
        else:
            self.blocks = (_make_block(spec),)
        self._enum_cache: dict = {}

    # -- structure ---------------------------------------------------------

    def __repr__(self):
        return "FusionRing(%s)" % (render_spec(self.spec),)

    def __eq__(self, other):
        return isinstance(other, FusionRing) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    @property
    def factor_count(self) -> int:
        return len(self.blocks)

    def word_length(self, word) -> int:
        """Weighted word length: FO and Z letters count 1, an FU letter
        counts its ambient length."""
        blocks = self.blocks
        return sum(blocks[j].label_weight(lab) for j, lab in word)

    def letter_sort_key(self, letter):
        j, lab = letter
        return (j, self.blocks[j].label_key(lab))

    def word_sort_key(self, word):
        return (
            self.word_length(word),
            tuple(self.letter_sort_key(l) for l in word),
        )

    def in_window(self, word, depth: int) -> bool:
        blocks = self.blocks
        return self.word_length(word) <= depth and all(
            blocks[j].label_ok(lab, depth) for j, lab in word
        )

    # -- operations ----------------------------------------------------------

    def validate(self, word) -> Irrep:
        _validate_word(self, word)
        if self.is_fu and not is_fu_word(word):
            raise MalformedIrrepError(
                "malformed irrep: %r is not a unitary-type word" % (tuple(word),)
            )
        return word if isinstance(word, Irrep) else Irrep(word)

    def conj(self, word) -> Irrep:
        self.validate(word)
        return Irrep(_conj_raw(self, word))

    def dim(self, word) -> int:
        self.validate(word)
        return _dim_raw(self, word)

    def fuse(self, r, s) -> FormalSum:
        self.validate(r)
        self.validate(s)
        dec = _fuse_raw(self, tuple(r), tuple(s))
        out = FormalSum.__new__(FormalSum)
        out._terms = {
            Irrep(w): dec[w] for w in sorted(dec, key=self.word_sort_key)
        }
        return out

    def fuse_sums(self, x: FormalSum, y: FormalSum) -> FormalSum:
        """Bilinear extension of fusion to formal sums."""
        acc: dict = {}
        for r, cr in x.items():
            for s, cs in y.items():
                for w, m in _fuse_raw(self, tuple(r), tuple(s)).items():
                    c = acc.get(w, 0) + cr * cs * m
                    if c:
                        acc[w] = c
                    else:
                        del acc[w]
        out = FormalSum.__new__(FormalSum)
        out._terms = {
            Irrep(w): acc[w] for w in sorted(acc, key=self.word_sort_key)
        }
        return out

    def irreps_up_to(self, depth: int) -> list:
        """All irreducibles of weighted length <= depth with every block
        parameter <= depth, in canonical order (length, then lexicographic)."""
        if depth < 0:
            return []
        cached = self._enum_cache.get(depth)
        if cached is None:
            words = [()]
            frontier = [((), 0)]
            letter_pool = [
                [
                    (j, lab, self.blocks[j].label_weight(lab))
                    for lab in self.blocks[j].labels_up_to(depth)
                ]
                for j in range(len(self.blocks))
            ]
            while frontier:
                nxt = []
                for w, used in frontier:
                    last = w[-1][0] if w else None
                    for j, pool in enumerate(letter_pool):
                        if j == last:
                            continue
                        for _, lab, wt in pool:
                            if used + wt <= depth:
                                nxt.append((w + ((j, lab),), used + wt))
                words.extend(w for w, _ in nxt)
                frontier = nxt
            if self.is_fu:
                words = [w for w in words if is_fu_word(w)]
            words.sort(key=self.word_sort_key)
            cached = [Irrep(w) for w in words]
            self._enum_cache[depth] = cached
        return list(cached)


def _normalize_spec(spec):
    if isinstance(spec, FusionRing):
        return spec.spec
    if isinstance(spec, FreeProduct):
        if not spec.factors:
            raise TypeError("free product needs at least one factor")
        if len(spec.factors) == 1:
            return _normalize_spec(spec.factors[0])
        for f in spec.factors:
            if not isinstance(f, (FO, FU, Z)):
                raise TypeError("bad free-product factor: %r" % (f,))
        return spec
    if isinstance(spec, (FO, FU, Z)):
        return spec
    raise TypeError("not a ring descriptor: %r" % (spec,))


def render_spec(spec) -> str:
    if isinstance(spec, FO):
        return "FO(%d)" % spec.n
    if isinstance(spec, FU):
        return "FU(%d)" % spec.m
    if isinstance(spec, Z):
        return "Z"
    return "*".join(render_spec(f) for f in spec.factors)


# ---------------------------------------------------------------------------
# Raw word operations (hot paths; operate on plain tuples)


def _validate_word(ring, word) -> None:
    blocks = ring.blocks
    last = None
    try:
        for j, lab in word:
            if not 0 <= j < len(blocks):
                raise MalformedIrrepError(
                    "malformed irrep: no factor %r in %r" % (j, ring)
                )
            if j == last:
                raise MalformedIrrepError(
                    "malformed irrep: adjacent letters share a factor"
                )
            blocks[j].validate_label(lab)
            last = j
    except (TypeError, ValueError) as exc:
        if isinstance(exc, MalformedIrrepError):
            raise
        raise MalformedIrrepError("malformed irrep: %r" % (word,)) from exc


def _conj_raw(ring, word):
    blocks = ring.blocks
    return tuple((j, blocks[j].conj_label(lab)) for j, lab in reversed(word))


def _dim_raw(ring, word) -> int:
    d = 1
    blocks = ring.blocks
    for j, lab in word:
        d *= blocks[j].dim_label(lab)
    return d


def _fuse_raw(ring, r: tuple, s: tuple) -> dict:
    """Decomposition of r (x) s as a dict word -> multiplicity."""
    if not r:
        return {s: 1}
    if not s:
        return {r: 1}
    a = r[-1]
    b = s[0]
    if a[0] != b[0]:
        return {r + s: 1}
    v = r[:-1]
    w = s[1:]
    blk = a[0]
    out: dict = {}
    for lab, mult in ring.blocks[blk].fuse_labels(a[1], b[1]):
        if lab is None:
            for t, c in _fuse_raw(ring, v, w).items():
                n = out.get(t, 0) + c * mult
                out[t] = n
        else:
            t = v + ((blk, lab),) + w
            out[t] = out.get(t, 0) + mult
    return out


def _fuse_bounded(ring, r: tuple, s: tuple, depth: int) -> dict:
    """Like :func:`_fuse_raw` but drops words whose weighted length exceeds
    ``depth`` (block parameters are NOT re-checked; callers filter)."""
    if not r:
        return {s: 1} if ring.word_length(s) <= depth else {}
    if not s:
        return {r: 1} if ring.word_length(r) <= depth else {}
    a = r[-1]
    b = s[0]
    blocks = ring.blocks
    if a[0] != b[0]:
        t = r + s
        return {t: 1} if ring.word_length(t) <= depth else {}
    v = r[:-1]
    w = s[1:]
    blk = a[0]
    block = blocks[blk]
    base = ring.word_length(v) + ring.word_length(w)
    out: dict = {}
    for lab, mult in block.fuse_labels(a[1], b[1]):
        if lab is None:
            for t, c in _fuse_bounded(ring, v, w, depth).items():
                out[t] = out.get(t, 0) + c * mult
        elif base + block.label_weight(lab) <= depth:
            t = v + ((blk, lab),) + w
            out[t] = out.get(t, 0) + mult
    return out


# ---------------------------------------------------------------------------
# Public module-level API mirroring the ring methods


def make_ring(spec) -> FusionRing:
    """Build an immutable fusion ring from a descriptor (FO, FU, Z or
    FreeProduct).  Nested free products are flattened."""
    return FusionRing(spec)


def fuse(ring: FusionRing, r, s) -> FormalSum:
    return ring.fuse(r, s)


def conj(ring: FusionRing, r) -> Irrep:
    return ring.conj(r)


def dim(ring: FusionRing, r) -> int:
    return ring.dim(r)


def irreps_up_to(ring: FusionRing, depth: int) -> list:
    return ring.irreps_up_to(depth)
