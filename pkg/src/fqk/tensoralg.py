"""Integer noncommutative polynomials on the generator alphabet of a free
quantum group, and the length-one resolution check.

The representation ring of a free product of k free unitary and l free
orthogonal blocks is the free integer algebra on 2k + l generators: one pair
(u_i, ubar_i) per unitary block and one self-conjugate v_j per orthogonal
block.  The augmentation sends each generator to its classical dimension.
The module checks exactness of

    0 -> TV (x) V -> TV -> Z -> 0

degreewise, where d(x (x) g) = x * (theta(g) - eps(g)) with theta swapping
u_i and ubar_i and fixing v_j, by verifying the contracting homotopy
identities on every basis word up to a degree bound.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GroupPresentation:
    """Sizes of the unitary and orthogonal blocks of a free quantum group."""

    fu_sizes: tuple = ()
    fo_sizes: tuple = ()

    def __post_init__(self):
        for m in self.fu_sizes:
            if m < 2:
                raise ValueError("unsupported block size: FU(%d)" % m)
        for n in self.fo_sizes:
            if n < 2:
                raise ValueError("unsupported block size: FO(%d)" % n)

    @property
    def k(self) -> int:
        return len(self.fu_sizes)

    @property
    def l(self) -> int:
        return len(self.fo_sizes)

    def generator_names(self) -> tuple:
        """Alphabet in resolution order: u_i, ubar_i pairs, then v_j."""
        names = []
        for i in range(self.k):
            suffix = str(i + 1) if self.k > 1 else ""
            names.append("u" + suffix)
            names.append("ubar" + suffix)
        for j in range(self.l):
            suffix = str(j + 1) if self.l > 1 else ""
            names.append("v" + suffix)
        return tuple(names)

    def generator_dims(self) -> dict:
        dims = {}
        names = iter(self.generator_names())
        for m in self.fu_sizes:
            dims[next(names)] = m
            dims[next(names)] = m
        for n in self.fo_sizes:
            dims[next(names)] = n
        return dims

    def conjugate_swap(self) -> dict:
        """The involution exchanging each u_i with ubar_i, fixing v_j."""
        swap = {}
        names = self.generator_names()
        idx = 0
        for _ in range(self.k):
            a, b = names[idx], names[idx + 1]
            swap[a] = b
            swap[b] = a
            idx += 2
        for _ in range(self.l):
            swap[names[idx]] = names[idx]
            idx += 1
        return swap

    def fo_warnings(self) -> tuple:
        return tuple(
            "FO block of size %d: K-group statements are certified only for"
            " sizes >= 3" % n
            for n in self.fo_sizes
            if n == 2
        )


class TensorElement:
    """An integer-coefficient word polynomial in the generator alphabet.

    Words are tuples of generator names; the empty word is the unit.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        for word, coeff in items:
            if coeff:
                w = tuple(word)
                c = acc.get(w, 0) + coeff
                if c:
                    acc[w] = c
                else:
                    del acc[w]
        self._terms = acc

    @classmethod
    def unit(cls) -> "TensorElement":
        return cls({(): 1})

    @classmethod
    def word(cls, *letters) -> "TensorElement":
        return cls({tuple(letters): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, TensorElement):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        acc = dict(self._terms)
        for w, c in other._terms.items():
            s = acc.get(w, 0) + c
            if s:
                acc[w] = s
            else:
                del acc[w]
        out = TensorElement.__new__(TensorElement)
        out._terms = acc
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, k: int) -> "TensorElement":
        out = TensorElement.__new__(TensorElement)
        out._terms = {w: c * k for w, c in self._terms.items()} if k else {}
        return out

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scaled(other)
        acc: dict = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                s = acc.get(w, 0) + c1 * c2
                if s:
                    acc[w] = s
                else:
                    del acc[w]
        out = TensorElement.__new__(TensorElement)
        out._terms = acc
        return out

    __rmul__ = __mul__

    def __repr__(self):
        if not self._terms:
            return "TensorElement(0)"
        bits = []
        for w in sorted(self._terms, key=lambda t: (len(t), t)):
            c = self._terms[w]
            name = "*".join(w) if w else "1"
            bits.append("%+d%s" % (c, "" if not w else "*" + name))
        return "TensorElement(%s)" % " ".join(bits)


def augmentation(pres: GroupPresentation, x: TensorElement) -> int:
    """Ring homomorphism to the integers sending each generator to its
    classical dimension."""
    dims = pres.generator_dims()
    total = 0
    for w, c in x.items():
        prod = 1
        for g in w:
            prod *= dims[g]
        total += c * prod
    return total


# Elements of the degree-one module TV (x) V are dicts (word, generator) -> int.


def differential(pres: GroupPresentation, pairs: dict) -> TensorElement:
    """d(x (x) g) = x * (theta(g) - eps(g))."""
    swap = pres.conjugate_swap()
    dims = pres.generator_dims()
    acc: dict = {}
    for (w, g), c in pairs.items():
        if not c:
            continue
        w1 = tuple(w) + (swap[g],)
        s = acc.get(w1, 0) + c
        if s:
            acc[w1] = s
        else:
            acc.pop(w1, None)
        w0 = tuple(w)
        s = acc.get(w0, 0) - c * dims[g]
        if s:
            acc[w0] = s
        else:
            acc.pop(w0, None)
    out = TensorElement.__new__(TensorElement)
    out._terms = acc
    return out


def homotopy_section(value: int) -> TensorElement:
    """Section of the augmentation: an integer times the unit word."""
    return TensorElement({(): value})


def homotopy(pres: GroupPresentation, x: TensorElement) -> dict:
    """Z-linear contracting homotopy TV -> TV (x) V.

    On a word w*g it returns w (x) theta(g) + eps(g) * h(w), and 0 on the
    unit word.
    """
    swap = pres.conjugate_swap()
    dims = pres.generator_dims()
    acc: dict = {}

    def emit(word, gen, coeff):
        key = (word, gen)
        s = acc.get(key, 0) + coeff
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)

    for w, c in x.items():
        coeff = c
        rest = tuple(w)
        while rest:
            head, g = rest[:-1], rest[-1]
            emit(head, swap[g], coeff)
            coeff *= dims[g]
            rest = head
    return acc


@dataclass(frozen=True)
class ResolutionVerdict:
    """Outcome of the degreewise exactness check."""

    exact: bool
    max_degree: int
    checks: int
    witness: tuple | None = None
    message: str = ""

    def describe(self) -> str:
        if self.exact:
            return "exact up to degree %d (%d identities checked)" % (
                self.max_degree,
                self.checks,
            )
        return "resolution check failed on %r: %s" % (self.witness, self.message)


def words_up_to(pres: GroupPresentation, degree: int):
    names = pres.generator_names()
    out = [()]
    frontier = [()]
    for _ in range(degree):
        frontier = [w + (g,) for w in frontier for g in names]
        out.extend(frontier)
    return out


def resolution_check(pres: GroupPresentation, max_degree: int) -> ResolutionVerdict:
    """Verify d h(w) + section(eps(w)) = w on every basis word and
    h(d(w (x) g)) = w (x) g on every degree-one basis element, up to the
    degree bound.  These identities force degreewise exactness of the
    length-one resolution."""
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    names = pres.generator_names()
    checks = 0
    for w in words_up_to(pres, max_degree):
        x = TensorElement({w: 1})
        lhs = differential(pres, homotopy(pres, x)) + homotopy_section(
            augmentation(pres, x)
        )
        checks += 1
        if lhs != x:
            return ResolutionVerdict(
                exact=False,
                max_degree=max_degree,
                checks=checks,
                witness=w,
                message="d h + section eps is not the identity",
            )
    for w in words_up_to(pres, max_degree - 1):
        for g in names:
            elem = {(w, g): 1}
            back = homotopy(pres, differential(pres, elem))
            checks += 1
            if back != elem:
                return ResolutionVerdict(
                    exact=False,
                    max_degree=max_degree,
                    checks=checks,
                    witness=(w, g),
                    message="h d is not the identity on degree one",
                )
    return ResolutionVerdict(exact=True, max_degree=max_degree, checks=checks)
