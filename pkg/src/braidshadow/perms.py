"""Finite permutation group machinery built from scratch.

Desk-scale philosophy: every group that shows up (quotients B3/N, PB3/N,
F2/N_F2 and friends) is small enough to enumerate outright, so there are no
stabilizer chains, just breadth-first closures with deterministic word
tables, and a kernel-containment test that never materializes a kernel.

Composition convention (used everywhere, including word evaluation): the
product ``p * q`` means "apply p first, then q".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    BraidRelationError,
    DegreeMismatchError,
    DomainTagMismatchError,
    GroupSizeCapExceeded,
)
from .words import FreeWord, empty_word

DEFAULT_GROUP_SIZE_CAP = 100_000


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0..n-1}, stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a bijection of 0..{len(self.images) - 1}: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @staticmethod
    def identity(degree: int) -> "Permutation":
        return Permutation(tuple(range(degree)))

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise DegreeMismatchError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )
        o = other.images
        return Permutation(tuple(o[i] for i in self.images))

    def inverse(self) -> "Permutation":
        out = [0] * self.degree
        for i, j in enumerate(self.images):
            out[j] = i
        return Permutation(tuple(out))

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycle_lengths(self) -> list[int]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            n, i = 0, start
            while not seen[i]:
                seen[i] = True
                i = self.images[i]
                n += 1
            out.append(n)
        return out

    def order(self) -> int:
        return math.lcm(*self.cycle_lengths())


def perm_compose(p: Permutation, q: Permutation) -> Permutation:
    """Product under the fixed convention: apply p first, then q."""
    return p * q


def perm_order(p: Permutation) -> int:
    return p.order()


def block_sum(*perms: Permutation) -> Permutation:
    """Act on the disjoint union of the domains, block by block."""
    images: list[int] = []
    offset = 0
    for p in perms:
        images.extend(i + offset for i in p.images)
        offset += p.degree
    return Permutation(tuple(images))


class GeneratedGroup:
    """A fully enumerated permutation group with a deterministic word table.

    ``elements_in_order`` lists elements in BFS discovery order: words sorted
    by length, ties broken by generator index then left to right.  ``words``
    maps each element to a FreeWord over ``word_basis`` (== the generators,
    except for commutator subgroups, whose words are spelled over the parent
    group's alphabet so that they are literal commutator-subgroup words).
    """

    def __init__(
        self,
        generators: Sequence[Permutation],
        tag: str,
        elements_in_order: list[Permutation],
        words: dict[Permutation, FreeWord],
        word_basis: Sequence[Permutation] | None = None,
    ):
        self.generators = tuple(generators)
        self.tag = tag
        self.elements_in_order = elements_in_order
        self.words = words
        self.word_basis = tuple(word_basis) if word_basis is not None else self.generators
        self.order = len(elements_in_order)
        self._index = {p: i for i, p in enumerate(elements_in_order)}

    @property
    def elements(self) -> set[Permutation]:
        return set(self._index)

    @property
    def degree(self) -> int:
        return self.generators[0].degree

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __contains__(self, p: Permutation) -> bool:
        return p in self._index

    def index_of(self, p: Permutation) -> int:
        return self._index[p]

    def word_of(self, p: Permutation) -> FreeWord:
        return self.words[p]

    def evaluate(self, w: FreeWord) -> Permutation:
        return evaluate_word(w, self.word_basis)


def evaluate_word(w: FreeWord, images: Sequence[Permutation]) -> Permutation:
    """Evaluate a word over the given generator images (left to right)."""
    inverses = [p.inverse() for p in images]
    out = Permutation.identity(images[0].degree)
    for g, s in w.letters:
        out = out * (images[g] if s > 0 else inverses[g])
    return out


def generate_group(
    gens: Sequence[Permutation],
    tag: str = "GEN",
    max_size: int = DEFAULT_GROUP_SIZE_CAP,
    word_basis: Sequence[Permutation] | None = None,
    seed_words: Sequence[FreeWord] | None = None,
) -> GeneratedGroup:
    """Breadth-first closure of the generators with word tracking.

    Positive products suffice to close a finite group, so words use positive
    letters only (unless explicit ``seed_words`` carry inverses).  The BFS
    order makes the element list and word table reproducible across runs.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise DegreeMismatchError("generators must share a degree")
    if seed_words is None:
        seed_words = [FreeWord(tag, ((i, 1),)) for i in range(len(gens))]
    identity = Permutation.identity(degree)
    words: dict[Permutation, FreeWord] = {identity: empty_word(tag)}
    elements = [identity]
    cursor = 0
    while cursor < len(elements):
        current = elements[cursor]
        cursor += 1
        for gen, gen_word in zip(gens, seed_words):
            product = current * gen
            if product not in words:
                words[product] = words[current] * gen_word
                elements.append(product)
                if len(elements) > max_size:
                    raise GroupSizeCapExceeded(max_size, len(elements))
    return GeneratedGroup(gens, tag, elements, words, word_basis=word_basis)


def closure_order(gens: Sequence[Permutation], max_size: int = DEFAULT_GROUP_SIZE_CAP) -> int:
    """|<gens>| without the word table (cheaper inner loop)."""
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise DegreeMismatchError("generators must share a degree")
    identity = Permutation.identity(degree)
    seen = {identity}
    frontier = [identity]
    while frontier:
        new: list[Permutation] = []
        for current in frontier:
            for gen in gens:
                product = current * gen
                if product not in seen:
                    seen.add(product)
                    if len(seen) > max_size:
                        raise GroupSizeCapExceeded(max_size, len(seen))
                    new.append(product)
        frontier = new
    return len(seen)


def commutator_subgroup(
    G: GeneratedGroup, max_size: int = DEFAULT_GROUP_SIZE_CAP
) -> GeneratedGroup:
    """[G,G] as the normal closure of the generator commutators.

    Seed elements are g [a_i, a_j]^(+-1) g^-1 for g over all of G, so every
    word representative is a literal product of conjugated commutators; in
    particular all exponent sums vanish, which is what "lies in [F2,F2]"
    means when G is a two-generator quotient of F2.
    """
    seeds: list[Permutation] = []
    seed_words: list[FreeWord] = []
    seen: set[Permutation] = set()
    k = len(G.generators)
    base_letters = [FreeWord(G.tag, ((i, 1),)) for i in range(k)]
    for g in G.elements_in_order:
        g_word = G.words[g]
        g_inv = g.inverse()
        for i in range(k):
            for j in range(i + 1, k):
                a, b = G.generators[i], G.generators[j]
                comm = a * b * a.inverse() * b.inverse()
                comm_word = (
                    base_letters[i]
                    * base_letters[j]
                    * base_letters[i].inv()
                    * base_letters[j].inv()
                )
                for perm, w in (
                    (comm, comm_word),
                    (comm.inverse(), comm_word.inv()),
                ):
                    conj = g * perm * g_inv
                    if conj.is_identity() or conj in seen:
                        continue
                    seen.add(conj)
                    seeds.append(conj)
                    seed_words.append(g_word * w * g_word.inv())
    if not seeds:
        identity = G.identity
        return GeneratedGroup(
            [identity],
            G.tag,
            [identity],
            {identity: empty_word(G.tag)},
            word_basis=G.word_basis,
        )
    return generate_group(
        seeds,
        tag=G.tag,
        max_size=max_size,
        word_basis=G.word_basis,
        seed_words=seed_words,
    )


@dataclass(frozen=True)
class GenHom:
    """A homomorphism from B3, F2 or PB3 given by generator images.

    domain_tag "B3": images of (sigma_1, sigma_2), which must satisfy the
    braid relation.  "F2": images of (x, y), no relation.  "PB3": images of
    (x12, x23, c), where c's image must be central among them.
    """

    domain_tag: str
    images: tuple[Permutation, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        degree = self.images[0].degree
        if any(p.degree != degree for p in self.images):
            raise DegreeMismatchError("homomorphism images must share a degree")
        if self.domain_tag == "B3":
            if len(self.images) != 2:
                raise ValueError("B3 homomorphism needs images of sigma_1, sigma_2")
            g1, g2 = self.images
            if g1 * g2 * g1 != g2 * g1 * g2:
                raise BraidRelationError(
                    "braid relation violated: g1 g2 g1 != g2 g1 g2"
                )
        elif self.domain_tag == "F2":
            if len(self.images) != 2:
                raise ValueError("F2 homomorphism needs images of x, y")
        elif self.domain_tag == "PB3":
            if len(self.images) != 3:
                raise ValueError("PB3 homomorphism needs images of x12, x23, c")
            xg, yg, cg = self.images
            if cg * xg != xg * cg or cg * yg != yg * cg:
                raise ValueError("image of c must commute with the other images")
        else:
            raise ValueError(f"unknown domain tag {self.domain_tag!r}")

    @property
    def degree(self) -> int:
        return self.images[0].degree

    def evaluate(self, w: FreeWord) -> Permutation:
        return evaluate_word(w, self.images)


@lru_cache(maxsize=65536)
def _image_order(images: tuple[Permutation, ...], max_size: int) -> int:
    return closure_order(images, max_size=max_size)


def kernel_contained(
    hom1: GenHom, hom2: GenHom, max_size: int = DEFAULT_GROUP_SIZE_CAP
) -> bool:
    """True iff ker(hom1) <= ker(hom2), without enumerating either kernel.

    The pairing trick: the projection im(hom1 x hom2) -> im(hom1) is always
    onto, and it is injective exactly when every word killed by hom1 is
    killed by hom2.  So the kernels nest iff the paired image is no bigger
    than im(hom1).
    """
    if hom1.domain_tag != hom2.domain_tag:
        raise DomainTagMismatchError(
            f"domain mismatch: {hom1.domain_tag} vs {hom2.domain_tag}"
        )
    paired = tuple(block_sum(p, q) for p, q in zip(hom1.images, hom2.images))
    return _image_order(paired, max_size) == _image_order(hom1.images, max_size)


def kernels_equal(
    hom1: GenHom, hom2: GenHom, max_size: int = DEFAULT_GROUP_SIZE_CAP
) -> bool:
    """ker(hom1) == ker(hom2); one paired closure instead of two."""
    if hom1.domain_tag != hom2.domain_tag:
        raise DomainTagMismatchError(
            f"domain mismatch: {hom1.domain_tag} vs {hom2.domain_tag}"
        )
    paired = tuple(block_sum(p, q) for p, q in zip(hom1.images, hom2.images))
    paired_order = _image_order(paired, max_size)
    return paired_order == _image_order(
        hom1.images, max_size
    ) and paired_order == _image_order(hom2.images, max_size)


def is_generating_set(G: GeneratedGroup, elems: Iterable[Permutation]) -> bool:
    """True iff the given elements of G generate all of it."""
    elems = list(elems)
    for p in elems:
        if p not in G:
            raise ValueError(f"element {p.images} is not in the group")
    if not elems:
        return G.order == 1
    return closure_order(elems, max_size=G.order) == G.order
