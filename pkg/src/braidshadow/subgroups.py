"""Finite-index normal subgroups N of B3 with N <= PB3.

A subgroup is always stored as the kernel of an explicit homomorphism
B3 -> (finite permutation group), given by the images of sigma_1 and
sigma_2.  That makes equality and containment decidable by the paired-image
trick, at the cost of the permutation realization being non-canonical: the
same kernel may appear with different degrees.  ``content_id`` hashes the
realization, not the kernel.
"""

from __future__ import annotations

import itertools
import json
import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import InternalInconsistencyError, KernelNotInPb3Error
from .perms import (
    DEFAULT_GROUP_SIZE_CAP,
    GeneratedGroup,
    GenHom,
    Permutation,
    block_sum,
    commutator_subgroup,
    generate_group,
    kernel_contained,
    kernels_equal,
)
from .words import (
    TAG_B3,
    TAG_F2,
    TAG_PB3,
    TRANSVERSAL_LABELS,
    TRANSVERSAL_WORDS,
    FreeWord,
    b3_normal_form,
    letter,
)

DEFAULT_CATALOG_DEGREE_LIMIT = 6


def rho() -> GenHom:
    """The projection B3 -> S3: sigma_1 -> (0 1), sigma_2 -> (1 2)."""
    return GenHom(TAG_B3, (Permutation((1, 0, 2)), Permutation((0, 2, 1))))


def content_id(images: tuple[Permutation, Permutation]) -> str:
    payload = json.dumps([list(p.images) for p in images])
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class QuotientData:
    """Everything derived from one subgroup's quotient B3/N.

    ``f2_quotient`` is generated by the images of x = sigma_1^2 and
    y = sigma_2^2 with words over {x, y}; ``f2_commutator`` is its commutator
    subgroup with words that are literal products of conjugated commutators
    (still over {x, y}).
    """

    b3_quotient: GeneratedGroup
    pb3_quotient: GeneratedGroup
    f2_quotient: GeneratedGroup
    f2_commutator: GeneratedGroup
    n_ord: int
    index_pb3: int
    index_f2: int
    x_image: Permutation
    y_image: Permutation
    c_image: Permutation
    delta_image: Permutation


class NfiSubgroup:
    """An element of the poset of finite-index normal subgroups inside PB3.

    Equality and hashing compare the stored *realization* (degree and
    generator images); use :func:`nfi_equal` for kernel equality.
    """

    def __init__(self, hom: GenHom, label: str, max_group_size: int = DEFAULT_GROUP_SIZE_CAP):
        self.hom = hom
        self.label = label
        self.max_group_size = max_group_size
        self.content_id = content_id(hom.images)
        self._data: QuotientData | None = None

    @property
    def degree(self) -> int:
        return self.hom.degree

    @property
    def data(self) -> QuotientData:
        if self._data is None:
            self._data = _quotient_data_cached(self.hom, self.max_group_size)
        return self._data

    def f2_hom(self) -> GenHom:
        """The restriction to F2: images of x and y."""
        g1, g2 = self.hom.images
        return GenHom(TAG_F2, (g1 * g1, g2 * g2))

    def pb3_hom(self) -> GenHom:
        """The restriction to PB3: images of x12, x23 and c."""
        d = self.data
        return GenHom(TAG_PB3, (d.x_image, d.y_image, d.c_image))

    def evaluate_f2(self, w: FreeWord) -> Permutation:
        """Image of an F2 word in the quotient F2/N_F2."""
        return self.data.f2_quotient.evaluate(w)

    def __repr__(self):
        return f"NfiSubgroup({self.label!r}, degree={self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, NfiSubgroup) and self.hom.images == other.hom.images
        )

    def __hash__(self):
        return hash(self.hom.images)


_DATA_CACHE: dict[tuple[GenHom, int], QuotientData] = {}


def _quotient_data_cached(hom: GenHom, max_size: int) -> QuotientData:
    key = (hom, max_size)
    if key not in _DATA_CACHE:
        _DATA_CACHE[key] = _compute_quotient_data(hom, max_size)
    return _DATA_CACHE[key]


def _compute_quotient_data(hom: GenHom, max_size: int) -> QuotientData:
    g1, g2 = hom.images
    xbar = g1 * g1
    ybar = g2 * g2
    delta = g1 * g2 * g1
    cbar = delta * delta
    b3_quotient = generate_group([g1, g2], tag=TAG_B3, max_size=max_size)
    pb3_quotient = generate_group([xbar, ybar, cbar], tag=TAG_PB3, max_size=max_size)
    f2_quotient = generate_group([xbar, ybar], tag=TAG_F2, max_size=max_size)
    f2_comm = commutator_subgroup(f2_quotient, max_size=max_size)
    n_ord = math.lcm(xbar.order(), ybar.order(), cbar.order())
    data = QuotientData(
        b3_quotient=b3_quotient,
        pb3_quotient=pb3_quotient,
        f2_quotient=f2_quotient,
        f2_commutator=f2_comm,
        n_ord=n_ord,
        index_pb3=pb3_quotient.order,
        index_f2=f2_quotient.order,
        x_image=xbar,
        y_image=ybar,
        c_image=cbar,
        delta_image=delta,
    )
    # ker <= PB3 forces the S3 quotient to survive whole.
    if b3_quotient.order != 6 * pb3_quotient.order:
        raise InternalInconsistencyError(
            "quotient bookkeeping broken: |B3/N| != 6 |PB3/N| "
            f"({b3_quotient.order} vs 6*{pb3_quotient.order})"
        )
    if any(p not in pb3_quotient for p in f2_quotient.elements_in_order):
        raise InternalInconsistencyError("F2/N_F2 escaped PB3/N")
    return data


def new_nfi(
    images: tuple[Permutation, Permutation],
    label: str = "",
    max_group_size: int = DEFAULT_GROUP_SIZE_CAP,
) -> NfiSubgroup:
    """Validate generator images and wrap them as a subgroup-by-kernel.

    Raises BraidRelationError if the braid relation fails and
    KernelNotInPb3Error if the kernel is not contained in ker(rho) = PB3.
    """
    hom = GenHom(TAG_B3, tuple(images))
    if not kernel_contained(hom, rho(), max_size=max_group_size):
        raise KernelNotInPb3Error(
            f"kernel of {label or 'homomorphism'} is not contained in PB3"
        )
    if not label:
        label = f"N-{content_id(hom.images)[:8]}"
    return NfiSubgroup(hom, label, max_group_size=max_group_size)


def pb3_subgroup() -> NfiSubgroup:
    """The top object N = PB3, realized as ker(rho)."""
    return new_nfi(rho().images, label="pb3")


def quotient_data(N: NfiSubgroup) -> QuotientData:
    return N.data


def nfi_contains(N: NfiSubgroup, H: NfiSubgroup) -> bool:
    """True iff N <= H as subgroups of B3."""
    return kernel_contained(N.hom, H.hom, max_size=max(N.max_group_size, H.max_group_size))


def nfi_equal(N: NfiSubgroup, K: NfiSubgroup) -> bool:
    """True iff N and K are the same kernel (mutual containment)."""
    return kernels_equal(N.hom, K.hom, max_size=max(N.max_group_size, K.max_group_size))


def nfi_intersect(
    subgroups: list[NfiSubgroup],
    label: str = "",
    max_group_size: int | None = None,
) -> NfiSubgroup:
    """Intersection of kernels: the block-diagonal homomorphism."""
    if not subgroups:
        raise ValueError("nfi_intersect needs at least one subgroup")
    cap = max_group_size or max(s.max_group_size for s in subgroups)
    g1 = block_sum(*(s.hom.images[0] for s in subgroups))
    g2 = block_sum(*(s.hom.images[1] for s in subgroups))
    if not label:
        label = "(" + " & ".join(s.label for s in subgroups) + ")"
    return new_nfi((g1, g2), label=label, max_group_size=cap)


# ---------------------------------------------------------------------------
# the subgroup attached to a finite quotient of F2

# t_s * sigma_i in normal form, for each transversal label s and i in {0,1}:
# (F2 word, new label).  The c-exponent is irrelevant here because the
# construction kills c.
_COSET_STEP: dict[tuple[str, int], tuple[FreeWord, str]] = {}
for _label, _i in itertools.product(TRANSVERSAL_LABELS, (0, 1)):
    _nf = b3_normal_form(TRANSVERSAL_WORDS[_label] * letter(TAG_B3, _i))
    _COSET_STEP[(_label, _i)] = (_nf.f2_part, _nf.coset_index)


def from_f2_quotient(
    psi_images: tuple[Permutation, Permutation],
    label: str = "",
    max_group_size: int = DEFAULT_GROUP_SIZE_CAP,
) -> NfiSubgroup:
    """The normal core of ker(psi-tilde), for psi: F2 -> finite group.

    psi extends to psi-tilde: PB3 -> im(psi) by x12 -> psi(x), x23 -> psi(y),
    c -> 1.  B3 then acts on the cosets of ker(psi-tilde); cosets are pairs
    (element of im(psi), transversal label), and one sigma-generator moves a
    pair by the normal form of (transversal word) * sigma_i.  The kernel of
    that action is the normal core, a finite-index normal subgroup of B3
    inside PB3 whose F2-part is contained in ker(psi).
    """
    psi = GenHom(TAG_F2, tuple(psi_images))
    image_group = generate_group(list(psi.images), tag=TAG_F2, max_size=max_group_size)
    n = image_group.order
    n_labels = len(TRANSVERSAL_LABELS)
    label_pos = {lab: k for k, lab in enumerate(TRANSVERSAL_LABELS)}

    def action(i: int) -> Permutation:
        images = [0] * (n * n_labels)
        for s_idx, s_label in enumerate(TRANSVERSAL_LABELS):
            word, new_label = _COSET_STEP[(s_label, i)]
            move = image_group.evaluate(word)
            for g_idx, g in enumerate(image_group.elements_in_order):
                point = g_idx * n_labels + s_idx
                images[point] = (
                    image_group.index_of(g * move) * n_labels + label_pos[new_label]
                )
        return Permutation(tuple(images))

    if not label:
        label = f"core-{content_id(tuple(psi.images))[:8]}"
    return new_nfi((action(0), action(1)), label=label, max_group_size=max_group_size)


# ---------------------------------------------------------------------------
# catalog search

def _braid_pairs(degree: int):
    """All (p, q) in S_degree^2 with p q p = q p q, in lexicographic order.

    p q p = q p q forces q = (pq) p (pq)^-1, so the two sides of a braid
    pair are conjugate; checking only same-cycle-type pairs cuts the grid
    roughly sevenfold at degree 6 without losing anything.
    """
    perms = [Permutation(t) for t in itertools.permutations(range(degree))]
    by_type: dict[tuple[int, ...], list[Permutation]] = {}
    types = []
    for p in perms:
        t = tuple(sorted(p.cycle_lengths()))
        by_type.setdefault(t, []).append(p)
        types.append(t)
    for p, t in zip(perms, types):
        for q in by_type[t]:
            if p * q * p == q * p * q:
                yield p, q


def catalog_search(
    max_degree: int,
    degree_limit: int = DEFAULT_CATALOG_DEGREE_LIMIT,
    max_group_size: int = DEFAULT_GROUP_SIZE_CAP,
    threads: int = 1,
) -> list[NfiSubgroup]:
    """Distinct kernels from braid-relation pairs of degree <= max_degree.

    Every pair is adjoined to rho on three extra points, which forces the
    kernel into PB3 by construction.  Deduplication buckets by the cheap
    invariants (index_pb3, n_ord, index_f2) before paying for kernel
    equality.  Output is sorted by (index_pb3, content_id) and relabeled
    cat00, cat01, ... so repeated runs agree byte for byte.
    """
    if max_degree < 1 or max_degree > degree_limit:
        raise ValueError(
            f"max_degree must be in 1..{degree_limit}, got {max_degree}"
        )
    r1, r2 = rho().images

    def build(pair: tuple[Permutation, Permutation]) -> NfiSubgroup:
        p, q = pair
        return new_nfi(
            (block_sum(p, r1), block_sum(q, r2)),
            label=f"tmp-{p.images}-{q.images}",
            max_group_size=max_group_size,
        )

    candidates: list[NfiSubgroup] = []
    for degree in range(1, max_degree + 1):
        pairs = list(_braid_pairs(degree))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                candidates.extend(pool.map(build, pairs))
        else:
            candidates.extend(build(pair) for pair in pairs)

    buckets: dict[tuple[int, int, int], list[NfiSubgroup]] = {}
    kept: list[NfiSubgroup] = []
    for cand in candidates:
        d = cand.data
        key = (d.index_pb3, d.n_ord, d.index_f2)
        bucket = buckets.setdefault(key, [])
        if any(nfi_equal(cand, existing) for existing in bucket):
            continue
        bucket.append(cand)
        kept.append(cand)

    kept.sort(key=lambda s: (s.data.index_pb3, s.content_id))
    out = []
    for i, entry in enumerate(kept):
        relabeled = NfiSubgroup(entry.hom, f"cat{i:02d}", max_group_size=max_group_size)
        relabeled._data = entry._data
        out.append(relabeled)
    return out
