"""GT-shadows over a fixed target subgroup and their groupoid operations.

A shadow with target N is a pair (m, f): m a residue mod N_ord with 2m+1 a
unit, f a commutator word in x, y taken mod N_F2, such that the two hexagon
relations hold mod N and the induced endomorphism

    T: sigma_1 -> sigma_1^(2m+1) N,  sigma_2 -> f^-1 sigma_2^(2m+1) f N

maps B3 onto B3/N.  The kernel of T is the shadow's source; composition and
inversion below make the collection of all shadows a groupoid over the poset
of targets.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

from .errors import (
    BraidRelationError,
    CandidateCapExceeded,
    InternalInconsistencyError,
    SourceTargetMismatchError,
)
from .perms import GenHom, Permutation, is_generating_set
from .subgroups import NfiSubgroup, new_nfi, nfi_equal
from .words import (
    C_WORD,
    SIGMA1,
    SIGMA2,
    TAG_B3,
    TAG_F2,
    Y,
    FreeWord,
    bullet_monoid,
    e_endo,
    embed_f2_in_b3,
    empty_word,
    require_commutator_form,
    tau,
    theta,
    word_to_text,
)

DEFAULT_CANDIDATE_CAP = 2_000_000


class GtShadow:
    """One morphism of the groupoid: source(s) -> target.

    f is carried in two forms: a literal commutator word over x, y (needed
    whenever f gets substituted into an endomorphism) and its image in
    F2/N_F2.  Two shadows are the same morphism iff their targets, m
    residues and f images agree; the word is just a representative.
    """

    __slots__ = ("target", "m", "f_word", "f_elt", "_source")

    def __init__(
        self,
        target: NfiSubgroup,
        m: int,
        f_word: FreeWord,
        f_elt: Permutation,
        source: NfiSubgroup | None = None,
    ):
        self.target = target
        self.m = m % target.data.n_ord
        self.f_word = f_word
        self.f_elt = f_elt
        self._source = source

    def key(self) -> tuple[int, Permutation]:
        """The pair that identifies the shadow among those with one target."""
        return (self.m, self.f_elt)

    def __eq__(self, other):
        return (
            isinstance(other, GtShadow)
            and self.target.content_id == other.target.content_id
            and self.m == other.m
            and self.f_elt == other.f_elt
        )

    def __hash__(self):
        return hash((self.target.content_id, self.m, self.f_elt))

    def __repr__(self):
        return (
            f"GtShadow(m={self.m}, f={word_to_text(self.f_word) or '1'}, "
            f"target={self.target.label})"
        )


def identity_shadow(N: NfiSubgroup) -> GtShadow:
    """The identity morphism at N: (0, empty word).  Its T is N.hom itself."""
    return GtShadow(N, 0, empty_word(TAG_F2), N.data.f2_quotient.identity, source=N)


def check_hexagons(N: NfiSubgroup, m: int, f: FreeWord) -> bool:
    """Both hexagon relations mod N, evaluated literally as braid words.

    sigma_1^(2m+1) f^-1 sigma_2^(2m+1) f  =  f^-1 sigma_1 sigma_2 x^-m c^m
    f^-1 sigma_2^(2m+1) f sigma_1^(2m+1)  =  sigma_2 sigma_1 y^-m c^m f
    """
    k = 2 * m + 1
    femb = embed_f2_in_b3(f)
    conj = femb.inv() * SIGMA2**k * femb
    x_w = SIGMA1 * SIGMA1
    y_w = SIGMA2 * SIGMA2
    lhs1 = SIGMA1**k * conj
    rhs1 = femb.inv() * SIGMA1 * SIGMA2 * x_w ** (-m) * C_WORD**m
    lhs2 = conj * SIGMA1**k
    rhs2 = SIGMA2 * SIGMA1 * y_w ** (-m) * C_WORD**m * femb
    ev = N.hom.evaluate
    return ev(lhs1) == ev(rhs1) and ev(lhs2) == ev(rhs2)


def check_simplified_hexagons(N: NfiSubgroup, m: int, f: FreeWord) -> bool:
    """The two-membership form, valid when f is a commutator word:

    f theta(f) in N_F2   and   tau^2(y^m f) tau(y^m f) y^m f in N_F2.
    """
    require_commutator_form(f)
    quotient = N.data.f2_quotient
    if not quotient.evaluate(f * theta(f)).is_identity():
        return False
    g = Y**m * f
    w = tau(tau(g)) * tau(g) * g
    return quotient.evaluate(w).is_identity()


def _t_f2_onto(N: NfiSubgroup, m: int, f: FreeWord) -> bool:
    """Do x^(2m+1) and f^-1 y^(2m+1) f generate F2/N_F2?

    Equivalent to T itself being onto B3/N, which is the cheaper thing to
    test because it avoids the six extra cosets.
    """
    d = N.data
    k = 2 * m + 1
    big_f = d.f2_quotient.evaluate(f)
    ex = d.x_image**k
    ey = big_f.inverse() * d.y_image**k * big_f
    return is_generating_set(d.f2_quotient, (ex, ey))


def is_shadow(N: NfiSubgroup, m: int, f: FreeWord) -> bool:
    """Full membership test: unit, commutator coset, hexagons, surjectivity."""
    d = N.data
    if math.gcd(2 * m + 1, d.n_ord) != 1:
        return False
    if d.f2_quotient.evaluate(f) not in d.f2_commutator:
        return False
    if not check_hexagons(N, m, f):
        return False
    return _t_f2_onto(N, m, f)


def t_hom(s: GtShadow) -> GenHom:
    """The homomorphism B3 -> B3/N attached to a shadow, as generator images.

    The braid relation is a theorem once the hexagons hold, so a violation
    here means the shadow was built outside the advertised constructors.
    The central element must land on its own (2m+1)-st power; that is
    asserted too.
    """
    g1, g2 = s.target.hom.images
    k = 2 * s.m + 1
    big_f = s.f_elt
    im1 = g1**k
    im2 = big_f.inverse() * g2**k * big_f
    try:
        hom = GenHom(TAG_B3, (im1, im2))
    except BraidRelationError as exc:
        raise InternalInconsistencyError(
            f"braid relation failed for T at {s!r}; hexagons must not hold"
        ) from exc
    delta_im = im1 * im2 * im1
    if delta_im * delta_im != s.target.data.c_image**k:
        raise InternalInconsistencyError(
            f"central element image is not c^{k} for {s!r}"
        )
    return hom


def shadow_source(s: GtShadow) -> NfiSubgroup:
    """ker(T), wrapped as a subgroup object; computed once and cached on s.

    A settled shadow (kernel equal to its target) gets the target object
    itself, so every morphism on one object lives in one realization and
    inverses stay comparable to the originals.
    """
    if s._source is None:
        f_text = word_to_text(s.f_word) or "1"
        if len(f_text) > 24:
            f_text = f_text[:21] + "..."
        raw = new_nfi(
            t_hom(s).images,
            label=f"{s.target.label}<-({s.m},{f_text})",
            max_group_size=s.target.max_group_size,
        )
        s._source = s.target if nfi_equal(raw, s.target) else raw
    return s._source


_GT_CACHE: dict[str, list[GtShadow]] = {}


def enumerate_shadows(
    N: NfiSubgroup,
    max_candidates: int = DEFAULT_CANDIDATE_CAP,
    threads: int = 1,
) -> list[GtShadow]:
    """All shadows with target N, in (m ascending, f discovery order).

    The candidate grid is {unit residues} x {commutator subgroup of
    F2/N_F2}; each candidate passes through the simplified hexagons and
    then the surjectivity test.  Results are memoized per target content.
    """
    cached = _GT_CACHE.get(N.content_id)
    if cached is not None:
        return list(cached)
    d = N.data
    units = [m for m in range(d.n_ord) if math.gcd(2 * m + 1, d.n_ord) == 1]
    total = len(units) * d.f2_commutator.order
    if total > max_candidates:
        raise CandidateCapExceeded(max_candidates, total)
    candidates = [
        (m, elt) for m in units for elt in d.f2_commutator.elements_in_order
    ]

    def accept(candidate: tuple[int, Permutation]) -> GtShadow | None:
        m, elt = candidate
        f_word = d.f2_commutator.word_of(elt)
        if not check_simplified_hexagons(N, m, f_word):
            return None
        if not _t_f2_onto(N, m, f_word):
            return None
        return GtShadow(N, m, f_word, elt)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(accept, candidates))
    else:
        results = [accept(c) for c in candidates]
    shadows = [s for s in results if s is not None]
    _GT_CACHE[N.content_id] = shadows
    return list(shadows)


def compose_shadows(s1: GtShadow, s2: GtShadow) -> GtShadow:
    """Groupoid composition: s2 followed by s1, defined when
    source(s1) = target(s2) as kernels.

    The underlying monoid law is (m1,f1)(m2,f2) =
    (2 m1 m2 + m1 + m2, f1 E_{m1,f1}(f2)), reduced mod the target data.
    """
    if not nfi_equal(shadow_source(s1), s2.target):
        raise SourceTargetMismatchError(
            f"cannot compose: source of {s1!r} differs from target of {s2!r}"
        )
    d = s1.target.data
    m, f_word = bullet_monoid(s1.m, s1.f_word, s2.m, s2.f_word)
    return GtShadow(s1.target, m % d.n_ord, f_word, d.f2_quotient.evaluate(f_word))


def invert_shadow(s: GtShadow) -> GtShadow:
    """The inverse morphism: target and source swap.

    m inverts through the odd-part formula (2m+1)(2m~+1) = 1 mod 2 N_ord,
    i.e. m~ = -(2m+1)^-1 m.  f~ comes from the bijection F2/K_F2 ->
    F2/N_F2 induced by E_{m,f}: tabulate it on every element and take the
    preimage of the inverse of f's image.
    """
    d = s.target.data
    k = 2 * s.m + 1
    try:
        k_inv = pow(k, -1, d.n_ord)
    except ValueError:
        raise ValueError(
            f"2m+1 = {k} is not a unit mod {d.n_ord}; not a valid shadow"
        ) from None
    m_inv = (-k_inv * s.m) % d.n_ord
    source = shadow_source(s)
    sd = source.data
    table: dict[Permutation, Permutation] = {}
    for elt in sd.f2_quotient.elements_in_order:
        word = sd.f2_quotient.word_of(elt)
        table[d.f2_quotient.evaluate(e_endo(s.m, s.f_word, word))] = elt
    if len(table) != d.f2_quotient.order or sd.f2_quotient.order != d.f2_quotient.order:
        raise InternalInconsistencyError(
            f"induced map on F2 cosets is not a bijection for {s!r}"
        )
    f_elt = table[s.f_elt.inverse()]
    try:
        f_word = sd.f2_commutator.word_of(f_elt)
    except KeyError:
        raise InternalInconsistencyError(
            f"inverse f-coset escaped the commutator subgroup for {s!r}"
        ) from None
    return GtShadow(source, m_inv, f_word, f_elt, source=s.target)
