import itertools
import math

import pytest

from braidshadow.errors import (
    BraidRelationError,
    InternalInconsistencyError,
    KernelNotInPb3Error,
)
from braidshadow.perms import GenHom, Permutation, block_sum, kernel_contained
from braidshadow.subgroups import (
    NfiSubgroup,
    catalog_search,
    content_id,
    from_f2_quotient,
    new_nfi,
    nfi_contains,
    nfi_equal,
    nfi_intersect,
    pb3_subgroup,
    quotient_data,
    rho,
)
from braidshadow.words import TAG_F2, X, Y, word_from_text


def test_rho_values():
    r = rho()
    assert r.images == (Permutation((1, 0, 2)), Permutation((0, 2, 1)))
    assert r.domain_tag == "B3"


def test_pb3_top_object(pb3):
    d = pb3.data
    assert d.n_ord == 1
    assert d.index_pb3 == 1
    assert d.index_f2 == 1
    assert d.b3_quotient.order == 6
    assert d.x_image.is_identity()
    assert d.c_image.is_identity()
    assert d.f2_commutator.order == 1


def test_new_nfi_rejects_bad_images():
    with pytest.raises(BraidRelationError):
        new_nfi((Permutation((1, 0, 2)), Permutation((1, 2, 0))))
    # sigma_1, sigma_2 -> same transposition: sigma_1 sigma_2^-1 is killed
    # but is not a pure braid
    with pytest.raises(KernelNotInPb3Error):
        new_nfi((Permutation((1, 0)), Permutation((1, 0))))


def test_new_nfi_auto_label():
    N = new_nfi(rho().images)
    assert N.label == f"N-{N.content_id[:8]}"
    assert new_nfi(rho().images, label="top").label == "top"


def test_content_id_tracks_realization():
    a = rho().images
    assert content_id(a) == content_id(a)
    b = (block_sum(Permutation((0,)), a[0]), block_sum(Permutation((0,)), a[1]))
    assert content_id(a) != content_id(b)


def test_quotient_structure_invariants(pb3, catalog4):
    for N in [pb3, *catalog4]:
        d = quotient_data(N)
        assert d.b3_quotient.order == 6 * d.index_pb3
        assert d.index_f2 == d.f2_quotient.order
        orders = (d.x_image.order(), d.y_image.order(), d.c_image.order())
        assert all(d.n_ord % k == 0 for k in orders)
        assert math.lcm(*orders) == d.n_ord
        assert d.index_pb3 % d.index_f2 == 0
        assert d.delta_image * d.delta_image == d.c_image
        for g in d.f2_quotient.elements_in_order:
            assert g in d.pb3_quotient
        for g in d.b3_quotient.generators:
            assert d.c_image * g == g * d.c_image
        assert d.index_f2 % d.f2_commutator.order == 0


def test_quotient_data_is_shared_between_equal_realizations():
    n1 = new_nfi(rho().images, label="one")
    n2 = new_nfi(rho().images, label="two")
    assert n1.data is n2.data
    assert n1 == n2  # realization equality
    assert hash(n1) == hash(n2)


def test_poset_relations(pb3, catalog4):
    for N in catalog4:
        assert nfi_contains(N, pb3)
    # cat00 comes from the trivial pair: same kernel as pb3, different realization
    assert nfi_equal(catalog4[0], pb3)
    assert catalog4[0].content_id != pb3.content_id
    assert catalog4[0] != pb3
    big = catalog4[-1]
    assert not nfi_equal(big, pb3)
    assert not nfi_contains(pb3, big)


def test_intersection(pb3, catalog4):
    a, b = catalog4[1], catalog4[-1]
    meet = nfi_intersect([a, b])
    assert meet.label == f"({a.label} & {b.label})"
    assert nfi_contains(meet, a)
    assert nfi_contains(meet, b)
    assert nfi_equal(nfi_intersect([a, a]), a)
    assert nfi_equal(nfi_intersect([a, pb3]), a)
    with pytest.raises(ValueError):
        nfi_intersect([])


def test_from_trivial_f2_quotient_is_pb3(pb3):
    one = Permutation((0,))
    N = from_f2_quotient((one, one))
    assert nfi_equal(N, pb3)
    assert N.label.startswith("core-")


def test_from_f2_quotient_s2():
    swap = Permutation((1, 0))
    psi = GenHom(TAG_F2, (swap, swap))
    N = from_f2_quotient((swap, swap), label="mod2")
    # the construction's contract: N_F2 lands inside ker(psi), and c dies
    assert kernel_contained(N.f2_hom(), psi)
    assert N.data.c_image.is_identity()
    # x itself is not killed, so the containment is strict
    assert not N.evaluate_f2(X).is_identity()
    assert N.evaluate_f2(X * X).is_identity() == psi.evaluate(X * X).is_identity()


def test_from_f2_quotient_word_consistency():
    # psi factors through the core subgroup: equal words in F2/N_F2 have
    # equal psi-values
    c3 = Permutation((1, 2, 0))
    psi = GenHom(TAG_F2, (c3, c3 * c3))
    N = from_f2_quotient((c3, c3 * c3))
    seen = {}
    for text in ("", "x", "y", "xy", "xY", "xxx", "yyx", "XYxy"):
        w = word_from_text(text, TAG_F2)
        key = N.evaluate_f2(w)
        val = psi.evaluate(w)
        assert seen.setdefault(key, val) == val


# ---------------------------------------------------------------------------
# catalog search

def test_catalog_regression(catalog4):
    rows = [
        (N.label, N.degree, N.data.index_pb3, N.data.index_f2, N.data.n_ord)
        for N in catalog4
    ]
    assert rows == [
        ("cat00", 4, 1, 1, 1),
        ("cat01", 7, 2, 2, 2),
        ("cat02", 6, 3, 3, 3),
        ("cat03", 7, 4, 4, 2),
        ("cat04", 7, 12, 12, 3),
    ]


def test_catalog_entries_are_distinct_kernels(catalog4):
    for a, b in itertools.combinations(catalog4, 2):
        assert not nfi_equal(a, b)


def test_catalog_bounds():
    with pytest.raises(ValueError):
        catalog_search(0)
    with pytest.raises(ValueError):
        catalog_search(7)


def test_catalog_thread_count_is_invisible():
    seq = catalog_search(3, threads=1)
    par = catalog_search(3, threads=2)
    assert [n.content_id for n in seq] == [n.content_id for n in par]
    assert [n.label for n in seq] == [n.label for n in par]


def test_catalog_three_is_complete():
    # independent scan: every braid pair on <= 3 strands, no cycle-type
    # shortcut, must land on a catalog kernel
    cat3 = catalog_search(3)
    assert len(cat3) == 2
    r1, r2 = rho().images
    found = 0
    for degree in (1, 2, 3):
        perms = [Permutation(t) for t in itertools.permutations(range(degree))]
        for p, q in itertools.product(perms, repeat=2):
            if p * q * p != q * p * q:
                continue
            found += 1
            N = new_nfi((block_sum(p, r1), block_sum(q, r2)))
            assert any(nfi_equal(N, entry) for entry in cat3)
    assert found > len(cat3)


def test_b3_quotient_order_against_saturation_oracle(catalog4):
    # multiply the whole set by itself until it stops growing; no BFS, no
    # word table, just raw closure
    gens = list(catalog4[2].hom.images)
    current = set(gens) | {gens[0].inverse(), gens[1].inverse()}
    while True:
        grown = current | {a * b for a in current for b in current}
        if grown == current:
            break
        current = grown
    assert len(current) == catalog4[2].data.b3_quotient.order


def test_internal_consistency_guard_is_wired():
    # NfiSubgroup built directly (no new_nfi validation) with a kernel that
    # leaks outside PB3 trips the bookkeeping check
    swap = Permutation((1, 0))
    bad = NfiSubgroup(GenHom("B3", (swap, swap)), label="bad")
    with pytest.raises(InternalInconsistencyError):
        bad.data
