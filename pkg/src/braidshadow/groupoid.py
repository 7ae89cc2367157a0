"""Global structure of the shadow groupoid.

Connected components, isolated objects, the diamond (intersection of a
component), reduction maps between comparable targets, survival, the
finite-depth fake-shadow search, and limits of reduction diagrams over a
finite poset of isolated objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BraidshadowError, InternalInconsistencyError, NotContainedError
from .subgroups import NfiSubgroup, nfi_contains, nfi_equal, nfi_intersect
from .shadows import GtShadow, enumerate_shadows, shadow_source


@dataclass
class ComponentReport:
    """A connected component: objects, all morphisms, and its intersection.

    ``morphisms[(i, j)]`` lists the shadows with source ``objects[i]`` and
    target ``objects[j]``.  Object indices follow discovery order (the
    starting object is index 0).
    """

    objects: list[NfiSubgroup]
    morphisms: dict[tuple[int, int], list[GtShadow]]
    isolated: bool
    diamond: NfiSubgroup


def connected_component(
    N: NfiSubgroup, max_candidates: int | None = None, threads: int = 1
) -> ComponentReport:
    """Breadth-first closure of {N} under "is the source of a shadow of".

    Every morphism is invertible, so following sources alone reaches the
    whole component.  New objects are compared against known ones by cheap
    invariants first, then by kernel equality.
    """
    kwargs = {} if max_candidates is None else {"max_candidates": max_candidates}
    objects = [N]
    first = N.data
    morphisms: dict[tuple[int, int], list[GtShadow]] = {}

    def find_or_add(candidate: NfiSubgroup) -> int:
        d = candidate.data
        if (d.index_pb3, d.index_f2, d.n_ord) != (
            first.index_pb3,
            first.index_f2,
            first.n_ord,
        ):
            raise InternalInconsistencyError(
                f"component object {candidate.label} disagrees with "
                f"{N.label} on (index_pb3, index_f2, n_ord)"
            )
        for i, known in enumerate(objects):
            if nfi_equal(candidate, known):
                return i
        objects.append(candidate)
        return len(objects) - 1

    cursor = 0
    while cursor < len(objects):
        target = objects[cursor]
        for s in enumerate_shadows(target, threads=threads, **kwargs):
            src_idx = find_or_add(shadow_source(s))
            morphisms.setdefault((src_idx, cursor), []).append(s)
        cursor += 1

    running = objects[0]
    for obj in objects[1:]:
        if nfi_contains(running, obj):
            continue
        running = nfi_intersect([running, obj])
    for obj in objects:
        if not nfi_contains(running, obj):
            raise InternalInconsistencyError(
                "component intersection is not below every object"
            )
    return ComponentReport(
        objects=objects,
        morphisms=morphisms,
        isolated=len(objects) == 1,
        diamond=running,
    )


def is_isolated(N: NfiSubgroup, threads: int = 1) -> bool:
    """True iff every shadow with target N is settled (source = target)."""
    return all(
        nfi_equal(shadow_source(s), N) for s in enumerate_shadows(N, threads=threads)
    )


def diamond(N: NfiSubgroup, threads: int = 1) -> NfiSubgroup:
    """Intersection of all objects in N's component; always isolated.

    Both halves of the contract are rechecked before returning: the result
    is contained in N and its own shadows are all settled.
    """
    report = connected_component(N, threads=threads)
    result = report.diamond
    if not nfi_contains(result, N):
        raise InternalInconsistencyError("diamond is not contained in N")
    if not is_isolated(result, threads=threads):
        raise InternalInconsistencyError("diamond failed the isolation recheck")
    return result


def reduce_shadow(s: GtShadow, H: NfiSubgroup) -> GtShadow:
    """Reinterpret a shadow with target N as one with target H, for N <= H.

    The morphism data only shrinks: m mod H_ord and the f-coset in H's
    smaller quotient.  H_ord divides N_ord whenever N <= H, which is
    rechecked here.
    """
    if not nfi_contains(s.target, H):
        raise NotContainedError(
            f"cannot reduce: {s.target.label} is not contained in {H.label}"
        )
    h_ord = H.data.n_ord
    if s.target.data.n_ord % h_ord != 0:
        raise InternalInconsistencyError(
            f"{H.label}_ord does not divide {s.target.label}_ord"
        )
    return GtShadow(H, s.m % h_ord, s.f_word, H.data.f2_quotient.evaluate(s.f_word))


def survives(s: GtShadow, N: NfiSubgroup, threads: int = 1) -> bool:
    """Does s (target H) lie in the image of GT(N) under reduction to H?

    Brute force: reduce every shadow of N and look for s.
    """
    if not nfi_contains(N, s.target):
        raise NotContainedError(
            f"{N.label} is not contained in {s.target.label}; "
            "survival is only defined downward"
        )
    return any(
        reduce_shadow(t, s.target) == s for t in enumerate_shadows(N, threads=threads)
    )


@dataclass
class Verdict:
    """Outcome of the finite-depth genuineness check.

    kind "fake" carries a witness subgroup and the full reduce-image of its
    shadow set (which the tested shadow is absent from); that pair is an
    independently checkable certificate.  kind "not_fake_to_depth" only
    says the listed subgroups failed to expose the shadow.
    """

    kind: str
    checked: list[NfiSubgroup] = field(default_factory=list)
    witness: NfiSubgroup | None = None
    reduce_image: list[GtShadow] | None = None


def genuine_to_depth(
    s: GtShadow, catalog: list[NfiSubgroup], threads: int = 1
) -> Verdict:
    """Search the catalog for a certificate that s is fake.

    Only entries below s.target are applicable.  A genuine shadow survives
    into every finer subgroup, so failing to survive into one proves
    fakeness; surviving everywhere proves nothing beyond the listed depth,
    and the verdict says so.
    """
    checked: list[NfiSubgroup] = []
    for entry in catalog:
        if not nfi_contains(entry, s.target):
            continue
        image = [
            reduce_shadow(t, s.target)
            for t in enumerate_shadows(entry, threads=threads)
        ]
        if s not in image:
            return Verdict(
                kind="fake", checked=checked + [entry], witness=entry,
                reduce_image=image,
            )
        checked.append(entry)
    return Verdict(kind="not_fake_to_depth", checked=checked)


@dataclass
class MainLineDiagram:
    """Reduction diagram over a finite poset of isolated objects.

    ``edges[(i, j)]`` is the reduction table GT(objects[i]) ->
    GT(objects[j]) for each comparable pair objects[i] <= objects[j]; on
    isolated objects each GT is a group and each table a homomorphism.
    """

    poset_objects: list[NfiSubgroup]
    groups: dict[int, list[GtShadow]]
    edges: dict[tuple[int, int], dict[GtShadow, GtShadow]]


def main_line_limit(
    catalog: list[NfiSubgroup], threads: int = 1
) -> tuple[MainLineDiagram, list[tuple[GtShadow, ...]]]:
    """Build the reduction diagram on the catalog and compute its limit.

    The limit is the set of tuples (one shadow per object) compatible with
    every edge table; under componentwise composition it is a group.  Found
    by depth-first assignment with edge pruning, objects in a fixed
    deterministic order.
    """
    for entry in catalog:
        if not is_isolated(entry, threads=threads):
            raise BraidshadowError(
                f"main line requires isolated objects; {entry.label} is not"
            )
    order = sorted(
        range(len(catalog)),
        key=lambda i: (catalog[i].data.index_pb3, catalog[i].content_id),
    )
    objects = [catalog[i] for i in order]
    groups = {
        i: enumerate_shadows(obj, threads=threads) for i, obj in enumerate(objects)
    }
    edges: dict[tuple[int, int], dict[GtShadow, GtShadow]] = {}
    for i, finer in enumerate(objects):
        for j, coarser in enumerate(objects):
            if i == j or not nfi_contains(finer, coarser):
                continue
            edges[(i, j)] = {s: reduce_shadow(s, coarser) for s in groups[i]}
    diagram = MainLineDiagram(poset_objects=objects, groups=groups, edges=edges)

    limit: list[tuple[GtShadow, ...]] = []
    chosen: list[GtShadow] = []

    def consistent(k: int, candidate: GtShadow) -> bool:
        for j in range(k):
            if (k, j) in edges and edges[(k, j)][candidate] != chosen[j]:
                return False
            if (j, k) in edges and edges[(j, k)][chosen[j]] != candidate:
                return False
        return True

    def assign(k: int):
        if k == len(objects):
            limit.append(tuple(chosen))
            return
        for candidate in groups[k]:
            if consistent(k, candidate):
                chosen.append(candidate)
                assign(k + 1)
                chosen.pop()

    assign(0)
    return diagram, limit
