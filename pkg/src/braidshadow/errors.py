"""Exception types shared across the package.

Every domain failure raises a subclass of :class:`BraidshadowError`; the CLI
maps that family to exit code 1 and everything else (bad files, bad flags) to
exit code 2.
"""

from __future__ import annotations


class BraidshadowError(Exception):
    """Base class for domain errors."""


class DegreeMismatchError(BraidshadowError):
    """Permutations of different degrees were combined."""


class DomainTagMismatchError(BraidshadowError):
    """Two homomorphisms with different domain tags were compared."""


class GroupSizeCapExceeded(BraidshadowError):
    """A closure grew past the configured group-size cap.

    ``partial_count`` is the number of elements found before giving up.
    """

    def __init__(self, cap: int, partial_count: int):
        super().__init__(
            f"group-size cap exceeded: more than {cap} elements "
            f"(stopped after {partial_count})"
        )
        self.cap = cap
        self.partial_count = partial_count


class CandidateCapExceeded(BraidshadowError):
    """An enumeration grid is larger than the configured candidate cap."""

    def __init__(self, cap: int, count: int):
        super().__init__(f"candidate cap exceeded: {count} candidates > cap {cap}")
        self.cap = cap
        self.count = count


class BraidRelationError(BraidshadowError):
    """Generator images do not satisfy g1 g2 g1 = g2 g1 g2."""


class KernelNotInPb3Error(BraidshadowError):
    """The kernel of the given homomorphism is not contained in PB3."""


class NotContainedError(BraidshadowError):
    """A reduction was requested along a pair that is not nested."""


class SourceTargetMismatchError(BraidshadowError):
    """Composition of shadows whose source/target kernels do not match."""


class NotCommutatorWordError(BraidshadowError):
    """A word required to lie in [F2,F2] has a nonzero exponent sum."""


class InternalInconsistencyError(BraidshadowError):
    """An invariant that upstream checks guarantee failed; signals a bug."""
