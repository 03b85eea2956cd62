"""Canned block instances worked out by hand.

``sequence_truncation`` keeps only how four operators on square-summable
sequences act on the first three coordinates.  Their behaviour past the third
coordinate is not pinned down, so the 3x3 blocks are treated as the model
itself rather than as a faithful restriction.
"""

from .blockthm import BlockInstance
from .ratmat import Matrix


def sequence_truncation() -> BlockInstance:
    return BlockInstance.of(
        A=Matrix([[1, 0, 1], [0, 1, 1], [0, 0, 1]]),
        B=Matrix([[0, 0, 1], [0, 0, 1], [0, 0, -1]]),
        C=Matrix([[1, 0, 0], [1, 1, 0], [0, 0, 0]]),
        D=Matrix([[1, 0, 1], [0, 1, 1], [0, 0, 0]]),
    )


def hirano_corollary_demo() -> BlockInstance:
    """Hirano blocks with BD^H = 0, BC = 0 and DD^pi C = 0."""
    return BlockInstance.of(
        A=Matrix([[1, 0], [2, 1]]),
        B=Matrix([[1, -1], [-1, 1]]),
        C=Matrix([[0, 1], [0, 1]]),
        D=Matrix([[1, 0], [1, 0]]),
    )


def annihilator_demo() -> BlockInstance:
    """Hirano blocks with AB = 0, BD^H = 0 and D^pi CB = 0."""
    return BlockInstance.of(
        A=Matrix([[1, 1], [0, 0]]),
        B=Matrix([[1, 0], [-1, 0]]),
        C=Matrix([[0, 0], [2, 3]]),
        D=Matrix([[0, 0], [0, 1]]),
    )


CANNED = {
    "sequence-truncation": sequence_truncation,
    "hirano-corollary-demo": hirano_corollary_demo,
    "annihilator-demo": annihilator_demo,
}
