"""Invariants of surface-links from marked graph diagrams.

Computes the biquandle counting invariant and its bead-coloring
(biquandle module) enhancements for oriented surface-links, and checks
invariance under the diagram move set by rewriting.
"""

from .ring import (
    Modulus,
    ModMatrix,
    NotAUnit,
    CompositeModulus,
    invert,
    row_reduce,
    null_count,
    smith_normal_form,
)

__all__ = [name for name in dir() if not name.startswith("_")]
