"""Weakly connected components and the field bow-tie of the largest one."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csgraph


@dataclass(frozen=True, eq=False)
class WccResult:
    component_id: np.ndarray
    largest: int
    sizes: np.ndarray
    n: int

    @property
    def largest_size(self):
        return int(self.sizes[self.largest])

    @property
    def largest_fraction(self):
        return self.largest_size / self.n

    @property
    def members(self):
        """Sorted node ids of the largest component."""
        return np.flatnonzero(self.component_id == self.largest)


def largest_wcc(g):
    """
    Weakly connected components of ``g``.

    Components are relabelled in order of their smallest node id, so the
    largest one is chosen deterministically: ties go to the component
    containing the lowest id.
    """
    _, lab = csgraph.connected_components(g.adjacency(), directed=True, connection="weak")
    # relabel by first occurrence
    _, first = np.unique(lab, return_index=True)
    order = np.argsort(first)
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    comp = remap[lab]
    sizes = np.bincount(comp)
    return WccResult(component_id=comp, largest=int(np.argmax(sizes)), sizes=sizes, n=g.n)


@dataclass(frozen=True, eq=False)
class FieldBowTie:
    in_field: np.ndarray
    core: np.ndarray
    out_field: np.ndarray
    n: int

    @property
    def fractions(self):
        """Component sizes over the *total* node count, as ``(in, core, out)``."""
        return (len(self.in_field) / self.n, len(self.core) / self.n, len(self.out_field) / self.n)


def field_bowtie(g, wcc=None):
    """
    Split the largest WCC into in-field (no outgoing links), out-field (no
    incoming links) and core (both).

    Degrees are counted on links with both ends inside the component, which
    for a WCC is every link touching its nodes.
    """
    if wcc is None:
        wcc = largest_wcc(g)
    inside = wcc.component_id == wcc.largest
    e = g.edges()
    keep = inside[e[:, 0]] & inside[e[:, 1]]
    e = e[keep]
    kout = np.bincount(e[:, 0], minlength=g.n)
    kin = np.bincount(e[:, 1], minlength=g.n)
    in_field = np.flatnonzero(inside & (kout == 0))
    out_field = np.flatnonzero(inside & (kin == 0) & (kout > 0))
    core = np.flatnonzero(inside & (kin > 0) & (kout > 0))
    return FieldBowTie(in_field=in_field, core=core, out_field=out_field, n=g.n)
