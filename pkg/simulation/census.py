"""
Nodal domains of a sampled field: labels, containment tree, holes and tree ends

Positive cells are joined 4-connected and negative cells 8-connected, so the
region adjacency graph of the grid padded by a negative frame is a tree. Rooted
at the frame, a domain's children are the components filling its holes.

Each domain clear of the grid edge also carries the weight 1 / (area of the window
positions its bounding box fits in); summed, the weights estimate the domain density.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order

from numerics.rootfind import bessel_zero
from .wave import GridSpec

logger = logging.getLogger(__name__)

FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)
EIGHT_CONNECTED = ndimage.generate_binary_structure(2, 2)
FABER_KRAHN_FRACTION = 0.8


def faber_krahn_area() -> float:
    """Smallest possible nodal domain area, pi j_{0,1}^2"""
    return math.pi * bessel_zero(0, 1) ** 2


@dataclass
class ComponentRecord:
    id: int
    sign: int
    cells: int
    area: float
    interior: bool
    parent: Optional[int]
    children: List[int] = field(default_factory=list)
    extent: Tuple[int, int] = (0, 0)  # bounding box rows, cols in cells
    touches_edge: bool = False

    @property
    def hole_count(self) -> int:
        return len(self.children)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "sign": self.sign,
            "cells": self.cells,
            "area": self.area,
            "interior": self.interior,
            "parent": self.parent,
            "children": list(self.children),
            "extent": list(self.extent),
            "touches_edge": self.touches_edge,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> ComponentRecord:
        parent = data.get("parent")
        return cls(
            id=int(data["id"]),
            sign=int(data["sign"]),
            cells=int(data["cells"]),
            area=float(data["area"]),
            interior=bool(data["interior"]),
            parent=None if parent is None else int(parent),
            children=[int(c) for c in data["children"]],
            extent=tuple(int(v) for v in data.get("extent", (0, 0))),
            touches_edge=bool(data.get("touches_edge", False)),
        )


@dataclass
class NodalCensus:
    components: List[ComponentRecord]
    root: int
    tree_end_histogram: Dict[str, int]
    n_interior: int
    euler_violations: int = 0
    faber_krahn_flags: int = 0
    largest_component: Optional[int] = None
    resolution: int = 0
    cell_area: float = 0.0

    def component(self, component_id: int) -> ComponentRecord:
        return self.components[component_id]

    def interior_domains(self) -> List[ComponentRecord]:
        return [c for c in self.components if c.interior]

    def hole_histogram(self) -> Dict[int, int]:
        """Number of interior domains with each hole count"""
        return dict(sorted(Counter(c.hole_count for c in self.interior_domains()).items()))

    def observed_domains(self) -> List[ComponentRecord]:
        """Domains with no cell on the grid edge, so their holes are all seen"""
        return [c for c in self.components if c.id != self.root and c.cells > 0 and not c.touches_edge]

    def window_weight(self, record: ComponentRecord) -> float:
        """1 / area of the positions at which the domain's bounding box stays clear of the edge"""
        rows, cols = record.extent
        positions = (self.resolution - 1 - rows) * (self.resolution - 1 - cols)
        return 1.0 / (positions * self.cell_area)

    def weighted_hole_histogram(self) -> Dict[int, float]:
        """Edge-corrected density of domains with each hole count, per unit area"""
        weights: Dict[int, float] = {}
        for record in self.observed_domains():
            weights[record.hole_count] = weights.get(record.hole_count, 0.0) + self.window_weight(record)
        return dict(sorted(weights.items()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "components": [c.to_dict() for c in self.components],
            "root": self.root,
            "tree_end_histogram": dict(sorted(self.tree_end_histogram.items())),
            "n_interior": self.n_interior,
            "hole_histogram": {str(h): n for h, n in self.hole_histogram().items()},
            "euler_violations": self.euler_violations,
            "faber_krahn_flags": self.faber_krahn_flags,
            "largest_component": self.largest_component,
            "resolution": self.resolution,
            "cell_area": self.cell_area,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> NodalCensus:
        largest = data.get("largest_component")
        return cls(
            components=[ComponentRecord.from_dict(c) for c in data["components"]],
            root=int(data["root"]),
            tree_end_histogram={k: int(v) for k, v in data["tree_end_histogram"].items()},
            n_interior=int(data["n_interior"]),
            euler_violations=int(data.get("euler_violations", 0)),
            faber_krahn_flags=int(data.get("faber_krahn_flags", 0)),
            largest_component=None if largest is None else int(largest),
            resolution=int(data.get("resolution", 0)),
            cell_area=float(data.get("cell_area", 0.0)),
        )


# ==================== labeling ====================

def label_components(field_grid: np.ndarray):
    """
    Label the frame-padded sign grid.

    Returns:
        (labels, signs): labels has the padded shape with ids from 0; signs[id] is +1 or -1.
        Zero counts as negative.
    """
    positive = np.pad(np.asarray(field_grid) > 0.0, 1, constant_values=False)
    pos_labels, n_pos = ndimage.label(positive, structure=FOUR_CONNECTED)
    neg_labels, n_neg = ndimage.label(~positive, structure=EIGHT_CONNECTED)
    labels = np.where(positive, pos_labels - 1, neg_labels - 1 + n_pos)
    signs = np.concatenate([np.ones(n_pos, dtype=int), -np.ones(n_neg, dtype=int)])
    return labels, signs


def adjacency_edges(labels: np.ndarray) -> np.ndarray:
    """Unique (a, b) pairs, a < b, of components sharing a horizontal or vertical cell edge"""
    pairs = []
    for a, b in ((labels[:, :-1], labels[:, 1:]), (labels[:-1, :], labels[1:, :])):
        differ = a != b
        pairs.append(np.column_stack([a[differ], b[differ]]))
    edges = np.concatenate(pairs)
    if edges.size == 0:
        return edges.reshape(0, 2)
    edges.sort(axis=1)
    return np.unique(edges, axis=0)


def _holes_by_complement(mask: np.ndarray, sign: int) -> int:
    """Bounded components of the complement of one domain, labeled with the dual connectivity"""
    structure = EIGHT_CONNECTED if sign > 0 else FOUR_CONNECTED
    padded = np.pad(mask, 1, constant_values=False)
    complement, count = ndimage.label(~padded, structure=structure)
    return count - 1


# ==================== tree ends ====================

def _canonical_shape(root: int, blocked: int, neighbours: List[List[int]]) -> str:
    """AHU string of the tree hanging from root once the edge to `blocked` is cut"""
    order = [root]
    parent = {root: blocked}
    for node in order:
        for nxt in neighbours[node]:
            if nxt != parent[node]:
                parent[nxt] = node
                order.append(nxt)
    codes: Dict[int, List[str]] = {node: [] for node in order}
    shape = ""
    for node in reversed(order):
        shape = "(" + "".join(sorted(codes[node])) + ")"
        if node != root:
            codes[parent[node]].append(shape)
    return shape


def _subtree_sizes(order: np.ndarray, parents: np.ndarray, n: int) -> np.ndarray:
    sizes = np.ones(n, dtype=int)
    for node in order[::-1]:
        p = parents[node]
        if p >= 0:
            sizes[p] += sizes[node]
    return sizes


def _contains(ancestor: int, node: int, parents: np.ndarray) -> bool:
    while node >= 0:
        if node == ancestor:
            return True
        node = parents[node]
    return False


def _extent(box: Optional[Tuple[slice, slice]]) -> Tuple[int, int]:
    if box is None:
        return (0, 0)
    return (box[0].stop - box[0].start, box[1].stop - box[1].start)


def _touches_edge(box: Optional[Tuple[slice, slice]], resolution: int) -> bool:
    if box is None:
        return False
    return any(s.start == 0 or s.stop == resolution for s in box)


# ==================== census ====================

def nodal_census(field_grid: np.ndarray, grid: GridSpec) -> NodalCensus:
    """
    Components of {F > 0} and {F <= 0}, their containment tree rooted at the outer
    frame, hole counts for domains inside the counting disk and the tree-end shapes
    of the nodal lines bounding them
    """
    field_grid = np.asarray(field_grid)
    if field_grid.shape != (grid.resolution, grid.resolution):
        raise ValueError(f"field shape {field_grid.shape} does not match grid resolution {grid.resolution}")

    labels, signs = label_components(field_grid)
    n = signs.size
    root = int(labels[0, 0])
    inner = labels[1:-1, 1:-1]

    cells = np.bincount(inner.ravel(), minlength=n)
    radius_by_component = ndimage.maximum(grid.radii(), labels=inner + 1, index=np.arange(1, n + 1))
    max_radius = np.where(cells > 0, np.asarray(radius_by_component, dtype=float), np.inf)
    interior = max_radius <= grid.counting_radius
    interior[root] = False

    edges = adjacency_edges(labels)
    graph = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n)).tocsr()
    order, parents = breadth_first_order(graph, root, directed=False, return_predecessors=True)
    parents = np.where(parents < 0, -1, parents)
    if order.size != n:
        logger.warning(f"Adjacency graph disconnected: reached {order.size} of {n} components")

    neighbours: List[List[int]] = [[] for _ in range(n)]
    for a, b in edges:
        neighbours[a].append(int(b))
        neighbours[b].append(int(a))

    slices = ndimage.find_objects(inner + 1)
    slices += [None] * (n - len(slices))
    components = [
        ComponentRecord(
            id=k,
            sign=int(signs[k]),
            cells=int(cells[k]),
            area=float(cells[k] * grid.cell_area),
            interior=bool(interior[k]),
            parent=None if parents[k] < 0 else int(parents[k]),
            extent=_extent(slices[k]),
            touches_edge=_touches_edge(slices[k], grid.resolution),
        )
        for k in range(n)
    ]
    for k in order[1:]:
        components[parents[k]].children.append(int(k))

    largest = int(np.lexsort((np.arange(n), -cells))[0])
    sizes = _subtree_sizes(order, parents, n)

    histogram: Counter = Counter()
    euler_violations = 0
    fk_flags = 0
    fk_floor = FABER_KRAHN_FRACTION * faber_krahn_area()

    for record in components:
        if not record.interior:
            continue
        k = record.id
        # boundary curves counted as distinct neighbours must equal holes + 1
        holes = _holes_by_complement(inner[slices[k]] == k, record.sign)
        if len(neighbours[k]) != record.hole_count + 1 or holes != record.hole_count:
            euler_violations += 1
            logger.debug(f"Component {k}: {len(neighbours[k])} neighbours, {record.hole_count} children, "
                         f"{holes} complement holes")
        if record.area < fk_floor:
            fk_flags += 1
            logger.warning(f"Component {k} area {record.area:.3f} below the Faber-Krahn floor {fk_floor:.3f}")

        parent = int(parents[k])
        inside = int(sizes[k])
        outside = n - inside
        if inside < outside or (inside == outside and not _contains(k, largest, parents)):
            histogram[_canonical_shape(k, parent, neighbours)] += 1
        else:
            histogram[_canonical_shape(parent, k, neighbours)] += 1

    n_interior = int(interior.sum())
    logger.debug(f"Census: {n} components, {n_interior} interior, {euler_violations} Euler violations")
    return NodalCensus(
        components=components,
        root=root,
        tree_end_histogram=dict(histogram),
        n_interior=n_interior,
        euler_violations=euler_violations,
        faber_krahn_flags=fk_flags,
        largest_component=largest,
        resolution=grid.resolution,
        cell_area=grid.cell_area,
    )
