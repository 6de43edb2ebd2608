"""Rooted trees from distance matrices: UPGMA agglomeration and Newick output."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InvalidMatrix

MATRIX_TOLERANCE = 1e-12
_NEEDS_QUOTES = re.compile(r"[\s,():;'\[\]]")


@dataclass
class Node:
    """Tree node. Leaves have a name and height 0; heights grow toward the root."""

    name: Optional[str] = None
    height: float = 0.0
    children: list["Node"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["Node"]:
        """Pre-order traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list["Node"]:
        return [n for n in self.walk() if n.is_leaf]

    def leaf_names(self) -> list[str]:
        return [n.name for n in self.leaves()]

    def internal_nodes(self) -> list["Node"]:
        return [n for n in self.walk() if not n.is_leaf]

    def edges(self) -> Iterator[tuple["Node", "Node", float]]:
        """(parent, child, branch length) for every edge."""
        for node in self.walk():
            for child in node.children:
                yield node, child, node.height - child.height

    def clusters(self) -> set[frozenset]:
        """Leaf-name sets below every internal node; identifies the topology."""
        out = set()

        def visit(node):
            if node.is_leaf:
                return frozenset([node.name])
            below = frozenset().union(*(visit(c) for c in node.children))
            out.add(below)
            return below

        visit(self)
        return out


def _check_matrix(values: np.ndarray):
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise InvalidMatrix(f"distance matrix must be square, got shape {values.shape}")
    if values.shape[0] < 2:
        raise InvalidMatrix("need at least two taxa")
    if not np.all(np.isfinite(values)):
        raise InvalidMatrix("matrix has non-finite entries")
    if np.any(np.abs(values - values.T) > MATRIX_TOLERANCE):
        raise InvalidMatrix("matrix is not symmetric")
    if np.any(np.diag(values) != 0):
        raise InvalidMatrix("matrix has a nonzero diagonal")
    if np.any(values < 0):
        raise InvalidMatrix("matrix has negative entries")


def upgma(values, names: Sequence[str]) -> Node:
    """Average-linkage clustering.

    The closest pair of clusters is merged at half their mean distance;
    distances to the merged cluster are size-weighted means. Clusters are
    keyed by their smallest original leaf index, and ties go to the smallest
    ``(row, column)`` key pair. The child with the smaller key comes first.
    """
    values = np.asarray(values, dtype=float)
    _check_matrix(values)
    n = values.shape[0]
    if len(names) != n:
        raise InvalidMatrix(f"{len(names)} names for a {n}x{n} matrix")
    if len(set(names)) != n:
        raise InvalidMatrix("taxon names must be unique")

    # symmetrize exactly so the merge loop can read either triangle
    dist = (values + values.T) / 2
    nodes = {k: Node(name=names[k]) for k in range(n)}
    sizes = {k: 1 for k in range(n)}
    active = list(range(n))
    while len(active) > 1:
        best = None
        for x in range(len(active)):
            i = active[x]
            for j in active[x + 1 :]:
                d = dist[i, j]
                if best is None or d < best[0]:
                    best = (d, i, j)
        d, i, j = best
        left, right = nodes[i], nodes[j]
        height = max(d / 2, left.height, right.height)
        nodes[i] = Node(height=height, children=[left, right])
        del nodes[j]
        ni, nj = sizes[i], sizes.pop(j)
        for k in active:
            if k != i and k != j:
                merged = (ni * dist[i, k] + nj * dist[j, k]) / (ni + nj)
                dist[i, k] = dist[k, i] = merged
        sizes[i] = ni + nj
        active.remove(j)
    return nodes[active[0]]


def cophenetic_matrix(tree: Node, names: Sequence[str]) -> np.ndarray:
    """Leaf-to-leaf path lengths, ordered by ``names``."""
    index = {name: k for k, name in enumerate(names)}
    out = np.zeros((len(names), len(names)))

    def visit(node):
        if node.is_leaf:
            return [index[node.name]]
        groups = [visit(c) for c in node.children]
        for g in range(len(groups)):
            for h in range(g + 1, len(groups)):
                for a in groups[g]:
                    for b in groups[h]:
                        out[a, b] = out[b, a] = 2 * node.height
        return [k for grp in groups for k in grp]

    visit(tree)
    return out


def quote_name(name: str) -> str:
    if name and not _NEEDS_QUOTES.search(name):
        return name
    return "'" + name.replace("'", "''") + "'"


def format_length(x: float) -> str:
    return format(x, ".12g")


def to_newick(tree: Node) -> str:
    def render(node):
        if node.is_leaf:
            return quote_name(node.name)
        inner = ",".join(
            f"{render(child)}:{format_length(node.height - child.height)}" for child in node.children
        )
        return f"({inner})"

    return render(tree) + ";"


def ultrametric_matrix(tree: Node) -> tuple[list[str], np.ndarray]:
    names = tree.leaf_names()
    return names, cophenetic_matrix(tree, names)
