"""Merging similar level-0 object sets and rewriting the rules above them.

Similarity is the exact rational |intersection| / |union|; at no point is a
similarity or a threshold represented as a float, so thresholds that sit
within rounding distance of a similarity value still resolve correctly.
Clustering takes the connected components of the graph joining every pair
at or above the threshold, i.e. single linkage in one shot; similarities
are not recomputed between merged clusters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InvalidModel, UndefinedSimilarity, UnprunedModel
from .model import (
    Expr,
    ObjectName,
    ObjectSet,
    OFSModel,
    Ref,
    Rule,
    canonicalize,
    validate_model,
    Alt,
    Concat,
    Epsilon,
    Plus,
    Star,
)


def similarity(a: ObjectSet, b: ObjectSet) -> Fraction:
    """|a n b| / |a u b| as an exact rational; undefined when both empty."""
    if len(a) == 0 and len(b) == 0:
        raise UndefinedSimilarity("similarity of two empty sets is undefined")
    inter = len(a.strings & b.strings)
    union = len(a.strings | b.strings)
    return Fraction(inter, union)


@dataclass(frozen=True)
class SimilarityMatrix:
    names: tuple[ObjectName, ...]
    values: tuple[tuple[Fraction, ...], ...]

    def value(self, a: str, b: str) -> Fraction:
        labels = [n.label for n in self.names]
        return self.values[labels.index(a)][labels.index(b)]

    def pairs(self) -> Iterator[tuple[ObjectName, ObjectName, Fraction]]:
        for i in range(len(self.names)):
            for j in range(i + 1, len(self.names)):
                yield self.names[i], self.names[j], self.values[i][j]


def similarity_matrix(model: OFSModel) -> SimilarityMatrix:
    """Pairwise similarities of all level-0 sets of a pruned model."""
    rules = sorted(model.level0_rules, key=lambda r: r.name.label)
    for rule in rules:
        if len(rule.rhs) == 0:
            raise UnprunedModel(f"level 0 set {rule.name.label!r} is empty")
    names = tuple(r.name for r in rules)
    values = []
    for a in rules:
        row = []
        for b in rules:
            row.append(Fraction(1) if a is b else similarity(a.rhs, b.rhs))
        values.append(tuple(row))
    return SimilarityMatrix(names, tuple(values))


@dataclass(frozen=True)
class Partition:
    blocks: tuple[frozenset[ObjectName], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[ObjectName]]) -> "Partition":
        frozen = [frozenset(b) for b in blocks]
        return cls(tuple(sorted(frozen, key=lambda b: sorted(n.label for n in b))))

    def block_of(self, name: ObjectName) -> frozenset[ObjectName]:
        for block in self.blocks:
            if name in block:
                return block
        raise KeyError(name)

    def refines(self, coarser: "Partition") -> bool:
        """True if every block here is contained in a block of the other."""
        return all(any(block <= other for other in coarser.blocks)
                   for block in self.blocks)


def _check_tau(tau: Fraction) -> Fraction:
    tau = Fraction(tau)
    if not (0 < tau <= 1):
        raise ValueError(f"threshold must be in (0, 1], got {tau}")
    return tau


def cluster_partition(matrix: SimilarityMatrix, tau) -> Partition:
    """Connected components of the 'similarity >= tau' graph."""
    tau = _check_tau(tau)
    parent = {name: name for name in matrix.names}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, value in matrix.pairs():
        if value >= tau:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    blocks: dict[ObjectName, set[ObjectName]] = {}
    for name in matrix.names:
        blocks.setdefault(find(name), set()).add(name)
    return Partition.of(blocks.values())


@dataclass(frozen=True)
class MergeRecord:
    new_name: ObjectName
    members: frozenset[ObjectName]
    tau: Fraction


def _merged_label(labels: Iterable[str], level: int, taken: set[str]) -> str:
    label = "_".join(sorted(labels))
    while label in taken:
        label = f"{label}_{level}"
    return label


def _rewrite(expr: Expr, mapping: dict[str, str]) -> Expr:
    if isinstance(expr, Epsilon):
        return expr
    if isinstance(expr, Ref):
        return Ref(mapping.get(expr.label, expr.label))
    if isinstance(expr, Concat):
        return Concat(tuple(_rewrite(p, mapping) for p in expr.parts))
    if isinstance(expr, Alt):
        return Alt(tuple(_rewrite(p, mapping) for p in expr.parts))
    if isinstance(expr, Star):
        return Star(_rewrite(expr.inner, mapping))
    if isinstance(expr, Plus):
        return Plus(_rewrite(expr.inner, mapping))
    raise TypeError(f"not an expression: {expr!r}")


def generalise(model: OFSModel, tau) -> tuple[OFSModel, list[MergeRecord]]:
    """Merge level-0 sets clustered at tau, then percolate upward.

    Clustered sets become one rule whose set is the union of the members
    and whose name is the members' labels sorted and joined with ``_``.
    References are rewritten level by level; rules whose canonicalized
    right-hand sides become identical merge in turn, so the effect climbs
    as far as it reaches.  The output is a pure function of model and tau.
    """
    tau = _check_tau(tau)
    violations = validate_model(model)
    if violations:
        raise InvalidModel(violations)
    matrix = similarity_matrix(model)
    partition = cluster_partition(matrix, tau)

    records: list[MergeRecord] = []
    mapping: dict[str, str] = {}
    taken = {r.name.label for rules in model.levels for r in rules}

    level0 = []
    for block in partition.blocks:
        if len(block) == 1:
            (name,) = block
            level0.append(model.rule(name.label))
            continue
        labels = [n.label for n in block]
        for label in labels:
            taken.discard(label)
        label = _merged_label(labels, 0, taken)
        taken.add(label)
        name = ObjectName(0, label)
        merged = ObjectSet(frozenset().union(*(model.rule(n.label).rhs.strings for n in block)))
        level0.append(Rule(name, merged))
        records.append(MergeRecord(name, frozenset(block), tau))
        for member in block:
            mapping[member.label] = label
    levels: list[tuple[Rule, ...]] = [tuple(sorted(level0, key=lambda r: r.name.label))]

    for i in range(1, model.level_count):
        rewritten = []
        for rule in model.levels[i]:
            rhs = canonicalize(_rewrite(rule.rhs, mapping))
            rewritten.append(Rule(rule.name, rhs))
        groups: dict[Expr, list[Rule]] = {}
        for rule in rewritten:
            groups.setdefault(rule.rhs, []).append(rule)
        level_rules = []
        for rhs, group in groups.items():
            if len(group) == 1:
                level_rules.append(group[0])
                continue
            labels = [r.name.label for r in group]
            for label in labels:
                taken.discard(label)
            label = _merged_label(labels, i, taken)
            taken.add(label)
            name = ObjectName(i, label)
            level_rules.append(Rule(name, rhs))
            records.append(MergeRecord(name, frozenset(r.name for r in group), tau))
            for member in group:
                mapping[member.name.label] = label
        levels.append(tuple(sorted(level_rules, key=lambda r: r.name.label)))

    result = OFSModel(model.name, model.terminals, tuple(levels))
    violations = validate_model(result)
    if violations:
        raise InvalidModel(violations, message="generalisation produced an invalid model")
    return result, records


# --------------------------------------------------------------------------
# Dendrograms.

@dataclass(frozen=True)
class Dendrogram:
    """A merge tree; leaves carry names, internal nodes the merge height."""

    name: ObjectName | None = None
    children: tuple["Dendrogram", ...] = ()
    merge_tau: Fraction | None = None

    @property
    def is_leaf(self) -> bool:
        return self.name is not None

    def leaves(self) -> list[ObjectName]:
        if self.is_leaf:
            return [self.name]
        out = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def cut(self, tau) -> Partition:
        """The partition obtained by keeping merges at height >= tau."""
        tau = _check_tau(tau)
        blocks: list[frozenset[ObjectName]] = []

        def walk(node: "Dendrogram"):
            if node.is_leaf:
                blocks.append(frozenset([node.name]))
            elif node.merge_tau >= tau:
                blocks.append(frozenset(node.leaves()))
            else:
                for child in node.children:
                    walk(child)

        walk(self)
        return Partition.of(blocks)


def _node_key(node: Dendrogram):
    return sorted(n.label for n in node.leaves())[0]


def dendrogram(matrix: SimilarityMatrix) -> Dendrogram:
    """Single-linkage merge tree with exact merge heights.

    Cutting the tree at any threshold in (0, 1] reproduces
    cluster_partition.  Components never joined by a positive similarity
    are attached to the root at height 0.
    """
    parent = {name: name for name in matrix.names}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components: dict[ObjectName, Dendrogram] = {
        name: Dendrogram(name=name) for name in matrix.names
    }
    heights = sorted({v for _, _, v in matrix.pairs() if v > 0}, reverse=True)
    for height in heights:
        for a, b, value in matrix.pairs():
            if value == height:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        regrouped: dict[ObjectName, list[Dendrogram]] = {}
        for root, tree in components.items():
            regrouped.setdefault(find(root), []).append(tree)
        components = {}
        for root, trees in regrouped.items():
            if len(trees) == 1:
                components[root] = trees[0]
            else:
                children = tuple(sorted(trees, key=_node_key))
                components[root] = Dendrogram(children=children, merge_tau=height)

    remaining = sorted(components.values(), key=_node_key)
    if len(remaining) == 1:
        return remaining[0]
    return Dendrogram(children=tuple(remaining), merge_tau=Fraction(0))


def sweep(matrix: SimilarityMatrix, taus: Iterable) -> list[tuple[Fraction, Partition]]:
    """The partition at each threshold of a grid."""
    return [(Fraction(t), cluster_partition(matrix, t)) for t in taus]
