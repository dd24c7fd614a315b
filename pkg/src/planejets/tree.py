"""The component tree: fiber components of all levels joined by truncation.

Vertices are the irreducible components of ``C_m^0`` for ``1 <= m <= m_max``;
an edge joins a component at level ``m+1`` to the component at level ``m``
that it projects into.  The boundary components form the trunk, every other
component system hangs off the trunk as a path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .components import (
    ComponentLabel,
    Kind,
    birth_level,
    boundary_codim,
    component_codim,
    death_level,
    level_index,
    stratum_of_k,
)
from .semigroup import (
    InvalidSemigroupError,
    SemigroupInvariants,
    invariants_from_semigroup,
    validate_semigroup,
)


class TreeInversionError(ValueError):
    pass


class InsufficientDepthError(TreeInversionError):
    def __init__(self, message: str, min_m_max: int | None = None):
        super().__init__(message)
        self.min_m_max = min_m_max


class MalformedTreeError(TreeInversionError):
    pass


@dataclass(frozen=True)
class TreeVertex:
    id: int
    m: int
    label: ComponentLabel
    codim: int | None = None

    def sort_key(self) -> tuple:
        kind, j, kappa = self.label.branch_key()
        return (self.m, kind, j, kappa)


@dataclass(frozen=True)
class ComponentTree:
    m_max: int
    vertices: tuple[TreeVertex, ...]
    edges: tuple[tuple[int, int], ...]

    def level_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for v in self.vertices:
            counts[v.m] = counts.get(v.m, 0) + 1
        return counts


class Branch(NamedTuple):
    """A non-trunk path: attached below ``attach + 1``, alive on ``[attach+1, last]``."""

    attach: int
    length: int
    complete: bool


def _branch_lifetimes(inv: SemigroupInvariants, m_max: int):
    """Yield ``(k, label, birth, last_alive)`` for every nonempty ``C^k`` up to ``m_max``."""
    k = 1
    while birth_level(inv, k) <= m_max:
        birth = birth_level(inv, k)
        death = death_level(inv, k)
        last = m_max if death is None else min(death - 1, m_max)
        if last >= birth:
            j, kappa = stratum_of_k(inv, k)
            label = ComponentLabel.type_i(kappa) if j > inv.g else ComponentLabel.type_v(j, kappa)
            yield k, label, birth, last
        k += 1


def build_tree(inv: SemigroupInvariants, m_max: int, with_codims: bool = True) -> ComponentTree:
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    raw: list[tuple[int, ComponentLabel, int | None]] = []
    raw_edges: list[tuple[tuple, tuple]] = []
    for m in range(1, m_max + 1):
        label = ComponentLabel.boundary(level_index(inv, m))
        raw.append((m, label, boundary_codim(inv, m) if with_codims else None))
        if m > 1:
            raw_edges.append(((m, label), (m - 1, ComponentLabel.boundary(level_index(inv, m - 1)))))
    for k, label, birth, last in _branch_lifetimes(inv, m_max):
        parent = (birth - 1, ComponentLabel.boundary(level_index(inv, birth - 1)))
        for m in range(birth, last + 1):
            raw.append((m, label, component_codim(inv, k, m) if with_codims else None))
            raw_edges.append(((m, label), parent))
            parent = (m, label)
    raw.sort(key=lambda r: (r[0], *r[1].branch_key()))
    ids = {(m, label): i for i, (m, label, _) in enumerate(raw)}
    vertices = tuple(TreeVertex(i, m, label, codim) for i, (m, label, codim) in enumerate(raw))
    edges = tuple(sorted((ids[child], ids[parent]) for child, parent in raw_edges))
    return ComponentTree(m_max, vertices, edges)


def min_tree_depth(inv: SemigroupInvariants) -> int:
    """Smallest depth at which :func:`invert_tree` can recover ``inv``.

    Two infinite branches must be visible and, for every ``j``, one type-``j``
    finite branch must have ended.
    """
    depth = max(2 * inv.beta0 * inv.beta1 + inv.e1, inv.beta_bar[-1])
    for j in range(2, inv.g + 1):
        divisor = inv.n_product(2, j - 1)
        kappa = 1
        while True:
            if kappa % inv.n_at(j):
                k = kappa * divisor
                if death_level(inv, k) > birth_level(inv, k):
                    depth = max(depth, death_level(inv, k))
                    break
            kappa += 1
    return depth


# --------------------------------------------------------------------------
# serialization

_KIND_BY_CODE = {k.value: k for k in Kind}


def _vertex_name(v: TreeVertex) -> str:
    lab = v.label
    if lab.kind is Kind.BOUNDARY:
        return f"m{v.m}_B_q{lab.q}"
    if lab.kind is Kind.TYPE_I:
        return f"m{v.m}_I_k{lab.kappa}"
    return f"m{v.m}_V_j{lab.j}_k{lab.kappa}"


def _vertex_text(v: TreeVertex) -> str:
    lab = v.label
    params = ""
    if lab.kind is Kind.TYPE_I:
        params = f"[κ={lab.kappa}]"
    elif lab.kind is Kind.TYPE_V:
        params = f"[κ={lab.kappa},j={lab.j}]"
    text = f"{lab.kind.value}{params} m={v.m}"
    if v.codim is not None:
        text += f" codim={v.codim}"
    return text


def _canonical(tree: ComponentTree) -> ComponentTree:
    order = sorted(tree.vertices, key=TreeVertex.sort_key)
    renumber = {v.id: i for i, v in enumerate(order)}
    vertices = tuple(TreeVertex(renumber[v.id], v.m, v.label, v.codim) for v in order)
    edges = tuple(sorted((renumber[c], renumber[p]) for c, p in tree.edges))
    return ComponentTree(tree.m_max, vertices, edges)


def tree_to_json(tree: ComponentTree) -> str:
    tree = _canonical(tree)
    vertices = []
    for v in tree.vertices:
        entry = {"id": v.id, "m": v.m, "kind": v.label.kind.value}
        if v.label.kappa is not None:
            entry["kappa"] = v.label.kappa
        if v.label.j is not None:
            entry["j"] = v.label.j
        if v.label.q is not None:
            entry["q"] = v.label.q
        if v.codim is not None:
            entry["codim"] = v.codim
        vertices.append(entry)
    doc = {"m_max": tree.m_max, "vertices": vertices, "edges": [list(e) for e in tree.edges]}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def tree_to_dot(tree: ComponentTree) -> str:
    tree = _canonical(tree)
    lines = ["digraph component_tree {", "  rankdir=BT;", "  node [shape=box];"]
    for v in tree.vertices:
        lines.append(f'  v{v.id} [id="{_vertex_name(v)}", label="{_vertex_text(v)}"];')
    for child, parent in tree.edges:
        lines.append(f"  v{child} -> v{parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_tree(tree: ComponentTree, format: str) -> str:
    if format == "json":
        return tree_to_json(tree)
    if format == "dot":
        return tree_to_dot(tree)
    raise ValueError(f"unknown tree format {format!r} (expected 'dot' or 'json')")


def tree_from_json(text: str) -> ComponentTree:
    try:
        doc = json.loads(text)
        vertices = []
        for entry in doc["vertices"]:
            kind = _KIND_BY_CODE[entry["kind"]]
            label = ComponentLabel(kind, kappa=entry.get("kappa"), j=entry.get("j"), q=entry.get("q"))
            vertices.append(TreeVertex(int(entry["id"]), int(entry["m"]), label, entry.get("codim")))
        edges = tuple((int(c), int(p)) for c, p in doc["edges"])
        tree = ComponentTree(int(doc["m_max"]), tuple(vertices), edges)
    except (KeyError, TypeError, ValueError, AssertionError) as exc:
        raise MalformedTreeError(f"tree JSON does not match the schema: {exc!r}") from exc
    return tree


# --------------------------------------------------------------------------
# inversion


@dataclass(frozen=True)
class TreeShape:
    """Unlabelled shape of a tree: a trunk of ``m_max`` levels plus hanging paths."""

    m_max: int
    branches: tuple[Branch, ...]


def tree_shape(tree: ComponentTree) -> TreeShape:
    """Read the trunk and branches from the edge structure alone."""
    by_id = {v.id: v for v in tree.vertices}
    children: dict[int, list[int]] = {v.id: [] for v in tree.vertices}
    parent_of: dict[int, int] = {}
    for child, parent in tree.edges:
        if child in parent_of:
            raise MalformedTreeError(f"vertex {child} has two parents")
        if by_id[child].m != by_id[parent].m + 1:
            raise MalformedTreeError(f"edge {child}->{parent} does not join consecutive levels")
        parent_of[child] = parent
        children[parent].append(child)
    roots = [v.id for v in tree.vertices if v.id not in parent_of]
    if len(roots) != 1 or by_id[roots[0]].m != 1:
        raise MalformedTreeError("expected a single root at level 1")

    # subtree depth and whether a subtree branches anywhere
    branching: dict[int, bool] = {}
    deepest: dict[int, int] = {}
    for v in sorted(tree.vertices, key=lambda v: -v.m):
        kids = children[v.id]
        if len(kids) > 2:
            raise MalformedTreeError(f"vertex {v.id} at level {v.m} has {len(kids)} children")
        branching[v.id] = len(kids) > 1 or any(branching[c] for c in kids)
        deepest[v.id] = max([deepest[c] for c in kids], default=v.m)

    branches = []
    current = roots[0]
    while True:
        kids = children[current]
        if not kids:
            break
        if len(kids) == 2:
            # the trunk keeps branching or reaches deeper; ties are isomorphic
            trunk, other = sorted(kids, key=lambda c: (branching[c], deepest[c]), reverse=True)
            if branching[other]:
                raise MalformedTreeError(f"two branching subtrees below vertex {current}")
            last = deepest[other]
            attach = by_id[current].m
            branches.append(Branch(attach, last - attach, last < tree.m_max))
            current = trunk
        else:
            current = kids[0]
    if by_id[current].m != tree.m_max:
        raise MalformedTreeError(f"trunk stops at level {by_id[current].m}, before m_max = {tree.m_max}")
    return TreeShape(tree.m_max, tuple(sorted(branches)))


def predicted_shape(inv: SemigroupInvariants, m_max: int) -> TreeShape:
    branches = [
        Branch(birth - 1, last - birth + 1, last < m_max)
        for _, _, birth, last in _branch_lifetimes(inv, m_max)
    ]
    return TreeShape(m_max, tuple(sorted(branches)))


def harvest_b0_datum(tree: ComponentTree) -> int:
    """``max{m : codim(B_m) = 2}`` read from vertex annotations."""
    levels = [v.m for v in tree.vertices if v.codim == 2]
    if not levels:
        raise TreeInversionError("no codim annotations equal to 2; pass the datum explicitly")
    return max(levels)


def _trunk_beta1(tree: ComponentTree, beta0: int, below: int) -> tuple[int | None, int]:
    """Read ``bbar1`` off trunk codims on levels ``< below``.

    ``codim(B_m) = 2 + m//bbar0 + m//bbar1`` there, so ``bbar1`` is the first
    level off the multiples of ``bbar0`` where the codim goes up.  Returns
    ``(bbar1 or None, last level inspected)``.
    """
    by_level: dict[int, list[TreeVertex]] = {}
    for v in tree.vertices:
        by_level.setdefault(v.m, []).append(v)
    prev, seen = None, 0
    for m in range(1, below):
        level = by_level.get(m, [])
        if len(level) != 1 or level[0].codim is None:
            break
        codim = level[0].codim
        if prev is not None and codim > prev and m % beta0:
            return m, m
        prev, seen = codim, m
    return None, seen


def _depth_hint(tree: ComponentTree, shape: TreeShape, beta0: int) -> int:
    """Smallest ``m_max`` at which some semigroup consistent with ``tree`` is invertible.

    ``bbar1`` is fixed once the first branch (born at ``n1*bbar1 + e1``) is
    visible.  With ``e1 = 1`` that is enough; otherwise at least one finite
    branch must have ended, which first happens at ``n1*bbar1 + e1 + 1`` (and
    does for ``bbar2 = n1*bbar1 + e1 + 1``).  The bound is minimized over the
    ``bbar1`` still compatible with the tree.  A hidden empty ``C^1`` only
    pushes the true depth further out.
    """
    first_birth = min((b.attach + 1 for b in shape.branches), default=None)
    known, inspected = _trunk_beta1(tree, beta0, first_birth or shape.m_max + 1)
    best = None
    beta1 = known or max(beta0 + 1, inspected + 1)
    # the first visible branch is some C^k with k >= 1 (C^1 may be empty), so bbar1 < first_birth
    while (best is None or beta1 < best) and (first_birth is None or beta1 < first_birth):
        if beta1 % beta0:
            e1 = gcd(beta0, beta1)
            period = beta0 * beta1 // e1
            born = period + e1
            if first_birth is None:
                # with e1 > 1, C^1 is type V and may be empty
                fits = born > shape.m_max or e1 > 1
            else:
                fits = first_birth >= born and (first_birth - e1) % period == 0
            if fits:
                need = born if e1 == 1 else born + 1
                best = need if best is None else min(best, need)
        if known:
            break
        beta1 += 1
    if best is None:
        raise MalformedTreeError("no bbar1 is compatible with the first branch of this tree")
    return max(best, shape.m_max + 1)


class _Unfinished(Exception):
    """Every branch fits the candidate but a generator is still hidden below m_max."""


def _candidate_semigroup(shape: TreeShape, beta0: int, beta1: int) -> tuple[int, ...] | None:
    e1 = gcd(beta0, beta1)
    period = beta0 * beta1 // e1
    finite = []
    for b in shape.branches:
        k, rest = divmod(b.attach + 1 - e1, period)
        if rest or k < 1:
            return None
        if b.complete:
            death = b.attach + b.length + 1
            finite.append(Fraction(death, k))
    gens = [beta0, beta1]
    e, divisor = e1, 1
    for ratio in sorted(set(finite)):
        if e == 1:
            return None
        value = ratio * divisor
        if value.denominator != 1:
            return None
        value = int(value)
        e_next = gcd(e, value)
        if e_next == e:
            return None
        gens.append(value)
        divisor *= e // e_next
        e = e_next
    if e != 1:
        raise _Unfinished
    try:
        validate_semigroup(gens)
    except InvalidSemigroupError:
        return None
    return tuple(gens)


def invert_tree(tree: ComponentTree, b0_datum: int | None = None) -> tuple[int, ...]:
    """Recover ``(bbar0, ..., bbar_g)`` from the tree shape and ``b0_datum``.

    Only the edge structure is read (labels are ignored).  ``bbar0`` is
    ``b0_datum + 1``; every candidate ``bbar1`` is tested by grouping the
    ended branches by the ratio of death level to attach index, which is
    constant within one ``j``, and the result must reproduce the whole shape.
    The answer is returned as soon as exactly one candidate survives, which can
    be well below :func:`min_tree_depth`.
    """
    if b0_datum is None:
        b0_datum = harvest_b0_datum(tree)
    beta0 = b0_datum + 1
    if beta0 < 2:
        raise TreeInversionError(f"datum {b0_datum} gives multiplicity {beta0} < 2")
    shape = tree_shape(tree)
    matches, unfinished = [], False
    # a bbar1 whose first branch is not visible yet cannot be told apart from its neighbours
    for beta1 in range(beta0 + 1, shape.m_max + 1):
        if beta1 % beta0 == 0 or beta0 * beta1 // gcd(beta0, beta1) + gcd(beta0, beta1) > shape.m_max:
            continue
        try:
            gens = _candidate_semigroup(shape, beta0, beta1)
        except _Unfinished:
            unfinished = True
            continue
        if gens is not None and predicted_shape(invariants_from_semigroup(gens), shape.m_max) == shape:
            matches.append(gens)
    if len(matches) == 1:
        return matches[0]
    if len(matches) > 1:
        hint = shape.m_max + 1
        raise InsufficientDepthError(
            f"tree of depth {shape.m_max} is consistent with several semigroups "
            f"{[','.join(map(str, g)) for g in matches]}; need m_max >= {hint}",
            hint,
        )
    if len(shape.branches) < 2 or unfinished:
        hint = _depth_hint(tree, shape, beta0)
        raise InsufficientDepthError(
            f"insufficient attach points at depth {shape.m_max} "
            f"(found {len(shape.branches)} branches); need m_max >= {hint}",
            hint,
        )
    raise MalformedTreeError("no semigroup reproduces this tree shape")
