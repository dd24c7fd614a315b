import json
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planejets.components import ComponentLabel, Kind, classify_components, death_level
from planejets.semigroup import invariants_from_semigroup
from planejets.tree import (
    InsufficientDepthError,
    MalformedTreeError,
    build_tree,
    export_tree,
    harvest_b0_datum,
    invert_tree,
    min_tree_depth,
    tree_from_json,
    tree_shape,
    tree_to_dot,
    tree_to_json,
)

from conftest import semigroups

INV = invariants_from_semigroup((4, 6, 15))


def _branches(tree):
    return tree_shape(tree).branches


def test_build_4_6_15_depth_30():
    tree = build_tree(INV, 30)
    assert len(tree.vertices) == 36
    assert len(tree.edges) == 35
    branches = _branches(tree)
    finite = [b for b in branches if b.complete]
    infinite = [b for b in branches if not b.complete]
    # one-vertex finite branch born at m=14, hanging off B_13
    assert [(b.attach, b.length) for b in finite] == [(13, 1)]
    # infinite branch hanging off B_25
    assert [b.attach for b in infinite] == [25]


def test_cusp_pure_trunk():
    tree = build_tree(invariants_from_semigroup((2, 3)), 6)
    assert len(tree.vertices) == 6 and len(tree.edges) == 5
    assert all(v.label.kind is Kind.BOUNDARY for v in tree.vertices)


def test_finite_branch_kappa_3():
    tree = build_tree(INV, 45)
    label = ComponentLabel.type_v(2, 3)
    levels = sorted(v.m for v in tree.vertices if v.label == label)
    assert levels == list(range(38, 45))
    ids = {v.id for v in tree.vertices if v.label == label}
    assert sum(1 for c, _ in tree.edges if c in ids) == 7


@pytest.mark.parametrize("gens", [(2, 3), (4, 6, 15), (4, 6, 13), (8, 12, 30, 63)])
def test_level_counts_match_classifier(gens):
    inv = invariants_from_semigroup(gens)
    tree = build_tree(inv, 3 * inv.period)
    counts = tree.level_counts()
    for m in range(1, tree.m_max + 1):
        assert counts[m] == classify_components(inv, m).count
    assert counts[1] == 1


def test_every_vertex_has_one_parent():
    tree = build_tree(INV, 60)
    parents = {}
    for c, p in tree.edges:
        assert c not in parents
        parents[c] = p
    by_id = {v.id: v for v in tree.vertices}
    for v in tree.vertices:
        if v.m > 1:
            assert by_id[parents[v.id]].m == v.m - 1
        else:
            assert v.id not in parents


def test_dot_export():
    dot = tree_to_dot(build_tree(INV, 30))
    assert dot.startswith("digraph") and dot.endswith("}\n")
    assert "rankdir=BT" in dot
    assert len(re.findall(r"^  v\d+ \[", dot, re.M)) == 36
    assert 'id="m14_V_j2_k1"' in dot
    assert "V[κ=1,j=2] m=14 codim=7" in dot
    assert len(re.findall(r"->", dot)) == 35


def test_trunk_only_dot_is_a_path():
    dot = tree_to_dot(build_tree(INV, 10))
    edges = re.findall(r"v(\d+) -> v(\d+)", dot)
    assert [(int(a), int(b)) for a, b in edges] == [(i + 1, i) for i in range(9)]


def test_json_export_and_idempotence():
    tree = build_tree(INV, 30)
    text = tree_to_json(tree)
    assert text.endswith("\n")
    assert len(json.loads(text)["vertices"]) == 36
    assert tree_to_json(tree_from_json(text)) == text
    assert export_tree(tree_from_json(export_tree(tree, "json")), "json") == text


def test_unknown_format():
    with pytest.raises(ValueError, match="unknown tree format"):
        export_tree(build_tree(INV, 3), "png")


def test_malformed_json():
    with pytest.raises(MalformedTreeError):
        tree_from_json('{"m_max": 3}')


@pytest.mark.parametrize(
    "gens, depth, datum", [((4, 6, 15), 32, 3), ((2, 3), 14, 1), ((8, 12, 30, 63), 200, 7)]
)
def test_inversion_examples(gens, depth, datum):
    tree = build_tree(invariants_from_semigroup(gens), depth)
    assert invert_tree(tree, datum) == gens
    assert harvest_b0_datum(tree) == datum
    assert invert_tree(tree) == gens


def test_inversion_ignores_labels():
    tree = build_tree(INV, 32, with_codims=False)
    stripped = tree_from_json(tree_to_json(tree).replace('"kind":"V"', '"kind":"I"').replace('"j":2,', ""))
    assert invert_tree(stripped, 3) == (4, 6, 15)


def test_shallow_tree_reports_depth():
    with pytest.raises(InsufficientDepthError) as info:
        invert_tree(build_tree(INV, 10), 3)
    # (4,6,17) and (4,6,15) both fit; the latter already inverts at 15
    assert info.value.min_m_max == 15
    assert invert_tree(build_tree(INV, 15), 3) == (4, 6, 15)
    # trunk codims pin bbar1 = 5, whose first branch only appears at 21
    with pytest.raises(InsufficientDepthError) as info:
        invert_tree(build_tree(invariants_from_semigroup((4, 5)), 10), 3)
    assert info.value.min_m_max == 21
    with pytest.raises(InsufficientDepthError) as info:
        invert_tree(build_tree(invariants_from_semigroup((4, 5)), 10, with_codims=False), 3)
    assert info.value.min_m_max == 15


def test_unfinished_tree_is_not_malformed():
    # one finite branch has ended but e has not reached 1 yet
    inv = invariants_from_semigroup((8, 12, 30, 63))
    with pytest.raises(InsufficientDepthError):
        invert_tree(build_tree(inv, 40, with_codims=False), 7)


@settings(max_examples=30)
@given(semigroups(max_beta0=10, max_entry=60), st.randoms(use_true_random=False))
def test_depth_hint_is_sound_and_minimal(gens, rnd):
    """Scanning depths upward: every answer is right and every hint is a lower bound."""
    inv = invariants_from_semigroup(gens)
    top = min_tree_depth(inv)
    hints = []
    for depth in range(1, top + 1):
        try:
            found = invert_tree(build_tree(inv, depth, with_codims=False), gens[0] - 1)
        except InsufficientDepthError as exc:
            assert exc.min_m_max > depth
            hints.append(exc.min_m_max)
            continue
        assert found == gens
        break
    else:
        raise AssertionError(f"{gens} not invertible at depth {top}")
    assert all(h <= depth for h in hints)
    for later in (depth + 1, rnd.randint(depth, top), top):
        assert invert_tree(build_tree(inv, later, with_codims=False), gens[0] - 1) == gens
    if depth > 1:
        shallow = rnd.randint(1, depth - 1)
        with pytest.raises(InsufficientDepthError) as info:
            invert_tree(build_tree(inv, shallow), gens[0] - 1)
        assert shallow < info.value.min_m_max <= depth


@given(semigroups(max_entry=200))
def test_round_trip(gens):
    inv = invariants_from_semigroup(gens)
    tree = build_tree(inv, min_tree_depth(inv), with_codims=False)
    assert invert_tree(tree, inv.beta0 - 1) == gens


@given(semigroups(max_entry=200))
def test_paths_end_where_expected(gens):
    inv = invariants_from_semigroup(gens)
    tree = build_tree(inv, min_tree_depth(inv), with_codims=False)
    for b in _branches(tree):
        if b.complete:
            death = b.attach + b.length + 1
            k = (b.attach + 1 - inv.e1) // inv.period
            assert death == death_level(inv, k)
