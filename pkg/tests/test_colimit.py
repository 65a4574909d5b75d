"""Tests for diagram gluing and the density of the canonical generators."""

from __future__ import annotations

import itertools

import pytest

from tapecat.colimit import (
    Disconnected,
    GlueError,
    LabelConflict,
    MalformedDiagram,
    NotLinear,
    TapeDiagram,
    canonical_diagram,
    density_check,
    glue,
    glue_cells,
)
from tapecat.fincat import canonical_dense_subcategory
from tapecat.tape import DEFAULT_ALPHABET, Occurrence, all_strings, compose

from .support import brute_offsets, cocones_to, count_mediators, occ, ts


@pytest.fixture(scope="module")
def dense():
    return canonical_dense_subcategory(DEFAULT_ALPHABET)


def diagram(nodes, edges):
    node_list = [(i, ts(v)) for i, v in nodes]
    by_id = dict(node_list)
    edge_list = [(s, d, Occurrence(by_id[s], by_id[d], off)) for s, d, off in edges]
    return TapeDiagram.build(DEFAULT_ALPHABET, node_list, edge_list)


SHARED_CELL = diagram(
    [("n1", "#."), ("n2", ".#"), ("n3", ".")],
    [("n3", "n1", 1), ("n3", "n2", 0)],
)


class TestGlue:
    def test_overlap_through_shared_cell(self):
        result = glue(SHARED_CELL)
        assert result.value == ts("#.#")
        assert result.legs["n1"] == occ("#.", "#.#", 0)
        assert result.legs["n2"] == occ(".#", "#.#", 1)
        assert result.legs["n3"] == occ(".", "#.#", 1)

    def test_shared_cell_result_is_universal(self):
        # brute-force cocone search over every candidate string
        values = ["#.", ".#", "."]
        edges = [(2, 0, 1), (2, 1, 0)]
        legs = [0, 1, 1]
        seen = 0
        for w in all_strings(DEFAULT_ALPHABET, 5):
            for cocone in cocones_to(values, edges, w.cells):
                assert count_mediators(values, "#.#", legs, cocone, w.cells) == 1
                seen += 1
        assert seen > 0

    def test_single_node(self):
        result = glue(diagram([("a", "..#")], []))
        assert result.value == ts("..#")
        assert result.legs["a"] == occ("..#", "..#", 0)

    def test_empty_diagram(self):
        result = glue(TapeDiagram.build(DEFAULT_ALPHABET, [], []))
        assert result.value == ts("")

    def test_empty_nodes_are_absorbed(self):
        d = diagram([("e", ""), ("n", "#")], [("e", "n", 0)])
        result = glue(d)
        assert result.value == ts("#")
        assert result.legs["e"] == occ("", "#", 0)

    def test_label_conflict_on_forced_clash(self):
        # a shared single-cell node mapped into both '#' and '.': the second
        # edge cannot exist as a real occurrence, so it is injected raw
        nodes = [("n1", ts("#")), ("n2", ts(".")), ("n3", ts("#"))]
        edges = [
            ("n3", "n1", Occurrence(ts("#"), ts("#"), 0)),
            ("n3", "n2", Occurrence.unchecked(ts("#"), ts("."), 0)),
        ]
        with pytest.raises(LabelConflict) as exc:
            glue(TapeDiagram.build(DEFAULT_ALPHABET, nodes, edges))
        assert set(exc.value.nodes) <= {"n1", "n2", "n3"} and exc.value.nodes

    def test_not_linear_on_branch(self):
        d = diagram(
            [("s", "#"), ("a", "#."), ("b", "##")],
            [("s", "a", 0), ("s", "b", 0)],
        )
        with pytest.raises(NotLinear):
            glue(d)

    def test_not_linear_on_cycle(self):
        # gluing '#' onto both cells of '##' folds the node onto itself
        d = diagram([("s", "#"), ("a", "##")], [("s", "a", 0), ("s", "a", 1)])
        with pytest.raises(NotLinear):
            glue(d)

    def test_disconnected(self):
        with pytest.raises(Disconnected) as exc:
            glue(diagram([("a", "#"), ("b", ".")], []))
        assert set(exc.value.nodes) == {"a", "b"}

    def test_malformed_edge_rejected(self):
        nodes = [("a", ts("#")), ("b", ts("##"))]
        bad = Occurrence.unchecked(ts("#"), ts("##"), 5)
        with pytest.raises(MalformedDiagram):
            glue(TapeDiagram.build(DEFAULT_ALPHABET, nodes, [("a", "b", bad)]))

    def test_duplicate_node_ids_rejected(self):
        with pytest.raises(MalformedDiagram):
            glue(diagram([("a", "#"), ("a", "#")], []))

    def test_reorder_invariance(self):
        base = glue(SHARED_CELL)
        for node_perm in itertools.permutations(SHARED_CELL.nodes):
            for edge_perm in itertools.permutations(SHARED_CELL.edges):
                d = TapeDiagram(DEFAULT_ALPHABET, tuple(node_perm), tuple(edge_perm))
                result = glue(d)
                assert result.value == base.value
                assert result.legs == base.legs

    def test_legs_commute_with_edges(self):
        result = glue(SHARED_CELL)
        for e in SHARED_CELL.edges:
            assert compose(e.occ, result.legs[e.dst]) == result.legs[e.src]

    def test_round_trip_serialization(self):
        text = SHARED_CELL.dumps()
        again = TapeDiagram.loads(text, DEFAULT_ALPHABET)
        assert again == SHARED_CELL
        assert again.dumps() == text
        d = diagram([("e", "")], [])
        assert TapeDiagram.loads(d.dumps(), DEFAULT_ALPHABET) == d


class TestGlueUniversalitySmall:
    def test_exhaustive_small_diagrams(self):
        # every diagram with <= 3 nodes of length <= 2 and <= 2 joining edges:
        # when glue succeeds, the result must be the universal cocone.
        # (empty-source and identity self-edges never join cells, so they are
        # not enumerated as joining edges)
        strings = [s.cells for s in all_strings(DEFAULT_ALPHABET, 2) if s.cells]
        checked = 0
        for n in range(1, 4):
            for values in itertools.combinations_with_replacement(strings, n):
                available = [
                    (i, j, off)
                    for i in range(n)
                    for j in range(n)
                    if i != j
                    for off in brute_offsets(values[i], values[j])
                ]
                for k in range(3):
                    for edges in itertools.combinations(available, k):
                        try:
                            value, legs = glue_cells(list(values), list(edges))
                        except GlueError:
                            continue
                        total = sum(len(v) for v in values)
                        for w in all_strings(DEFAULT_ALPHABET, total):
                            for cocone in cocones_to(list(values), list(edges), w.cells):
                                assert count_mediators(list(values), value, legs,
                                                       cocone, w.cells) == 1
                        checked += 1
        assert checked > 100


class TestDensity:
    def test_double_black(self, dense):
        assert density_check(ts("##"), dense).ok

    def test_empty_string(self, dense):
        assert density_check(ts(""), dense).ok

    def test_sweep_up_to_6(self, dense):
        for x in all_strings(DEFAULT_ALPHABET, 6):
            verdict = density_check(x, dense)
            assert verdict.ok, f"{x}: {verdict.detail}"

    def test_single_cell_legs_enumerate_cells(self, dense):
        x = ts("#..#")
        d = canonical_diagram(x, dense)
        result = glue(d)
        single_legs = {
            result.legs[n.id].offset for n in d.nodes if n.value.length == 1
        }
        assert single_legs == set(range(x.length))
        for n in d.nodes:
            if n.value.length == 1:
                assert result.value.cells[result.legs[n.id].offset] == n.value.cells

    def test_diagnostic_on_failure(self, dense):
        # a corrupted diagram (node deleted) must fail with a diagnostic,
        # exercised through the underlying glue on a doctored canonical diagram
        x = ts("##")
        d = canonical_diagram(x, dense)
        kept = [n for n in d.nodes if n.id != "#@0"]
        kept_ids = {n.id for n in kept}
        edges = [e for e in d.edges if e.src in kept_ids and e.dst in kept_ids]
        broken = TapeDiagram(DEFAULT_ALPHABET, tuple(kept), tuple(edges))
        result = glue(broken)  # still glues: the pair node covers both cells
        assert result.value == x
