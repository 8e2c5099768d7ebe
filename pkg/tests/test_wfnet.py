from collections import Counter, deque

import pytest

from declarelax import build_net, check_free_choice, check_soundness, parse_pnml, serialize_pnml
from declarelax.errors import (
    DuplicateLabel,
    MalformedDocument,
    NotAWorkflowNet,
    StateSpaceExceeded,
)


def brute_force_sound(net, cap=50_000):
    """Independent soundness oracle over explicit token-count markings.

    A marking pushing any place beyond one token counts as unsound, in
    line with the safe-net analysis the package performs.
    """
    initial = frozenset({(net.source, 1)})
    final = frozenset({(net.sink, 1)})

    def fire(marking, t):
        counts = Counter(dict(marking))
        for p in net.preset[t.id]:
            if counts[p] < 1:
                return None, False
        for p in net.preset[t.id]:
            counts[p] -= 1
        for p in net.postset[t.id]:
            counts[p] += 1
        unsafe = any(v > 1 for v in counts.values())
        return frozenset((p, v) for p, v in counts.items() if v > 0), unsafe

    seen = {initial}
    queue = deque([initial])
    edges = {}
    fired = set()
    while queue:
        marking = queue.popleft()
        out = []
        for t in net.transitions:
            nxt, unsafe = fire(marking, t)
            if nxt is None:
                continue
            if unsafe:
                return False
            fired.add(t.id)
            out.append(nxt)
            if nxt not in seen:
                if len(seen) >= cap:
                    raise RuntimeError("oracle cap exceeded")
                seen.add(nxt)
                queue.append(nxt)
        edges[marking] = out

    if fired != {t.id for t in net.transitions}:
        return False
    for marking in edges:
        has_sink = any(p == net.sink for p, _ in marking)
        if has_sink and marking != final:
            return False
    reverse = {m: [] for m in edges}
    for m, out in edges.items():
        for nxt in out:
            reverse[nxt].append(m)
    if final not in reverse:
        return False
    good = {final}
    queue = deque([final])
    while queue:
        m = queue.popleft()
        for prev in reverse[m]:
            if prev not in good:
                good.add(prev)
                queue.append(prev)
    return good == set(edges)


class TestParsing:
    def test_running_example(self, procurement_pnml):
        net = parse_pnml(procurement_pnml)
        labeled = [t for t in net.transitions if not t.silent]
        assert len(labeled) == 9
        assert net.labels == {"CPR", "KPR", "CPO", "RG", "PQC", "RI", "SP", "CO", "RR"}
        assert net.source == "i"
        assert net.sink == "o"

    def test_minimal_net(self):
        net = parse_pnml(
            """<pnml><net id="n"><place id="i"/><place id="o"/>
            <transition id="a"><name><text>a</text></name></transition>
            <arc id="x" source="i" target="a"/><arc id="y" source="a" target="o"/>
            </net></pnml>"""
        )
        assert net.places == {"i", "o"}
        assert len(net.transitions) == 1

    def test_two_source_places_rejected(self):
        with pytest.raises(NotAWorkflowNet, match="source"):
            parse_pnml(
                """<pnml><net id="n"><place id="i"/><place id="i2"/><place id="o"/>
                <transition id="a"/>
                <arc id="x" source="i" target="a"/><arc id="y" source="a" target="o"/>
                </net></pnml>"""
            )

    def test_second_sink_rejected(self):
        # i -> a -> p with p distinct from o: two places without postset.
        with pytest.raises(NotAWorkflowNet):
            build_net(["i", "p", "o"], [("a", "a")], [("i", "a"), ("a", "p")])

    def test_disconnected_node_rejected(self):
        # A cycle off to the side has presets/postsets everywhere but no
        # path from i, so the connectedness rule is the one that fires.
        with pytest.raises(NotAWorkflowNet, match="path"):
            build_net(
                ["i", "p", "q", "o"],
                [("a", "a"), ("b", "b"), ("c", "c")],
                [("i", "a"), ("a", "o"), ("p", "b"), ("b", "q"), ("q", "c"), ("c", "p")],
            )

    def test_invalid_xml(self):
        with pytest.raises(MalformedDocument):
            parse_pnml("<pnml><net id='n'>")

    def test_multiple_nets_rejected(self):
        with pytest.raises(MalformedDocument, match="one net"):
            parse_pnml("<pnml><net id='a'/><net id='b'/></pnml>")

    def test_explicit_initial_marking_rejected(self):
        with pytest.raises(MalformedDocument, match="initialMarking"):
            parse_pnml(
                """<pnml><net id="n"><place id="i"><initialMarking><text>1</text></initialMarking></place>
                <place id="o"/><transition id="a"/>
                <arc id="x" source="i" target="a"/><arc id="y" source="a" target="o"/>
                </net></pnml>"""
            )

    def test_duplicate_label_rejected(self):
        with pytest.raises(DuplicateLabel):
            build_net(
                ["i", "p", "o"],
                [("t1", "a"), ("t2", "a")],
                [("i", "t1"), ("t1", "p"), ("p", "t2"), ("t2", "o")],
            )

    def test_duplicate_arc_rejected(self):
        with pytest.raises(NotAWorkflowNet, match="duplicate arc"):
            parse_pnml(
                """<pnml><net id="n"><place id="i"/><place id="o"/><transition id="a"/>
                <arc id="x" source="i" target="a"/><arc id="x2" source="i" target="a"/>
                <arc id="y" source="a" target="o"/></net></pnml>"""
            )

    def test_dangling_arc_rejected(self):
        with pytest.raises(MalformedDocument, match="unknown node"):
            build_net(["i", "o"], [("a", None)], [("i", "a"), ("a", "o"), ("a", "ghost")])

    def test_place_to_place_arc_rejected(self):
        with pytest.raises(NotAWorkflowNet, match="two places"):
            build_net(["i", "p", "o"], [("a", None)], [("i", "p"), ("p", "a"), ("a", "o")])

    def test_transition_without_name_is_silent(self):
        net = parse_pnml(
            """<pnml><net id="n"><place id="i"/><place id="o"/>
            <transition id="t"/><arc id="x" source="i" target="t"/>
            <arc id="y" source="t" target="o"/></net></pnml>"""
        )
        assert net.transitions[0].silent

    def test_empty_name_text_is_silent(self):
        net = parse_pnml(
            """<pnml><net id="n"><place id="i"/><place id="o"/>
            <transition id="t"><name><text>  </text></name></transition>
            <arc id="x" source="i" target="t"/><arc id="y" source="t" target="o"/>
            </net></pnml>"""
        )
        assert net.transitions[0].silent

    def test_namespaced_pnml(self, procurement_pnml):
        namespaced = procurement_pnml.replace(
            "<pnml>", '<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">'
        )
        net = parse_pnml(namespaced)
        assert len(net.labels) == 9

    def test_round_trip(self, procurement_pnml):
        first = parse_pnml(procurement_pnml)
        second = parse_pnml(serialize_pnml(first))
        assert first.places == second.places
        assert set(first.transitions) == set(second.transitions)
        assert first.arcs == second.arcs
        third = parse_pnml(serialize_pnml(second))
        assert second == third


class TestFreeChoice:
    def test_running_example(self, procurement_net):
        assert check_free_choice(procurement_net)

    def test_single_transition(self):
        net = build_net(["i", "o"], [("a", "a")], [("i", "a"), ("a", "o")])
        assert check_free_choice(net)

    def test_shared_place_with_extra_input(self):
        # p feeds t1 and t2, but t2 also needs q: presets intersect, differ.
        net = build_net(
            ["i", "p", "q", "o"],
            [("s", None), ("t1", "a"), ("t2", "b")],
            [
                ("i", "s"),
                ("s", "p"),
                ("s", "q"),
                ("p", "t1"),
                ("t1", "o"),
                ("p", "t2"),
                ("q", "t2"),
                ("t2", "o"),
            ],
        )
        assert not check_free_choice(net)


class TestSoundness:
    def test_running_example_sound(self, procurement_net):
        verdict = check_soundness(procurement_net)
        assert verdict.sound
        assert brute_force_sound(procurement_net)

    def test_minimal_sound(self):
        net = build_net(["i", "o"], [("a", "a")], [("i", "a"), ("a", "o")])
        assert check_soundness(net).sound
        assert brute_force_sound(net)

    def test_and_split_into_xor_join_unsound(self):
        # Both parallel branches feed the same join place: second token
        # breaks safety and completion.
        net = build_net(
            ["i", "p1", "p2", "q", "o"],
            [("split", None), ("a", "a"), ("b", "b"), ("c", "c")],
            [
                ("i", "split"),
                ("split", "p1"),
                ("split", "p2"),
                ("p1", "a"),
                ("a", "q"),
                ("p2", "b"),
                ("b", "q"),
                ("q", "c"),
                ("c", "o"),
            ],
        )
        verdict = check_soundness(net)
        assert not verdict.sound
        assert not brute_force_sound(net)

    def test_xor_split_into_and_join_deadlocks(self):
        net = build_net(
            ["i", "p1", "p2", "o"],
            [("a", "a"), ("b", "b"), ("join", None)],
            [
                ("i", "a"),
                ("a", "p1"),
                ("i", "b"),
                ("b", "p2"),
                ("p1", "join"),
                ("p2", "join"),
                ("join", "o"),
            ],
        )
        verdict = check_soundness(net)
        assert not verdict.sound
        assert verdict.witness is not None
        assert not brute_force_sound(net)

    def test_state_limit(self, procurement_net):
        with pytest.raises(StateSpaceExceeded):
            check_soundness(procurement_net, state_limit=3)

    def test_graph_contains_final_without_successors(self, procurement_net):
        verdict = check_soundness(procurement_net)
        graph = verdict.graph
        assert graph.final in graph.markings
        assert graph.successors(graph.final) == ()

    def test_deterministic_and_order_independent(self, procurement_net):
        from declarelax.wfnet import WorkflowNet

        verdict_a = check_soundness(procurement_net)
        shuffled = WorkflowNet(
            procurement_net.places,
            tuple(reversed(procurement_net.transitions)),
            procurement_net.arcs,
        )
        verdict_b = check_soundness(shuffled)
        assert verdict_a.sound == verdict_b.sound
        assert set(verdict_a.graph.markings) == set(verdict_b.graph.markings)
        for marking in verdict_a.graph.markings:
            assert set(verdict_a.graph.successors(marking)) == set(
                verdict_b.graph.successors(marking)
            )
