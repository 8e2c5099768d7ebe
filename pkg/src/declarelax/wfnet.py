"""Workflow nets: PNML parsing, structural validation, and soundness analysis.

A workflow net is a Petri net with a unique source place, a unique sink
place, and every node on a path between the two. All analysis in this
package assumes safe nets (at most one token per place), so markings are
represented as frozensets of marked places.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DuplicateLabel,
    MalformedDocument,
    NotAWorkflowNet,
    StateSpaceExceeded,
)

# A marking of a safe net: the set of places holding one token.
Marking = frozenset

DEFAULT_STATE_LIMIT = 100_000


@dataclass(frozen=True)
class Transition:
    id: str
    label: str | None = None

    @property
    def silent(self) -> bool:
        return self.label is None


@dataclass(frozen=True)
class WorkflowNet:
    """Immutable net structure. Construction validates all invariants."""

    places: frozenset[str]
    transitions: tuple[Transition, ...]
    arcs: frozenset[tuple[str, str]]

    def __post_init__(self):
        _validate(self)

    @cached_property
    def transition_by_id(self) -> Mapping[str, Transition]:
        return {t.id: t for t in self.transitions}

    @cached_property
    def preset(self) -> Mapping[str, frozenset[str]]:
        pre: dict[str, set[str]] = {n: set() for n in self._nodes}
        for src, dst in self.arcs:
            pre[dst].add(src)
        return {n: frozenset(s) for n, s in pre.items()}

    @cached_property
    def postset(self) -> Mapping[str, frozenset[str]]:
        post: dict[str, set[str]] = {n: set() for n in self._nodes}
        for src, dst in self.arcs:
            post[src].add(dst)
        return {n: frozenset(s) for n, s in post.items()}

    @property
    def _nodes(self) -> set[str]:
        return set(self.places) | {t.id for t in self.transitions}

    @cached_property
    def source(self) -> str:
        return next(p for p in self.places if not self.preset[p])

    @cached_property
    def sink(self) -> str:
        return next(p for p in self.places if not self.postset[p])

    @cached_property
    def labels(self) -> frozenset[str]:
        return frozenset(t.label for t in self.transitions if t.label is not None)

    @property
    def initial_marking(self) -> Marking:
        return frozenset({self.source})

    @property
    def final_marking(self) -> Marking:
        return frozenset({self.sink})

    def enabled(self, marking: Marking) -> list[Transition]:
        return [t for t in self.transitions if self.preset[t.id] <= marking]

    def fire(self, marking: Marking, transition_id: str) -> Marking:
        """Fire a transition; raises if disabled or if safety would break."""
        pre = self.preset[transition_id]
        post = self.postset[transition_id]
        if not pre <= marking:
            raise ValueError(f"transition {transition_id!r} not enabled")
        remainder = marking - pre
        if remainder & post:
            raise ValueError(f"firing {transition_id!r} would exceed one token per place")
        return remainder | post


def build_net(
    places: Iterable[str],
    transitions: Iterable[tuple[str, str | None]],
    arcs: Iterable[tuple[str, str]],
) -> WorkflowNet:
    """Convenience constructor from plain collections; validates on build."""
    trans = tuple(
        sorted((Transition(tid, label) for tid, label in transitions), key=lambda t: t.id)
    )
    return WorkflowNet(frozenset(places), trans, frozenset(arcs))


def _validate(net: WorkflowNet) -> None:
    tids = {t.id for t in net.transitions}
    if net.places & tids:
        shared = sorted(net.places & tids)[0]
        raise MalformedDocument(f"identifier {shared!r} is both a place and a transition")
    for node in net.places | tids:
        if not node:
            raise MalformedDocument("empty identifier")

    for src, dst in net.arcs:
        if src in net.places and dst in net.places:
            raise NotAWorkflowNet(f"arc {src!r}->{dst!r} connects two places", offending=src)
        if src in tids and dst in tids:
            raise NotAWorkflowNet(f"arc {src!r}->{dst!r} connects two transitions", offending=src)
        if src not in net.places | tids or dst not in net.places | tids:
            raise MalformedDocument(f"arc {src!r}->{dst!r} references an unknown node")

    preset: dict[str, set[str]] = {n: set() for n in net.places | tids}
    postset: dict[str, set[str]] = {n: set() for n in net.places | tids}
    for src, dst in net.arcs:
        preset[dst].add(src)
        postset[src].add(dst)

    sources = sorted(p for p in net.places if not preset[p])
    sinks = sorted(p for p in net.places if not postset[p])
    if len(sources) != 1:
        raise NotAWorkflowNet(
            f"expected exactly one source place, found {sources or 'none'}",
            offending=sources[0] if sources else None,
        )
    if len(sinks) != 1:
        raise NotAWorkflowNet(
            f"expected exactly one sink place, found {sinks or 'none'}",
            offending=sinks[0] if sinks else None,
        )

    source, sink = sources[0], sinks[0]
    forward = _closure(source, postset)
    backward = _closure(sink, preset)
    for node in sorted(net.places | tids):
        if node not in forward or node not in backward:
            raise NotAWorkflowNet(
                f"node {node!r} is not on a path from {source!r} to {sink!r}",
                offending=node,
            )

    seen: dict[str, str] = {}
    for t in net.transitions:
        if t.label is None:
            continue
        if t.label in seen:
            raise DuplicateLabel(
                f"label {t.label!r} used by transitions {seen[t.label]!r} and {t.id!r}"
            )
        seen[t.label] = t.id


def _closure(start: str, step: Mapping[str, set[str]]) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in step[node]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


# ---------------------------------------------------------------------------
# PNML subset


def parse_pnml(document: str) -> WorkflowNet:
    """Parse the PNML subset: net / place / transition / arc elements.

    A transition's activity label comes from its name/text child; a
    transition without one is silent. The initial marking is implicit
    (one token on the unique source place), so explicit initialMarking
    elements are rejected.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise MalformedDocument(f"invalid XML: {exc}") from exc

    nets = [el for el in _walk(root) if _tag(el) == "net"]
    if _tag(root) == "net":
        nets = [root]
    if len(nets) != 1:
        raise MalformedDocument(f"expected exactly one net element, found {len(nets)}")
    net_el = nets[0]

    places: list[str] = []
    transitions: list[tuple[str, str | None]] = []
    arcs: list[tuple[str, str]] = []
    seen_ids: set[str] = set()

    for el in _walk(net_el):
        tag = _tag(el)
        if tag == "initialmarking":
            raise MalformedDocument("explicit initialMarking elements are not supported")
        if tag not in ("place", "transition", "arc"):
            continue
        if tag == "arc":
            src, dst = el.get("source"), el.get("target")
            if not src or not dst:
                raise MalformedDocument("arc without source/target attribute")
            if (src, dst) in arcs:
                raise NotAWorkflowNet(f"duplicate arc {src!r}->{dst!r}", offending=src)
            arcs.append((src, dst))
            continue
        node_id = el.get("id")
        if not node_id:
            raise MalformedDocument(f"{tag} element without id attribute")
        if node_id in seen_ids:
            raise MalformedDocument(f"duplicate identifier {node_id!r}")
        seen_ids.add(node_id)
        if tag == "place":
            places.append(node_id)
        else:
            transitions.append((node_id, _label_of(el)))

    return build_net(places, transitions, arcs)


def serialize_pnml(net: WorkflowNet) -> str:
    """Write the net back in the same PNML subset (deterministic order)."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<pnml>", '  <net id="net1">']
    for p in sorted(net.places):
        lines.append(f'    <place id="{_escape(p)}"/>')
    for t in net.transitions:
        if t.label is None:
            lines.append(f'    <transition id="{_escape(t.id)}"/>')
        else:
            lines.append(f'    <transition id="{_escape(t.id)}">')
            lines.append(f"      <name><text>{_escape(t.label)}</text></name>")
            lines.append("    </transition>")
    for i, (src, dst) in enumerate(sorted(net.arcs), start=1):
        lines.append(f'    <arc id="a{i}" source="{_escape(src)}" target="{_escape(dst)}"/>')
    lines.extend(["  </net>", "</pnml>", ""])
    return "\n".join(lines)


def _walk(root: ET.Element):
    for el in root.iter():
        if el is not root:
            yield el


def _tag(el: ET.Element) -> str:
    return el.tag.rsplit("}", 1)[-1].lower()


def _label_of(transition_el: ET.Element) -> str | None:
    for child in transition_el:
        if _tag(child) != "name":
            continue
        for sub in child:
            if _tag(sub) == "text":
                text = (sub.text or "").strip()
                return text or None
        text = (child.text or "").strip()
        return text or None
    return None


def _escape(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


# ---------------------------------------------------------------------------
# Reachability and soundness


@dataclass(frozen=True)
class ReachabilityGraph:
    """Explicit reachability graph over safe markings."""

    initial: Marking
    final: Marking
    edges: Mapping[Marking, tuple[tuple[str, Marking], ...]]

    @property
    def markings(self):
        return self.edges.keys()

    def successors(self, marking: Marking) -> tuple[tuple[str, Marking], ...]:
        return self.edges[marking]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class SoundnessVerdict:
    sound: bool
    graph: ReachabilityGraph
    reason: str | None = None
    witness: Marking | None = field(default=None)

    def __bool__(self) -> bool:
        return self.sound


def check_free_choice(net: WorkflowNet) -> bool:
    """Extended free-choice: intersecting transition presets must be equal."""
    presets = [net.preset[t.id] for t in net.transitions]
    for i, pre_a in enumerate(presets):
        for pre_b in presets[i + 1 :]:
            if pre_a & pre_b and pre_a != pre_b:
                return False
    return True


def check_soundness(net: WorkflowNet, state_limit: int = DEFAULT_STATE_LIMIT) -> SoundnessVerdict:
    """Explore the reachability graph and decide classical soundness.

    Sound iff the final marking is reachable from every reachable marking,
    the sink place is never marked together with another place, and every
    transition fires somewhere. Exploration treats a marking that would
    put two tokens on one place as a soundness failure (safe-net analysis),
    and raises StateSpaceExceeded beyond `state_limit` markings.
    """
    initial = net.initial_marking
    edges: dict[Marking, tuple[tuple[str, Marking], ...]] = {}
    fired: set[str] = set()
    unsafe: tuple[Marking, str] | None = None

    ordered = sorted(net.transitions, key=lambda t: t.id)
    queue = deque([initial])
    discovered = {initial}
    while queue:
        marking = queue.popleft()
        out: list[tuple[str, Marking]] = []
        for t in ordered:
            pre = net.preset[t.id]
            if not pre <= marking:
                continue
            remainder = marking - pre
            post = net.postset[t.id]
            if remainder & post:
                unsafe = (marking, t.id)
                continue
            nxt = remainder | post
            fired.add(t.id)
            out.append((t.id, nxt))
            if nxt not in discovered:
                if len(discovered) >= state_limit:
                    raise StateSpaceExceeded(state_limit)
                discovered.add(nxt)
                queue.append(nxt)
        edges[marking] = tuple(out)

    graph = ReachabilityGraph(initial=initial, final=net.final_marking, edges=edges)

    if unsafe is not None:
        marking, tid = unsafe
        return SoundnessVerdict(
            False, graph, reason=f"firing {tid!r} would exceed one token per place", witness=marking
        )

    for marking in edges:
        if net.sink in marking and len(marking) > 1:
            return SoundnessVerdict(
                False, graph, reason="sink place marked together with other places", witness=marking
            )

    reach_final = _co_reachable(graph)
    for marking in edges:
        if marking not in reach_final:
            return SoundnessVerdict(
                False, graph, reason="final marking unreachable from here", witness=marking
            )

    for t in ordered:
        if t.id not in fired:
            return SoundnessVerdict(False, graph, reason=f"transition {t.id!r} never fires")

    return SoundnessVerdict(True, graph)


def _co_reachable(graph: ReachabilityGraph) -> set[Marking]:
    reverse: dict[Marking, list[Marking]] = {m: [] for m in graph.edges}
    for m, out in graph.edges.items():
        for _, nxt in out:
            reverse[nxt].append(m)
    if graph.final not in reverse:
        return set()
    seen = {graph.final}
    queue = deque([graph.final])
    while queue:
        m = queue.popleft()
        for prev in reverse[m]:
            if prev not in seen:
                seen.add(prev)
                queue.append(prev)
    return seen
