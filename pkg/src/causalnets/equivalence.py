"""Bounded completed-pomset comparison and local-deadlock detection.

Two nets are compared through the visible pomsets of their processes up to
a visible-event bound: pomsets of quiescent (maximal) processes must match,
as must the pomsets of still-running processes holding exactly the bounded
number of visible events, and neither net may diverge where the other does
not.  Verdicts are always relative to the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .model import DEFAULT_STATE_LIMIT, TAU, LabelledNet, render_marking
from .semantics import LimitExceededError, explore_reachable
from .unfolding import Pomset, enumerate_processes, visible_pomset


@dataclass(frozen=True)
class BoundedObservation:
    """What a net shows at visible-event bound ``bound``.

    ``complete`` holds pomsets of maximal processes (at most ``bound``
    visible events); ``partial`` holds pomsets of non-maximal processes with
    exactly ``bound`` visible events; ``divergent`` reports whether some
    branch was cut off by the event limit instead of quiescence.
    """

    complete: frozenset[Pomset]
    partial: frozenset[Pomset]
    bound: int
    divergent: bool


@dataclass(frozen=True)
class Witness:
    """A pomset present on one side only (``side`` is ``left`` or ``right``),
    in the named category.  For a divergence mismatch the pomset is empty and
    ``side`` names the diverging net."""

    pomset: Pomset
    side: str
    kind: str


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    bound: int
    witness: Witness | None = None


@dataclass(frozen=True)
class LocalDeadlockWitness:
    """A hidden step that permanently disabled a visible label.

    After firing ``trace`` from the initial marking the net sits at
    ``marking``; the trace's last transition is invisible, ``dead_label``
    was enabled immediately before it, no marking reachable from ``marking``
    enables it again, and every label in ``live_labels`` still is enabled
    somewhere reachable."""

    trace: tuple[str, ...]
    marking: frozenset[str]
    dead_label: str
    live_labels: frozenset[str]


def bounded_observation(
    net: LabelledNet, k: int, event_limit: int | None = None
) -> BoundedObservation:
    """Collect the complete and partial pomsets of a net at bound ``k``."""
    complete: set[Pomset] = set()
    partial: set[Pomset] = set()
    divergent = False
    for entry in enumerate_processes(net, k, event_limit):
        if entry.saturated:
            divergent = True
        if entry.maximal:
            complete.add(visible_pomset(entry.process))
        elif entry.process.visible_count == k:
            partial.add(visible_pomset(entry.process))
    return BoundedObservation(frozenset(complete), frozenset(partial), k, divergent)


def compare(
    net_a: LabelledNet, net_b: LabelledNet, k: int, event_limit: int | None = None
) -> EquivalenceVerdict:
    """Compare two nets' bounded observations.

    The verdict is equivalent-at-bound when the complete sets, the partial
    sets, and the divergence flags all coincide; otherwise the witness comes
    from the first differing category (complete before partial before
    divergence) and is the least differing pomset.
    """
    obs_a = bounded_observation(net_a, k, event_limit)
    obs_b = bounded_observation(net_b, k, event_limit)
    for kind, left, right in (
        ("complete", obs_a.complete, obs_b.complete),
        ("partial", obs_a.partial, obs_b.partial),
    ):
        if left != right:
            pomset = min(left ^ right)
            side = "left" if pomset in left else "right"
            return EquivalenceVerdict(False, k, Witness(pomset, side, kind))
    if obs_a.divergent != obs_b.divergent:
        side = "left" if obs_a.divergent else "right"
        return EquivalenceVerdict(False, k, Witness(Pomset((), ()), side, "divergence"))
    return EquivalenceVerdict(True, k)


def verdict_text(verdict: EquivalenceVerdict) -> str:
    if verdict.equivalent:
        return f"EQUIVALENT (bound {verdict.bound})\n"
    w = verdict.witness
    return (
        f"INEQUIVALENT (bound {verdict.bound})\n"
        f"witness ({w.side}, {w.kind}):\n" + w.pomset.text()
    )


def find_local_deadlock(
    net: LabelledNet, state_limit: int = DEFAULT_STATE_LIMIT
) -> list[LocalDeadlockWitness]:
    """Find hidden steps after which a previously enabled visible label can
    never fire again while some other visible label still can.

    Works on the plain reachability graph: a label is live from a marking
    when some reachable marking enables a transition carrying it.  Only
    invisible firings count as disabling steps; losing an action to a
    visible alternative is ordinary conflict resolution, not a deadlock.
    """
    graph = explore_reachable(net, dependency=False, state_limit=state_limit)
    if graph.limit_exceeded:
        raise LimitExceededError(f"more than {state_limit} reachable markings")
    n = len(graph.nodes)
    single: list[list[tuple[str, int]]] = [[] for _ in range(n)]
    for e in graph.edges:
        if len(e.step) == 1:
            single[e.source].append((next(iter(e.step)), e.target))
    for successors in single:
        successors.sort()

    enabled_labels = [
        frozenset(net.labelling[t] for t, _ in single[i] if net.labelling[t] != TAU)
        for i in range(n)
    ]
    live: list[frozenset[str]] = [frozenset()] * n
    for i in range(n):
        seen = {i}
        stack = [i]
        acc: set[str] = set()
        while stack:
            j = stack.pop()
            acc |= enabled_labels[j]
            for _, k in single[j]:
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        live[i] = frozenset(acc)

    parent: dict[int, tuple[int, str] | None] = {0: None}
    order = [0]
    for i in order:
        for t, j in single[i]:
            if j not in parent:
                parent[j] = (i, t)
                order.append(j)

    def trace_to(i: int) -> tuple[str, ...]:
        steps: list[str] = []
        while parent[i] is not None:
            i, t = parent[i]
            steps.append(t)
        return tuple(reversed(steps))

    witnesses: dict[tuple[int, str], LocalDeadlockWitness] = {}
    for i in range(n):
        for t, j in single[i]:
            if net.labelling[t] != TAU:
                continue
            for x in sorted(enabled_labels[i]):
                if x in live[j] or not live[j]:
                    continue
                key = (j, x)
                if key not in witnesses:
                    witnesses[key] = LocalDeadlockWitness(
                        trace=trace_to(i) + (t,),
                        marking=graph.nodes[j],
                        dead_label=x,
                        live_labels=live[j],
                    )
    return sorted(
        witnesses.values(), key=lambda w: (len(w.trace), w.trace, w.dead_label)
    )


def deadlock_text(witnesses: Iterable[LocalDeadlockWitness]) -> str:
    witnesses = list(witnesses)
    if not witnesses:
        return "no local deadlock\n"
    return "".join(
        f"deadlock: trace=[{','.join(w.trace)}] marking={render_marking(w.marking)} "
        f"dead={w.dead_label} live={{{','.join(sorted(w.live_labels))}}}\n"
        for w in witnesses
    )
