#!/usr/bin/env python3
"""Processes and canonical visible pomsets.

Unrolls the repeated-conflict net into processes, shows how interleavings
of independent firings collapse into one causal object, and how invisible
events vanish from the extracted pomsets.
"""

import causalnets as cn


def run(net, transitions):
    process = cn.initial_process(net)
    for t in transitions:
        process = cn.extend_process(net, process, t)
    return process


def main():
    net = cn.builtin("repeated_pure_m")

    print("One process per way of resolving conflicts, not per interleaving:")
    ac = run(net, ["a", "c"])
    ca = run(net, ["c", "a"])
    print("  run a.c and run c.a give the same process:", ac.key == ca.key)
    print("  its pomset:")
    print(indent(cn.visible_pomset(ac).text()))

    print("A full run a.c.b ends the net; the pomset keeps a and c unordered:")
    full = run(net, ["a", "c", "b"])
    print("  maximal:", cn.is_maximal(net, full))
    print(indent(cn.visible_pomset(full).text()))

    print("Refining b behind an invisible prefix leaves the pomset unchanged:")
    refined, record = cn.refine_transition(net, "b")
    via_tau = run(refined, ["a", "c", record.new_tau, "b"])
    print("  same pomset:", cn.visible_pomset(via_tau) == cn.visible_pomset(full))
    print()

    print("Everything with at most 2 visible events:")
    for i, entry in enumerate(cn.enumerate_processes(net, 2)):
        flags = "maximal" if entry.maximal else "open"
        block = cn.visible_pomset(entry.process).text().replace("\n", "; ").strip("; ")
        print(f"  process {i}: {flags:8s} {block}")
    print()

    print("The centralised version serialises decisions through a lock, which")
    print("shows up as new cross-orderings between a- and c-events:")
    central = cn.builtin("centralised")
    crossing = set()
    for entry in cn.enumerate_processes(central, 2):
        p = cn.visible_pomset(entry.process)
        if any({p.labels[u], p.labels[v]} == {"a", "c"} for u, v in p.order):
            crossing.add(p)
    for p in sorted(crossing):
        print(indent(p.text()))


def indent(block):
    return "".join("    " + line + "\n" for line in block.splitlines())


if __name__ == "__main__":
    main()
