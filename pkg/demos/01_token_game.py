#!/usr/bin/env python3
"""Dependency-marking token game, from text to weak steps.

Walks through the basics: parse a net from its textual form, fire steps
while watching the dependency sets grow, and query the labelled and weak
step relations.
"""

import causalnets as cn

TEXT = """\
# two independent loops feeding a common final action
place p *
place q *
trans a : a
trans b : b
trans c : c
arc p -> a
arc a -> p
arc p -> b
arc q -> b
arc q -> c
arc c -> q
"""


def show(title, marking):
    print(f"  {title:28s} {marking.text() or '(empty)'}")


def main():
    net = cn.parse_net(TEXT)
    print("parsed net:", sorted(net.places), sorted(net.transitions))
    print("contact-free:", cn.check_contact_free(net).ok)
    print()

    print("Tokens remember which visible labels produced them:")
    m0 = cn.initial_dependency_marking(net)
    show("initially", m0)
    m1 = cn.fire_step(net, m0, {"a"})
    show("after firing a", m1)
    m2 = cn.fire_step(net, m1, {"c"})
    show("after firing c", m2)
    m3 = cn.fire_step(net, m2, {"a", "c"})
    show("after the step {a,c}", m3)
    m4 = cn.fire_step(net, m3, {"b"})
    show("after b consumed both", m4)
    print()

    print("The step {a,c} is one simultaneous move; {a,b} conflicts on p:")
    print("  step_enabled {a,c}:", cn.step_enabled(net, m0, {"a", "c"}))
    print("  step_enabled {a,b}:", cn.step_enabled(net, m0, {"a", "b"}))
    print()

    print("Label-indexed and weak variants:")
    print("  successors under label multiset {a,c}:",
          len(cn.labelled_step(net, m0, ["a", "c"])))
    print("  markings after weak 'a a b':",
          [m.text() or "(empty)" for m in cn.weak_step(net, m0, ["a", "a", "b"])])
    print("  markings after weak 'b a':",
          cn.weak_step(net, m0, ["b", "a"]) or "none - b ends the net")
    print()

    graph = cn.explore_reachable(net, dependency=True)
    print(f"Dependency reach graph: {len(graph.nodes)} markings "
          f"(bound {graph.state_bound}), {len(graph.edges)} step edges")
    print(graph.to_text())


if __name__ == "__main__":
    main()
