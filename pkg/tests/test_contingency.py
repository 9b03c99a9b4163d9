import random
from fractions import Fraction

from tacause.contingency import (build_actual_network, build_clock_wrapper,
                                 build_location_contingency, copy_name, split_copy)
from tacause.model import State, base_location, delay_successor, transitions, _fire
from tacause.runs import local_locations


def test_copy_names():
    assert split_copy(copy_name("crit1", 3)) == ("crit1", 3)


def test_location_contingency_shape(running):
    net, run = running
    comp = net.components[1]
    a2 = build_location_contingency(comp, run, 2)
    # finite projection of length 2: copies 0, 1 and a terminal copy 2
    assert {split_copy(q)[1] for q in a2.locations} == {0, 1, 2}
    locs = local_locations(run, 2)
    jumps = 0
    for f in a2.edges:
        src, i = split_copy(f.src)
        dst, j = split_copy(f.dst)
        assert j == min(i + 1, 2)
        normal = [e for e in comp.outgoing(src)
                  if (e.label, e.guard, e.update) == (f.label, f.guard, f.update)]
        assert normal
        if all(e.dst != dst for e in normal):
            assert dst == locs[j]
            jumps += 1
    assert jumps


def test_clock_wrapper(running):
    net, run = running
    w = build_clock_wrapper(net, run)
    assert w.length == 5 and w.loop_start == 4
    assert [w.next_position(p) for p in range(5)] == [1, 2, 3, 4, 4]
    assert w.reset_at(3) == {"x1": 3, "x2": 2}


def replay_component(cont, original, edges) -> bool:
    """Follow ``edges`` of ``original`` through the copies of ``cont``."""
    current = {cont.initial}
    for e in edges:
        nxt = set()
        for q in current:
            for f in cont.outgoing(q):
                if (split_copy(f.dst)[0] == e.dst and f.label == e.label
                        and f.guard == e.guard and f.update == e.update):
                    nxt.add(f.dst)
        if not nxt:
            return False
        current = nxt
    return True


def random_edge_walk(rng, comp, steps):
    q, out = comp.initial, []
    for _ in range(steps):
        es = comp.outgoing(q)
        if not es:
            break
        e = rng.choice(es)
        out.append(e)
        q = e.dst
    return out


def test_random_walks_replay(running, fischer_rho2):
    rng = random.Random(7)
    for net, run in (running, fischer_rho2):
        for k, comp in enumerate(net.components, 1):
            cont = build_location_contingency(comp, run, k)
            for _ in range(20):
                assert replay_component(cont, comp, random_edge_walk(rng, comp, 12))


def test_actual_network_without_interventions_replays_run(running):
    net, run = running
    act = build_actual_network(net, run, [])
    state = State(tuple(c.initial for c in act.network.components),
                  {x: Fraction(0) for x in sorted(act.network.all_clocks())}, {})
    for j, step in enumerate(run.steps):
        state = delay_successor(state, step.delay, act.network)
        options = [_fire(act.network, state, mv) for a, mv in transitions(act.network, state)
                   if a == step.action]
        options = [s for s in options if s is not None and
                   tuple(base_location(q) for q in s.locations) == run.states[j + 1].locations]
        assert options
        state = options[0]
