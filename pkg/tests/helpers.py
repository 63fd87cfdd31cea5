"""Independent second routes used by several test modules."""
import networkx as nx

from mincut_sensitivity.graph import Multigraph


def nx_flow_value(g: Multigraph, s: int, t: int) -> int:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    for _, u, v in g.edges:
        cap = h[u][v]["capacity"] + 1 if h.has_edge(u, v) else 1
        h.add_edge(u, v, capacity=cap)
    return int(nx.maximum_flow_value(h, s, t))


# lines printed by the acceptance suite, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


class Tracked:
    """Label proxy recording (owner, attribute) for every field read."""

    def __init__(self, label, log):
        object.__setattr__(self, "_label", label)
        object.__setattr__(self, "_log", log)

    def __getattr__(self, name):
        label = object.__getattribute__(self, "_label")
        object.__getattribute__(self, "_log").append((label.owner, name))
        return getattr(label, name)


def reachable(roots):
    """Every object reachable from `roots` through references (classes excluded)."""
    import gc

    seen, stack = {}, list(roots)
    while stack:
        obj = stack.pop()
        if id(obj) in seen or isinstance(obj, type):
            continue
        seen[id(obj)] = obj
        stack.extend(gc.get_referents(obj))
    return list(seen.values())
