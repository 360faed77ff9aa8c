import pytest

from ndfgraph.graph import (
    Graph,
    bundled_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    dual_barabasi_albert,
    load_edge_list,
    path_graph,
    star_graph,
)


def labelled_path_graph(attach_to: int) -> Graph:
    """Path 1-2-...-9 plus a pendant node 10 on ``attach_to`` (labels as written)."""
    lines = [f"{i} {i + 1}" for i in range(1, 9)] + [f"{attach_to} 10"]
    g, _ = load_edge_list("\n".join(lines))
    return g


def g1() -> Graph:
    return labelled_path_graph(5)


def g2() -> Graph:
    return labelled_path_graph(4)


def node_of(g: Graph, label) -> int:
    return g.labels.index(label)


def two_triangles() -> Graph:
    return disjoint_union(cycle_graph(3), cycle_graph(3))


def star_with_isolated() -> Graph:
    return Graph.from_edges(6, [(0, 1), (0, 2), (0, 3)])


SMALL_GRAPHS = {
    "G1": g1,
    "G2": g2,
    "C6": lambda: cycle_graph(6),
    "2xC3": two_triangles,
    "star9": lambda: star_graph(9),
    "K2": lambda: complete_graph(2),
    "K5": lambda: complete_graph(5),
    "path3": lambda: path_graph(3),
    "path5": lambda: path_graph(5),
    "triangle": lambda: cycle_graph(3),
    "star+isolated": star_with_isolated,
}

REAL_GRAPHS = {name: (lambda name=name: bundled_graph(name)) for name in ("karate", "florentine", "lesmis")}

RANDOM_GRAPHS = {f"dualBA-200-s{s}": (lambda s=s: dual_barabasi_albert(200, 0.5, 3, 1, s)) for s in (1, 2, 3)}

TEST_GRAPHS = {**SMALL_GRAPHS, **REAL_GRAPHS, **RANDOM_GRAPHS}

CONNECTED_GRAPHS = [k for k in TEST_GRAPHS if k not in ("2xC3", "star+isolated")]


@pytest.fixture(params=sorted(TEST_GRAPHS))
def any_graph(request):
    return TEST_GRAPHS[request.param]()


@pytest.fixture(params=sorted(CONNECTED_GRAPHS))
def connected_graph(request):
    return TEST_GRAPHS[request.param]()


# -- acceptance report ---------------------------------------------------------------

_CRITERIA: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            entry = _CRITERIA.setdefault(m.args[0], {"title": m.args[1], "cases": {}})
            entry["cases"][item.nodeid] = ("NOT RUN", [])


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    if call.when == "call" or call.excinfo is not None:
        if call.excinfo is None:
            status = "PASS"
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            status = "SKIP"
        else:
            status = "FAIL"
        details = [str(v) for k, v in item.user_properties if k == "detail"]
        cases = _CRITERIA[m.args[0]]["cases"]
        if cases[item.nodeid][0] != "FAIL":
            cases[item.nodeid] = (status, details)


def pytest_terminal_summary(terminalreporter):
    ran = {n: e for n, e in _CRITERIA.items() if any(c[0] != "NOT RUN" for c in e["cases"].values())}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ran):
        statuses = [c[0] for c in ran[n]["cases"].values()]
        for status in ("FAIL", "NOT RUN", "SKIP", "PASS"):
            if status in statuses:
                break
        details = "; ".join(d for c in ran[n]["cases"].values() for d in c[1])
        line = f"criterion {n:>2}: {status:<4}  {ran[n]['title']}"
        terminalreporter.write_line(line + (f"  [{details}]" if details else ""))
