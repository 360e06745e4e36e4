from itertools import combinations

from hypothesis import strategies as st

from wgc.partitions import Partition


def brute_crossing(p: Partition) -> bool:
    """Four clockwise points a<b<c<d with a, c in one block and b, d in another."""
    seq = [p.labels[q] for q in p.clockwise()]
    for a, b, c, d in combinations(range(len(seq)), 4):
        if seq[a] == seq[c] and seq[b] == seq[d] and seq[a] != seq[b]:
            return True
    return False


@st.composite
def partitions(draw, max_points: int = 8, two_row: bool = True, colored: bool = False):
    n = draw(st.integers(0, max_points))
    labels = draw(st.lists(st.integers(0, max(n - 1, 0)), min_size=n, max_size=n))
    upper = draw(st.integers(0, n)) if two_row else 0
    colors = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)) if colored else ()
    return Partition.from_labels(labels, upper, colors)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
