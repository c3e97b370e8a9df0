import itertools

import pytest

from digifreeze.lattice import DigitalImage


def cube(lo, hi, u=1):
    return DigitalImage.from_cube(lo, hi, u=u)


def brute_adjacent(p, q, u):
    """c_u adjacency straight from the two-clause definition."""
    if p == q:
        return False
    diffs = [abs(a - b) for a, b in zip(p, q)]
    return sum(1 for d in diffs if d == 1) <= u and all(d in (0, 1) for d in diffs)


def small_corpus():
    """Fixed images with at most 9 points, n in {1, 2, 3}, u in {1, 2}."""
    shapes = {
        "seg2": [(0,), (1,)],
        "seg3": [(0,), (1,), (2,)],
        "seg5": [(i,) for i in range(5)],
        "seg9": [(i,) for i in range(9)],
        "gap": [(0,), (1,), (3,), (4,)],
        "sq2": list(itertools.product(range(2), repeat=2)),
        "rect23": list(itertools.product(range(2), range(3))),
        "sq3": list(itertools.product(range(3), repeat=2)),
        "ell": [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)],
        "diag": [(0, 0), (1, 1), (2, 2), (3, 3)],
        "zigzag": [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)],
        "ring": [p for p in itertools.product(range(3), repeat=2) if p != (1, 1)],
        "two_blobs": [(0, 0), (0, 1), (3, 3), (3, 4)],
        "cube2": list(itertools.product(range(2), repeat=3)),
        "slab": list(itertools.product(range(3), range(2), range(1))),
        "stair3": [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1), (2, 1, 1)],
        "tee3": [(0, 0, 0), (1, 0, 0), (2, 0, 0), (1, 1, 0), (1, 1, 1)],
    }
    out = []
    for name, pts in shapes.items():
        n = len(pts[0])
        for u in (1, 2):
            if u > n:
                continue
            # the 9-point c2 square has ~1.9M maps; keep it for the pairwise checks elsewhere
            if name == "sq3" and u == 2:
                continue
            out.append((f"{name}-c{u}", DigitalImage(pts, u=u)))
    return out


CORPUS = small_corpus()


@pytest.fixture(params=CORPUS, ids=[name for name, _ in CORPUS])
def corpus_image(request):
    return request.param[1]


# -- acceptance reporting -------------------------------------------------

_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, text = marker.args
    ok = call.excinfo is None
    prev = _CRITERIA.get(number)
    _CRITERIA[number] = (text, ok and (prev is None or prev[1]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        text, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {text}")
