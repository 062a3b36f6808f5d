import itertools

import numpy as np
import pytest

from ordsemi.chains import ChainPair

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(tag, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    tag, text = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _ACCEPTANCE[tag] = (text, rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(_ACCEPTANCE, key=lambda t: int(t.lstrip("AC"))):
        text, outcome = _ACCEPTANCE[tag]
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {tag}: {text}")


# -- brute-force oracles shared by the tests -----------------------------------

def brute_monotone_maps(pair: ChainPair) -> list[tuple[int, ...]]:
    """Every map into the range, filtered down to the monotone ones."""
    return [img for img in itertools.product(pair.range, repeat=pair.size)
            if all(img[i] <= img[i + 1] for i in range(len(img) - 1))]


def brute_monotone_count(pair: ChainPair) -> int:
    """Vectorised version of the same filter, chunked on the first value."""
    n, values = pair.size, np.array(pair.range, dtype=np.int16)
    k = len(values)
    if n == 1:
        return k
    total = 0
    rest = np.indices((k,) * (n - 1), dtype=np.int8).reshape(n - 1, -1)
    for first in range(k):
        digits = np.vstack([np.full((1, rest.shape[1]), first, dtype=np.int8), rest])
        image = values[digits]
        total += int(np.all(image[:-1] <= image[1:], axis=0).sum())
    return total


def brute_isos(TA, TB):
    """All isomorphisms by trying every permutation, in lexicographic order."""
    TA, TB = np.asarray(TA), np.asarray(TB)
    n = TA.shape[0]
    if TB.shape[0] != n:
        return []
    out = []
    for perm in itertools.permutations(range(n)):
        f = np.array(perm)
        if np.array_equal(f[TA], TB[np.ix_(f, f)]):
            out.append(perm)
    return out


def all_instances(max_size, min_range=2, min_size=1):
    return [ChainPair.of(n, r) for n in range(min_size, max_size + 1)
            for k in range(min_range, n + 1)
            for r in itertools.combinations(range(n), k)]
