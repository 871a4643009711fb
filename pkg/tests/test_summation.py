from mpmath import mp

from primon.utils.summation import (
    NeumaierSum,
    chunk_bounds,
    deterministic_sum,
    get_workers,
    ordered_flat_map,
    ordered_map,
    set_workers,
)


def test_neumaier_recovers_cancelled_terms():
    with mp.workprec(53):
        terms = [mp.mpf(1), mp.mpf(10) ** 100, mp.mpf(1), -(mp.mpf(10) ** 100)]
        assert NeumaierSum().extend(terms).value == 2
        assert sum(terms) == 0


def test_running_yields_prefixes():
    assert list(NeumaierSum().running([1, 2, 3])) == [1, 3, 6]


def test_chunk_bounds():
    assert chunk_bounds(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert chunk_bounds(0, 4) == []


def test_ordered_map_keeps_chunk_order():
    items = list(range(100))
    assert ordered_map(sum, items, chunk_size=7, workers=4) == [
        sum(items[lo:hi]) for lo, hi in chunk_bounds(100, 7)
    ]
    assert ordered_flat_map(lambda x: x * x, items, chunk_size=9, workers=3) == [
        x * x for x in items
    ]


def test_sum_is_identical_for_any_worker_count():
    items = list(range(1, 20_001))
    results = {
        workers: deterministic_sum(lambda n: mp.power(n, -mp.mpf("1.5")), items, workers=workers)
        for workers in (1, 4, 16)
    }
    assert results[1] == results[4] == results[16]


def test_workers_setting():
    before = get_workers()
    try:
        set_workers(0)
        assert get_workers() == 1
        set_workers(6)
        assert get_workers() == 6
    finally:
        set_workers(before)


def test_ordered_map_restores_the_working_precision():
    def widen(chunk):
        mp.prec = 300
        return len(chunk)

    assert ordered_map(widen, list(range(50)), chunk_size=5, workers=4) == [5] * 10
    assert mp.prec == 128
