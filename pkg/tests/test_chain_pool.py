import threading

import pytest

from plmc.jobs.chains import ChainPool


def test_results_follow_chain_order():
    pool = ChainPool(max_workers=3)
    try:
        assert pool.map_chains(lambda chain_id: chain_id * chain_id, 10) == [i * i for i in range(10)]
        assert pool.stats() == {"max_workers": 3, "submitted": 10}
    finally:
        pool.shutdown()


def test_single_worker_runs_inline():
    pool = ChainPool(max_workers=1)
    names = pool.map_chains(lambda _: threading.current_thread().name, 3)
    assert set(names) == {threading.current_thread().name}
    assert pool.stats()["submitted"] == 0


def test_zero_chains():
    assert ChainPool(max_workers=2).map_chains(lambda _: 1, 0) == []


def test_first_failure_is_raised_after_join():
    finished = []

    def run(chain_id: int) -> int:
        if chain_id in (2, 5):
            raise RuntimeError(f"chain {chain_id}")
        finished.append(chain_id)
        return chain_id

    pool = ChainPool(max_workers=2)
    try:
        with pytest.raises(RuntimeError, match="chain 2"):
            pool.map_chains(run, 8)
        assert sorted(finished) == [0, 1, 3, 4, 6, 7]
    finally:
        pool.shutdown()


def test_invalid_arguments():
    with pytest.raises(ValueError):
        ChainPool(max_workers=0)
    with pytest.raises(ValueError):
        ChainPool(max_workers=2).map_chains(lambda _: 1, -1)


def test_pool_restarts_after_shutdown():
    pool = ChainPool(max_workers=2)
    assert pool.map_chains(lambda i: i, 3) == [0, 1, 2]
    pool.shutdown()
    assert pool.map_chains(lambda i: i + 1, 3) == [1, 2, 3]
    pool.shutdown()
