import threading
import time

import pytest

from scaletik.errors import InternalError
from scaletik.utils.scheduling import AsyncPool, run_keyed


def test_run_keyed_collects_results_and_errors():
    def square(key):
        if key == 3:
            raise ValueError("three")
        return key * key

    for n_workers in (1, 4):
        results, errors = run_keyed(square, range(6), n_workers)
        assert results == {0: 0, 1: 1, 2: 4, 4: 16, 5: 25}
        assert list(errors) == [3]
        assert isinstance(errors[3], ValueError)


def test_run_keyed_uses_threads():
    seen = set()

    def record(key):
        seen.add(threading.current_thread().name)
        time.sleep(0.01)
        return key

    results, _ = run_keyed(record, range(8), n_workers=4)
    assert sorted(results) == list(range(8))
    assert len(seen) > 1


def test_pool_runs_every_task():
    done = []
    lock = threading.Lock()

    def task(value):
        with lock:
            done.append(value)

    with AsyncPool() as pool:
        pool.start(3)
        for value in range(20):
            pool.schedule(task, value)
    assert sorted(done) == list(range(20))


def test_full_queue():
    pool = AsyncPool(max_queue_len=1)
    pool.schedule(print, "first")
    with pytest.raises(InternalError):
        pool.schedule(print, "second")
