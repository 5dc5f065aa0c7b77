"""
Thread worker pool for study cells. Workers consume tasks from a bounded
queue until they receive ``None``.
"""

from queue import Queue, Full
from threading import Lock, Thread

from cdislogging import get_logger

from scaletik.errors import InternalError
from scaletik.globals import ASYNC_MAX_Q_LEN, ERR_ASYNC_SCHEDULING


logger = get_logger(__name__)


def async_pool_consumer(task_queue):
    task = task_queue.get()
    while task:
        try:
            task.target(*task.args, **task.kwargs)
        except Exception as e:  # pylint: disable=broad-except
            logger.exception(e)
        finally:
            task = task_queue.get()


class AsyncPoolTask(object):
    """A scheduled call ``target(*args, **kwargs)``."""

    def __init__(self, target, *args, **kwargs):
        self.target = target
        self.args = args
        self.kwargs = kwargs


class AsyncPool(object):
    """
    Pool of worker threads sharing one task queue.

    Usable as a context manager: leaving the block sends the exit signal to
    every worker and waits for them, so all scheduled tasks have run.
    """

    def __init__(self, worker_class=Thread, max_queue_len=ASYNC_MAX_Q_LEN):
        self.worker_class = worker_class
        self.task_queue = Queue(max_queue_len)
        self.workers = []

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
        self.join()

    def start(self, n_workers):
        self.grow(n_workers)
        return self

    def schedule(self, function, *args, **kwargs):
        """
        Queue ``function(*args, **kwargs)``.

        Raises:
            InternalError: if the queue is full
        """
        try:
            self.task_queue.put_nowait(AsyncPoolTask(function, *args, **kwargs))
        except Full:
            raise InternalError(ERR_ASYNC_SCHEDULING)

    def grow(self, n_workers):
        """Start ``n_workers`` additional daemon workers."""
        workers = [
            self.worker_class(target=async_pool_consumer, args=(self.task_queue,))
            for _ in range(n_workers)
        ]
        for worker in workers:
            worker.daemon = True
            worker.start()
        self.workers.extend(workers)

    def shrink(self, n_workers):
        """Ask ``n_workers`` workers to exit once the queue ahead of them drains."""
        for _ in range(n_workers):
            self.task_queue.put(None)

    def close(self):
        self.shrink(len(self.workers))

    def join(self):
        for worker in self.workers:
            worker.join()


def run_keyed(function, keys, n_workers=1):
    """
    Call ``function(key)`` for every key and collect the outcomes.

    Tasks run on an :class:`AsyncPool` when ``n_workers > 1`` and serially
    otherwise. The returned dicts are keyed like the input, so a reduction
    over them in key order does not depend on completion order.

    Return:
        tuple: ``(results, errors)``, two dicts keyed by task key
    """
    keys = list(keys)
    results = {}
    errors = {}
    lock = Lock()

    def target(key):
        try:
            value = function(key)
        except Exception as e:  # pylint: disable=broad-except
            logger.warning("task %s failed: %s", key, e)
            with lock:
                errors[key] = e
        else:
            with lock:
                results[key] = value

    if n_workers <= 1 or len(keys) <= 1:
        for key in keys:
            target(key)
        return results, errors

    with AsyncPool(max_queue_len=len(keys)) as pool:
        for key in keys:
            pool.schedule(target, key)
        pool.start(min(n_workers, len(keys)))
    return results, errors
