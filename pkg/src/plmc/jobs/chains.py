"""Bounded worker pool that runs independent chains and joins them in chain order."""

from __future__ import annotations

import logging
import threading
from collections.abc import Callable
from concurrent.futures import Future, ThreadPoolExecutor
from typing import TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


class ChainPool:
    def __init__(self, *, max_workers: int = 4) -> None:
        if max_workers < 1:
            raise ValueError("max_workers must be at least 1")
        self._max_workers = max_workers
        self._executor: ThreadPoolExecutor | None = None
        self._lock = threading.RLock()
        self._submitted = 0

    @property
    def max_workers(self) -> int:
        return self._max_workers

    def _ensure_executor(self) -> ThreadPoolExecutor:
        with self._lock:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(max_workers=self._max_workers, thread_name_prefix="plmc-chain")
            return self._executor

    def map_chains(self, fn: Callable[[int], T], n_chains: int, *, label: str = "run") -> list[T]:
        """Run ``fn(chain_id)`` for every chain id and return results indexed by chain id.

        The first failing chain's exception is re-raised after all submitted chains have finished.
        """
        if n_chains < 0:
            raise ValueError("n_chains must be non-negative")
        if n_chains == 0:
            return []
        logger.info(f"[CHAINS] {label}: {n_chains} chains on {self._max_workers} workers")
        if self._max_workers == 1 or n_chains == 1:
            return [fn(chain_id) for chain_id in range(n_chains)]

        executor = self._ensure_executor()
        with self._lock:
            futures: list[Future[T]] = [executor.submit(fn, chain_id) for chain_id in range(n_chains)]
            self._submitted += n_chains

        results: list[T] = []
        failure: BaseException | None = None
        for chain_id, future in enumerate(futures):
            try:
                results.append(future.result())
            except Exception as exc:
                logger.error(f"[CHAINS] {label}: chain {chain_id} failed: {exc}")
                if failure is None:
                    failure = exc
        if failure is not None:
            raise failure
        logger.debug(f"[CHAINS] {label}: joined {n_chains} chains")
        return results

    def stats(self) -> dict[str, int]:
        with self._lock:
            return {"max_workers": self._max_workers, "submitted": self._submitted}

    def shutdown(self) -> None:
        with self._lock:
            if self._executor is not None:
                self._executor.shutdown(wait=True)
                self._executor = None


__all__ = ["ChainPool"]
