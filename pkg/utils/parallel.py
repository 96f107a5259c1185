"""Deterministic fan-out of independent tasks over worker processes."""

import traceback
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Callable, List, Sequence, Tuple

from utils.logger import get_logger

logger = get_logger()


def run_indexed(
    worker: Callable[..., Any],
    tasks: Sequence[Tuple[Any, ...]],
    workers: int = 1,
) -> List[Any]:
    """Run ``worker(*task)`` for every task and return results in task order.

    Results are merged by task index, never by completion order, so the
    output is identical for any ``workers`` value. ``worker`` must be a
    module-level function so it can be pickled into the pool.

    Args:
        worker: Top-level callable executed once per task.
        tasks: Argument tuples, one per task.
        workers: Process count; 1 (or a single task) runs in-process.

    Returns:
        List of results, ``results[i]`` belonging to ``tasks[i]``.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    results: List[Any] = [None] * len(tasks)
    if workers == 1 or len(tasks) <= 1:
        for i, task in enumerate(tasks):
            results[i] = worker(*task)
        return results

    logger.debug(
        "Dispatching tasks to process pool",
        extra={"n_tasks": len(tasks), "workers": workers},
    )
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(worker, *task): i for i, task in enumerate(tasks)}
        for future in as_completed(futures):
            index = futures[future]
            try:
                results[index] = future.result()
            except Exception as e:
                logger.error(
                    f"Worker task {index} failed: {e}",
                    extra={"task_index": index, "traceback": traceback.format_exc()},
                )
                raise
    return results
