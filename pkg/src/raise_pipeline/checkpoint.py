"""Row-keyed CSV checkpoints for per-founder batch stages."""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence


def read_rows(path: str | Path) -> list[dict[str, str]]:
    path = Path(path)
    if not path.is_file():
        return []
    with path.open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def write_rows(path: str | Path, columns: Sequence[str], rows: Iterable[dict]) -> None:
    """Atomically replace ``path`` with the given rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: row.get(c, "") for c in columns})
    os.replace(tmp, path)


def run_checkpointed(
    items: Sequence,
    key: Callable[[object], str],
    work: Callable[[object], dict],
    path: str | Path,
    columns: Sequence[str],
    key_column: str,
    every: int = 10,
    on_checkpoint: Callable[[int], None] | None = None,
    workers: int = 1,
) -> list[dict]:
    """Run ``work`` over ``items`` in order, skipping keys already in ``path``.

    The checkpoint is rewritten after every ``every`` new rows, at completion,
    and on the way out of any exception (including interrupts) so finished
    work is never repeated. With ``workers > 1`` each batch of ``every``
    pending items runs on a thread pool; results are still collected in
    order. Returns rows in ``items`` order.
    """
    if every < 1:
        raise ValueError("checkpoint interval must be positive")
    done = {row[key_column]: row for row in read_rows(path)}
    order = [key(item) for item in items]
    fresh = 0
    dirty = False

    def flush():
        rows = [done[k] for k in order if k in done]
        write_rows(path, columns, rows)
        if on_checkpoint is not None:
            on_checkpoint(len(rows))

    pending = [item for item in items if key(item) not in done]
    try:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for start in range(0, len(pending), every):
                    batch = pending[start : start + every]
                    for item, row in zip(batch, pool.map(work, batch)):
                        done[key(item)] = row
                    dirty = True
                    flush()
                    dirty = False
        else:
            for item in pending:
                done[key(item)] = work(item)
                fresh += 1
                dirty = True
                if fresh % every == 0:
                    flush()
                    dirty = False
    finally:
        if dirty:
            flush()
    if not Path(path).is_file():
        flush()
    return [done[k] for k in order]
