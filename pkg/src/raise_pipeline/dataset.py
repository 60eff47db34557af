"""Founder CSV ingestion, prompt-block rendering and stratified splitting."""

from __future__ import annotations

import csv
import itertools
import logging
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyDataset, InsufficientClassCount, MalformedHeader, ProfileFileNotFound
from .labels import OutcomeLabel

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 500
PROFILE_SEPARATOR = " | "

_SUCCESS_TOKENS = {"success", "1", "true"}
_FAILURE_TOKENS = {"failure", "0", "false"}


@dataclass(frozen=True)
class ColumnMap:
    linkedin: str = "clean_linkedin_profile"
    crunchbase: str = "clean_cb_profile"
    description: str = "company_description"
    outcome: str = "success"
    # optional; row numbers are used when the header lacks it
    founder_id: str = "founder_id"


@dataclass(frozen=True)
class FounderRecord:
    id: str
    linkedin_text: str
    crunchbase_text: str
    company_description: str
    outcome: OutcomeLabel


@dataclass(frozen=True)
class SkippedRow:
    row_number: int
    reason: str


@dataclass(frozen=True)
class ProfileSet:
    records: tuple[FounderRecord, ...]
    source_path: str
    chunk_count: int
    skipped: tuple[SkippedRow, ...] = ()

    def __len__(self) -> int:
        return len(self.records)

    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def by_outcome(self, label: OutcomeLabel) -> list[FounderRecord]:
        return [r for r in self.records if r.outcome is label]


@dataclass(frozen=True)
class SplitSpec:
    train_success: int = 100
    train_failure: int = 100
    test_success: int = 10
    test_failure: int = 50
    seed: int = 0

    def __post_init__(self):
        for name in ("train_success", "train_failure", "test_success", "test_failure"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


def parse_outcome(cell: str | None) -> OutcomeLabel | None:
    """Map an outcome cell onto a label, or None when it is not recognised."""
    if cell is None:
        return None
    token = cell.strip().lower()
    if token in _SUCCESS_TOKENS:
        return OutcomeLabel.SUCCESS
    if token in _FAILURE_TOKENS:
        return OutcomeLabel.FAILURE
    return None


def load_profiles(
    path: str | Path,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    columns: ColumnMap = ColumnMap(),
    write_skipped: bool = True,
) -> ProfileSet:
    """Read a founder CSV in chunks of ``chunk_size`` rows.

    Rows whose outcome is missing or unrecognised (or whose id repeats an
    earlier row) are skipped and reported; when any are skipped a sidecar
    ``<input>.skipped.csv`` is written next to the input.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    path = Path(path)
    if not path.is_file():
        raise ProfileFileNotFound(f"no such file: {path}")

    records: list[FounderRecord] = []
    skipped: list[SkippedRow] = []
    seen: set[str] = set()
    chunk_count = 0
    row_number = 0

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for required in (columns.linkedin, columns.crunchbase, columns.description, columns.outcome):
            if required not in header:
                raise MalformedHeader(required)
        has_id = columns.founder_id in header

        while True:
            chunk = list(itertools.islice(reader, chunk_size))
            if not chunk:
                break
            chunk_count += 1
            for row in chunk:
                row_number += 1
                label = parse_outcome(row.get(columns.outcome))
                if label is None:
                    skipped.append(SkippedRow(row_number, f"invalid outcome {row.get(columns.outcome)!r}"))
                    continue
                fid = (row.get(columns.founder_id) or "").strip() if has_id else ""
                fid = fid or str(row_number)
                if fid in seen:
                    skipped.append(SkippedRow(row_number, f"duplicate id {fid!r}"))
                    continue
                seen.add(fid)
                records.append(
                    FounderRecord(
                        id=fid,
                        linkedin_text=row.get(columns.linkedin) or "",
                        crunchbase_text=row.get(columns.crunchbase) or "",
                        company_description=row.get(columns.description) or "",
                        outcome=label,
                    )
                )
            logger.info("loaded chunk %d (%d rows so far)", chunk_count, row_number)

    if skipped:
        logger.warning("%s: skipped %d row(s)", path, len(skipped))
        if write_skipped:
            write_skipped_report(path.with_name(path.name + ".skipped.csv"), skipped)
    if not records:
        raise EmptyDataset(f"{path}: no valid rows")
    return ProfileSet(tuple(records), str(path), chunk_count, tuple(skipped))


def write_skipped_report(path: Path, skipped: list[SkippedRow]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row_number", "reason"])
        for row in skipped:
            writer.writerow([row.row_number, row.reason])


def render_profile_prompt_block(record: FounderRecord) -> str:
    # fields are passed through verbatim; a field containing " | " is ambiguous by design
    return (
        f"Founder Profile: {record.linkedin_text}{PROFILE_SEPARATOR}{record.crunchbase_text}\n"
        f"Startup Description: {record.company_description}"
    )


def stratified_split(profiles: ProfileSet, spec: SplitSpec) -> tuple[ProfileSet, ProfileSet]:
    """Draw disjoint train/test sets with exact per-class counts.

    Selection depends only on ``spec.seed``; within each output set records
    keep their source order.
    """
    rng = random.Random(spec.seed)
    position = {r.id: i for i, r in enumerate(profiles.records)}
    train: list[FounderRecord] = []
    test: list[FounderRecord] = []
    for label, n_train, n_test in (
        (OutcomeLabel.SUCCESS, spec.train_success, spec.test_success),
        (OutcomeLabel.FAILURE, spec.train_failure, spec.test_failure),
    ):
        pool = profiles.by_outcome(label)
        if n_train + n_test > len(pool):
            raise InsufficientClassCount(label.value, n_train + n_test, len(pool))
        drawn = rng.sample(pool, n_train + n_test)
        train.extend(drawn[:n_train])
        test.extend(drawn[n_train:])

    def as_set(items: list[FounderRecord]) -> ProfileSet:
        items = sorted(items, key=lambda r: position[r.id])
        return ProfileSet(tuple(items), profiles.source_path, profiles.chunk_count)

    return as_set(train), as_set(test)
