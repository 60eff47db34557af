import csv

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import record
from raise_pipeline.dataset import (
    ColumnMap,
    ProfileSet,
    SplitSpec,
    load_profiles,
    parse_outcome,
    render_profile_prompt_block,
    stratified_split,
)
from raise_pipeline.errors import EmptyDataset, InsufficientClassCount, MalformedHeader, ProfileFileNotFound
from raise_pipeline.labels import OutcomeLabel

HEADER = ["founder_id", "clean_linkedin_profile", "clean_cb_profile", "company_description", "success"]


def write_csv(path, rows, header=HEADER):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def make_rows(n_success, n_failure):
    rows = [[f"s{i}", f"li {i}", f"cb {i}", f"desc {i}", "1"] for i in range(n_success)]
    rows += [[f"f{i}", f"li f{i}", f"cb f{i}", f"desc f{i}", "0"] for i in range(n_failure)]
    return rows


def test_load_in_chunks(tmp_path):
    path = write_csv(tmp_path / "p.csv", make_rows(7, 5))
    ps = load_profiles(path, chunk_size=5)
    assert len(ps) == 12
    assert ps.chunk_count == 3
    assert ps.ids()[:2] == ["s0", "s1"]
    assert ps.records[0].linkedin_text == "li 0"


@pytest.mark.parametrize("cell,label", [("1", "SUCCESS"), (" Success ", "SUCCESS"), ("TRUE", "SUCCESS"), ("0", "FAILURE"), ("failure", "FAILURE")])
def test_parse_outcome(cell, label):
    assert parse_outcome(cell) is OutcomeLabel(label)


@pytest.mark.parametrize("cell", ["", "maybe", "2", None])
def test_parse_outcome_rejects(cell):
    assert parse_outcome(cell) is None


def test_bad_rows_skipped_with_sidecar(tmp_path):
    rows = make_rows(2, 2) + [["x", "a", "b", "c", "unknown"], ["s0", "dup", "dup", "dup", "1"]]
    path = write_csv(tmp_path / "p.csv", rows)
    ps = load_profiles(path)
    assert len(ps) == 4
    assert [s.row_number for s in ps.skipped] == [5, 6]
    sidecar = tmp_path / "p.csv.skipped.csv"
    assert sidecar.is_file()
    assert "duplicate" in sidecar.read_text()


def test_missing_id_column_uses_row_numbers(tmp_path):
    rows = [r[1:] for r in make_rows(1, 1)]
    path = write_csv(tmp_path / "p.csv", rows, HEADER[1:])
    assert load_profiles(path).ids() == ["1", "2"]


def test_custom_columns(tmp_path):
    cols = ColumnMap(linkedin="li", crunchbase="cb", description="d", outcome="y", founder_id="id")
    path = write_csv(tmp_path / "p.csv", [["a", "x", "y", "z", "1"]], ["id", "li", "cb", "d", "y"])
    assert load_profiles(path, columns=cols).records[0].crunchbase_text == "y"


def test_errors(tmp_path):
    with pytest.raises(ProfileFileNotFound):
        load_profiles(tmp_path / "missing.csv")
    with pytest.raises(MalformedHeader) as exc:
        load_profiles(write_csv(tmp_path / "h.csv", [], ["clean_linkedin_profile", "success"]))
    assert "clean_cb_profile" in str(exc.value)
    with pytest.raises(EmptyDataset):
        load_profiles(write_csv(tmp_path / "e.csv", []))


def test_profile_block_verbatim():
    r = record(li=" a  b ", cb="c | d", desc="x")
    assert render_profile_prompt_block(r) == "Founder Profile:  a  b  | c | d\nStartup Description: x"


def test_split_counts_disjoint_and_deterministic(tmp_path):
    ps = load_profiles(write_csv(tmp_path / "p.csv", make_rows(30, 80)))
    spec = SplitSpec(10, 20, 5, 30, seed=3)
    train, test = stratified_split(ps, spec)
    assert len(train.by_outcome(OutcomeLabel.SUCCESS)) == 10
    assert len(test.by_outcome(OutcomeLabel.FAILURE)) == 30
    assert not set(train.ids()) & set(test.ids())
    again = stratified_split(ps, spec)
    assert again[0].ids() == train.ids() and again[1].ids() == test.ids()
    # source order preserved within each set
    order = ps.ids()
    assert train.ids() == sorted(train.ids(), key=order.index)


def test_split_insufficient(tmp_path):
    ps = load_profiles(write_csv(tmp_path / "p.csv", make_rows(5, 100)))
    with pytest.raises(InsufficientClassCount) as exc:
        stratified_split(ps, SplitSpec(4, 10, 2, 10))
    assert exc.value.shortfall == 1


def test_split_spec_validation():
    with pytest.raises(ValueError):
        SplitSpec(-1, 0, 0, 0)


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 2**16))
def test_split_property(n_train, n_test, seed):
    records = tuple(record(str(i), OutcomeLabel.SUCCESS if i % 2 else OutcomeLabel.FAILURE) for i in range(24))
    ps = ProfileSet(records, "mem", 1)
    train, test = stratified_split(ps, SplitSpec(n_train, n_train, n_test, n_test, seed))
    assert len(train) == 2 * n_train and len(test) == 2 * n_test
    assert not set(train.ids()) & set(test.ids())
