import json

import pytest

from picweyl import tablegen, tables
from picweyl.symbols import parse_char_symbol, parse_frame_symbol
from picweyl.tables import (
    AmbiguousClassMatchError,
    DuplicateIdError,
    SchemaMismatchError,
    TableEntry,
    TableParseError,
    UnknownEntryError,
    audit_tables,
    export_entries,
    load_tables,
    match_entry,
    replay_descent,
    table_to_dict,
    verify_theorem,
)


def write_table(tmp_path, entries, degree=3):
    path = tmp_path / "table.json"
    path.write_text(json.dumps(table_to_dict(entries, source="test", degree=degree)))
    return path


def test_load_tables_round_trip(tmp_path, inv3):
    entries = export_entries(inv3)
    path = write_table(tmp_path, entries)
    loaded = load_tables(path)
    assert loaded == entries


def test_load_rejects_duplicate_ids(tmp_path):
    e = TableEntry(id="X#1", degree=3, char_symbol=parse_char_symbol("1.3^6"))
    path = write_table(tmp_path, [e, e])
    with pytest.raises(DuplicateIdError):
        load_tables(path)


def test_load_rejects_bad_schema(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"schema": "wat/0", "entries": []}))
    with pytest.raises(SchemaMismatchError):
        load_tables(path)


def test_load_rejects_malformed_symbol(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(
        json.dumps(
            {
                "schema": tables.TABLE_SCHEMA,
                "entries": [{"id": "X#1", "degree": 3, "char_symbol": "3^^2"}],
            }
        )
    )
    with pytest.raises(TableParseError) as e:
        load_tables(path)
    assert "byte 2" in str(e.value)


def test_load_rejects_non_json(tmp_path):
    path = tmp_path / "t.json"
    path.write_text("{not json")
    with pytest.raises(TableParseError):
        load_tables(path)


def test_empty_entry_list(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"schema": tables.TABLE_SCHEMA, "entries": []}))
    assert load_tables(path) == []


def test_entry_requires_some_symbol():
    with pytest.raises(tables.TableError):
        TableEntry(id="X#1", degree=2)


def test_match_entry(inv3, data_dir):
    entries = load_tables(data_dir / "bfl_table71_degree3.json")
    by_id = {e.id: e for e in entries}
    hits = match_entry(by_id["BFL-7.1#3"], inv3)
    assert len(hits) == 1
    assert not hits[0].h1.is_trivial
    assert hits[0].minimal
    # a symbol matching nothing yields the empty list
    ghost = TableEntry(id="X#1", degree=3, char_symbol=parse_char_symbol("30^8"))
    assert match_entry(ghost, inv3) == []


def test_audit_round_trip_is_empty(inv3, inv4):
    for inv in (inv3, inv4):
        report = audit_tables(export_entries(inv), inv)
        assert not report.discrepancies
        assert not report.unmatched_entries
        assert not report.unmatched_classes


def test_audit_flags_a_corrupted_row(inv3):
    entries = export_entries(inv3)
    victim = entries[0]
    corrupted = TableEntry(
        id=victim.id, degree=3, char_symbol=victim.char_symbol,
        frame_symbol=victim.frame_symbol,
        expected_index=(victim.expected_index or 0) + 1,
        expected_h1_trivial=victim.expected_h1_trivial,
    )
    report = audit_tables([corrupted] + entries[1:], inv3)
    assert [d.entry_id for d in report.discrepancies] == [victim.id]
    assert report.discrepancies[0].field == "index"


def test_replay_descent_verified(inv3, data_dir):
    entries = load_tables(data_dir / "bfl_table71_degree3.json")
    step = replay_descent("BFL-7.1#1", 4, entries, inv3)
    assert step.conclusion == "Verified"
    assert str(step.computed_char) == "1.3^6"
    assert step.matches == ("BFL-7.1#3",)
    assert step.class_matches and len(step.class_matches) == 1


def test_replay_descent_errors(inv3, data_dir):
    entries = load_tables(data_dir / "bfl_table71_degree3.json")
    with pytest.raises(UnknownEntryError):
        replay_descent("BFL-7.1#99", 2, entries, inv3)
    # an entry matching two distinct classes cannot anchor a replay
    twin_char = None
    seen = {}
    for r in inv3:
        seen.setdefault(str(r.char_symbol), []).append(r)
    for sym, rs in seen.items():
        if len(rs) > 1:
            twin_char = sym
            break
    if twin_char is not None:
        dup2 = entries + [TableEntry(id="X#twin", degree=3, char_symbol=parse_char_symbol(twin_char))]
        with pytest.raises(AmbiguousClassMatchError):
            replay_descent("X#twin", 2, dup2, inv3)


def test_verify_theorem_degrees_3_4(inv3, inv4):
    for degree, inv in ((3, inv3), (4, inv4)):
        report = verify_theorem(degree, inv)
        assert report.status == "PASS"
        assert report.coverage == "exhaustive"
        assert all(v.witness is not None for v in report.verdicts)
    # renderings carry the verdicts
    text = verify_theorem(3, inv3).render()
    assert "PASS" in text and "witness" in text


def test_shipped_tables_parse(data_dir):
    for name, degree, count in (
        ("bfl_table71_degree3.json", 3, 25),
        ("urabe_table1_degree2.json", 2, 19),
        ("urabe_table2_degree1.json", 1, 21),
    ):
        entries = load_tables(data_dir / name)
        assert len(entries) == count
        assert all(e.degree == degree for e in entries)


def test_shipped_steps_parse(data_dir):
    steps = tables.load_steps(data_dir / "descent_steps.json")
    assert len(steps) == 23
    by_degree = {}
    for s in steps:
        by_degree.setdefault(s.degree, []).append(s)
    assert {d: len(v) for d, v in by_degree.items()} == {3: 3, 2: 8, 1: 12}


def test_tablegen_reconstruction_matches_shipped(inv3, data_dir):
    # degree 3 is cheap to rebuild: the checked-in file must match exactly
    rebuilt = tablegen.build_degree3_table(inv3)
    shipped = load_tables(data_dir / "bfl_table71_degree3.json")
    assert rebuilt == shipped


def test_steps_payload_matches_shipped(data_dir):
    payload = tablegen.build_steps_payload()
    shipped = json.loads((data_dir / "descent_steps.json").read_text())
    assert payload == shipped
