import json

import pytest

from apksift.catalog import (
    builtin_catalog,
    load_catalog,
    parse_catalog,
    serialize_catalog,
    subset_catalog,
)
from apksift.corpus import Scope
from apksift.errors import CatalogError

from published_values import TABLE4, TABLE5


def test_builtin_mode_sizes(catalog_p, catalog_c, catalog_m):
    assert len(catalog_p) == 131
    assert len(catalog_c) == 58
    assert len(catalog_m) == 189


def test_mode_partition(catalog_p, catalog_c, catalog_m):
    assert len(catalog_m) == len(catalog_p) + len(catalog_c)
    assert all(d.kind == "permission" for d in catalog_p)
    assert all(d.kind != "permission" for d in catalog_c)


def test_ids_reindexed_densely(catalog_p, catalog_c, catalog_m):
    for cat in (catalog_p, catalog_c, catalog_m):
        assert [d.index for d in cat] == list(range(len(cat)))


def test_roundtrip_byte_identical(catalog_m):
    text = builtin_catalog()
    assert serialize_catalog(parse_catalog(text, "M")) == text


def test_builtin_parses_in_all_modes():
    for mode in ("P", "C", "M"):
        assert len(load_catalog("builtin", mode)) > 0


def test_documented_entries_present(catalog_m):
    chmod = catalog_m.by_name("chmod")
    assert chmod.kind == "system-command"
    assert chmod.scopes == {Scope.CODE, Scope.ASSETS}
    read_sms = catalog_m.by_name("READ_SMS")
    assert read_sms.kind == "permission"
    assert read_sms.scopes == {Scope.MANIFEST}
    for name in TABLE5:
        assert catalog_m.by_name(name) is not None
    for name in TABLE4:
        assert catalog_m.by_name(name).kind == "permission"


def test_compound_pattern_parsed(catalog_m):
    runtime_exec = catalog_m.by_name("Runtime.exec")
    assert runtime_exec.pattern == ("Runtime", "exec(")


def test_permission_name_qualified(catalog_m):
    assert catalog_m.by_name("READ_SMS").permission_name == "android.permission.READ_SMS"


def _entry(name, kind="permission", pattern=None, scopes=None):
    return {
        "name": name,
        "kind": kind,
        "pattern": pattern or name,
        "scopes": scopes or (["manifest"] if kind == "permission" else ["code"]),
    }


def test_duplicate_name_fatal():
    text = json.dumps([_entry("READ_SMS"), _entry("READ_SMS")])
    with pytest.raises(CatalogError, match="READ_SMS"):
        parse_catalog(text)


def test_unknown_kind_reports_line():
    text = json.dumps([_entry("READ_SMS"), _entry("weird", kind="telepathy")], indent=2)
    expected_line = next(
        i for i, line in enumerate(text.splitlines(), start=1) if "weird" in line
    )
    with pytest.raises(CatalogError, match=f"line {expected_line}"):
        parse_catalog(text)


def test_permission_scope_rule():
    bad = json.dumps([_entry("READ_SMS", scopes=["manifest", "code"])])
    with pytest.raises(CatalogError, match="manifest scope"):
        parse_catalog(bad)
    bad = json.dumps([_entry("chmod", kind="system-command", scopes=["manifest"])])
    with pytest.raises(CatalogError, match="manifest scope"):
        parse_catalog(bad)


def test_unknown_scope_fatal():
    with pytest.raises(CatalogError, match="scope"):
        parse_catalog(json.dumps([_entry("x", kind="api-call", scopes=["kernel"])]))


def test_unknown_mode_fatal():
    with pytest.raises(CatalogError, match="mode"):
        parse_catalog("[]", mode="Q")


def test_invalid_json_fatal():
    with pytest.raises(CatalogError, match="JSON"):
        parse_catalog("[{not json")


def test_subset_catalog(catalog_m):
    sub = subset_catalog(catalog_m, ["chmod", "READ_SMS"])
    assert sub.names == ("READ_SMS", "chmod")  # file order kept, not request order
    assert [d.index for d in sub] == [0, 1]
    with pytest.raises(CatalogError, match="nonexistent"):
        subset_catalog(catalog_m, ["nonexistent"])


def test_by_name_missing(catalog_m):
    with pytest.raises(CatalogError):
        catalog_m.by_name("NOT_A_FEATURE")
