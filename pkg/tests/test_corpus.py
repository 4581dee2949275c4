import builtins

import pytest

from apksift.corpus import (
    ClassLabel,
    ManifestMissing,
    Scope,
    enumerate_code_units,
    enumerate_payload_files,
    load_corpus,
    read_manifest,
    scope_of,
)
from apksift.errors import CorpusError

from conftest import manifest_with, write_labels, write_sample


def test_load_corpus_two_samples(tmp_path):
    write_sample(tmp_path, "a", manifest=manifest_with())
    write_sample(tmp_path, "b", manifest=manifest_with())
    labels = write_labels(tmp_path, [("a", "benign"), ("b", "suspicious")])
    corpus = load_corpus(tmp_path, labels)
    assert len(corpus) == 2
    assert corpus.label_counts == {"benign": 1, "suspicious": 1, "unlabeled": 0}
    assert [s.id for s in corpus] == ["a", "b"]


def test_load_corpus_empty(tmp_path):
    labels = tmp_path / "labels.csv"
    labels.write_text("app_id,label\n")
    corpus = load_corpus(tmp_path, labels)
    assert len(corpus) == 0


def test_load_corpus_missing_directory_named(tmp_path):
    write_sample(tmp_path, "a", manifest=manifest_with())
    labels = write_labels(tmp_path, [("a", "benign"), ("c", "suspicious")])
    with pytest.raises(CorpusError, match="c"):
        load_corpus(tmp_path, labels)


def test_load_corpus_duplicate_id_fatal(tmp_path):
    write_sample(tmp_path, "a", manifest=manifest_with())
    labels = write_labels(tmp_path, [("a", "benign"), ("a", "suspicious")])
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(tmp_path, labels)


def test_load_corpus_bad_label_value(tmp_path):
    write_sample(tmp_path, "a", manifest=manifest_with())
    labels = write_labels(tmp_path, [("a", "malicious")])
    with pytest.raises(CorpusError, match="malicious"):
        load_corpus(tmp_path, labels)


def test_load_corpus_missing_root():
    with pytest.raises(CorpusError):
        load_corpus("/nonexistent/corpus/root")


def test_unlabeled_samples_kept(tmp_path):
    write_sample(tmp_path, "a", manifest=manifest_with())
    write_sample(tmp_path, "b", manifest=manifest_with())
    labels = write_labels(tmp_path, [("a", "benign")])
    corpus = load_corpus(tmp_path, labels)
    assert corpus.label_counts["unlabeled"] == 1
    assert corpus.samples[1].label is None
    counts = corpus.label_counts
    assert counts["benign"] + counts["suspicious"] + counts["unlabeled"] == len(corpus)


def test_load_corpus_idempotent(tmp_path):
    write_sample(tmp_path, "a", manifest=manifest_with("READ_SMS"))
    labels = write_labels(tmp_path, [("a", "benign")])
    first = load_corpus(tmp_path, labels)
    second = load_corpus(tmp_path, labels)
    assert first.samples == second.samples


def test_read_manifest_verbatim(tmp_path):
    text = manifest_with("READ_CONTACTS")
    write_sample(tmp_path, "a", manifest=text)
    labels = write_labels(tmp_path, [("a", "benign")])
    corpus = load_corpus(tmp_path, labels)
    assert read_manifest(corpus.samples[0]) == text
    assert "<uses-permission" in read_manifest(corpus.samples[0])


def test_read_manifest_empty(tmp_path):
    write_sample(tmp_path, "a", manifest="")
    corpus = load_corpus(tmp_path)
    assert read_manifest(corpus.samples[0]) == ""


def test_read_manifest_missing(tmp_path):
    write_sample(tmp_path, "a", code={"X.smali": ""})
    corpus = load_corpus(tmp_path)
    with pytest.raises(ManifestMissing) as err:
        read_manifest(corpus.samples[0])
    assert err.value.sample_id == "a"


def test_enumerate_code_units_sorted(tmp_path):
    write_sample(tmp_path, "a", code={"b/Z.smali": "", "a/A.smali": "", "M.smali": ""})
    corpus = load_corpus(tmp_path)
    assert enumerate_code_units(corpus.samples[0]) == [
        "smali/M.smali",
        "smali/a/A.smali",
        "smali/b/Z.smali",
    ]


def test_enumerate_code_units_empty(tmp_path):
    write_sample(tmp_path, "a", manifest=manifest_with())
    corpus = load_corpus(tmp_path)
    assert enumerate_code_units(corpus.samples[0]) == []


def test_enumerate_code_units_unreadable_skipped(tmp_path, monkeypatch):
    write_sample(tmp_path, "a", code={"A.smali": "", "B.smali": "", "C.smali": ""})
    corpus = load_corpus(tmp_path)
    real_open = builtins.open

    def flaky_open(path, *args, **kwargs):
        if str(path).endswith("B.smali"):
            raise PermissionError("denied")
        return real_open(path, *args, **kwargs)

    monkeypatch.setattr(builtins, "open", flaky_open)
    warnings = []
    units = enumerate_code_units(corpus.samples[0], warnings)
    assert units == ["smali/A.smali", "smali/C.smali"]
    assert len(warnings) == 1 and "B.smali" in warnings[0]


def test_enumerate_payload_files(tmp_path):
    write_sample(tmp_path, "a", payloads=["assets/payload.apk"])
    corpus = load_corpus(tmp_path)
    assert enumerate_payload_files(corpus.samples[0]) == [
        ("assets/payload.apk", Scope.ASSETS)
    ]


def test_enumerate_payload_files_empty(tmp_path):
    write_sample(tmp_path, "a", manifest=manifest_with())
    corpus = load_corpus(tmp_path)
    assert enumerate_payload_files(corpus.samples[0]) == []


def test_enumerate_payload_files_ordering(tmp_path):
    write_sample(tmp_path, "a", payloads=["res/raw/x.jar", "lib/libfoo.so"])
    corpus = load_corpus(tmp_path)
    assert enumerate_payload_files(corpus.samples[0]) == [
        ("lib/libfoo.so", Scope.NATIVE_LIB),
        ("res/raw/x.jar", Scope.RESOURCES),
    ]


def test_scope_mapping():
    assert scope_of("AndroidManifest.xml") is Scope.MANIFEST
    assert scope_of("smali/com/x/A.smali") is Scope.CODE
    assert scope_of("assets/p.apk") is Scope.ASSETS
    assert scope_of("res/raw/x.jar") is Scope.RESOURCES
    assert scope_of("lib/armeabi/libx.so") is Scope.NATIVE_LIB
    assert scope_of("META-INF/CERT.RSA") is Scope.OTHER


def test_class_label_values():
    assert {lab.value for lab in ClassLabel} == {"benign", "suspicious"}
