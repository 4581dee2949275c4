"""
Generating a synthetic app corpus
=================================

A corpus is a directory tree with one folder per app, each holding a
decoded manifest, disassembled code under smali/, and any payload files
under assets/, res/ or lib/. The generator builds such a tree whose
per-class feature frequencies match a target table *exactly*, which is
what makes published frequency tables reproducible without the original
samples.
"""

import shutil
from pathlib import Path

from apksift.catalog import data_table_path, load_catalog
from apksift.corpusgen import generate, spec_from_table

out = Path("demo-output/01-corpus")
if out.exists():
    shutil.rmtree(out)

# The shipped mixed-feature table pairs 25 features with their published
# (benign, malware) occurrence counts out of 1000 samples per class. For
# this quick look, scale everything down by 20 to a 50+50 corpus.
catalog = load_catalog("builtin", "M")
full_scale = spec_from_table(data_table_path("table6"), catalog,
                             n_benign=1000, n_suspicious=1000, seed=7)
from apksift.corpusgen import FrequencyEntry, FrequencySpec

entries = tuple(FrequencyEntry(e.feature, e.benign // 20, e.malware // 20)
                for e in full_scale.entries)
spec = FrequencySpec(entries, n_benign=50, n_suspicious=50, seed=7)

result = generate(spec, out)
print(f"corpus root:  {result.root}")
print(f"labels file:  {result.labels}")

# One suspicious sample, up close: the manifest declares the planted
# permissions, the smali file carries the planted code lines.
sample = result.root / "mal00000"
print("\n--- AndroidManifest.xml ---")
print((sample / "AndroidManifest.xml").read_text())
print("--- smali/Gen.smali ---")
print((sample / "smali" / "Gen.smali").read_text())
payloads = sorted(p.relative_to(sample) for p in sample.rglob("assets/*"))
print("payload files:", [str(p) for p in payloads] or "none")
