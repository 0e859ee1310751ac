"""Rewrite the classify goldens under tests/golden.  Review the diff before committing."""
from pathlib import Path

from restrix import pipeline

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"
RUNS = [("2F4p", 0), ("2F4p", 3), ("2F4p", 5), ("2F4p", 13), ("2F4", 0), ("2F4", 13)]

for amb, p in RUNS:
    v = pipeline.classify(amb, p)
    (GOLDEN / f"{amb}_{p}.tsv").write_text(pipeline.to_tsv(v))
    (GOLDEN / f"{amb}_{p}.exceptions.tsv").write_text(pipeline.exceptions_text(v))
    print(amb, p, len(v))
