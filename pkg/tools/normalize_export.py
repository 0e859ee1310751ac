"""Turn raw GAP dumps into the corpus JSON files (one-time transcription step)."""
import json
import pathlib
import sys

src = pathlib.Path(sys.argv[1])
corpus = pathlib.Path(sys.argv[2])
fusions = pathlib.Path(sys.argv[3])

lib_fusions = {}
for path in sorted(src.glob("*.json")):
    text = path.read_text().replace("\\\n", "")
    data = json.loads(text)
    if path.name.startswith("fus_"):
        lib_fusions[path.stem[4:]] = data
        continue
    (corpus / path.name).write_text(json.dumps(data, indent=1) + "\n")

(fusions / "atlas_fusions.json").write_text(json.dumps(lib_fusions, indent=1) + "\n")
