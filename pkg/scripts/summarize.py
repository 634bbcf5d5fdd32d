#!/usr/bin/env python3
"""Print a one-line-per-check table from the verify_*.json files of a run."""
import json
import sys
from pathlib import Path


def lines(doc: dict):
    suite = doc["suite"]
    if suite == "classify":
        for c in doc["checks"]:
            yield suite, c["name"], "pass" if c["passed"] else "FAIL", ""
    elif suite == "decay":
        for f in doc["fits"]:
            extra = f"slope {f['slope']:+.5f} target {f['target']:+.5f}" if "slope" in f else f.get("error", "")
            yield suite, f["name"], f["status"], extra
    elif suite == "lemmas":
        for c in doc["checks"]:
            extra = f"sup {c['ratio_sup']:.4g}" if c.get("ratio_sup") is not None else c.get("error", "")
            if "trend_log2_per_level" in c and c["trend_log2_per_level"] is not None:
                extra += f" trend {c['trend_log2_per_level']:+.3f}"
            yield suite, c["lemma_id"], c.get("verdict", "?"), extra


def main(argv):
    if len(argv) != 2:
        print(f"usage: {argv[0]} RUN_DIR", file=sys.stderr)
        return 2
    files = sorted(Path(argv[1]).glob("verify_*.json"))
    if not files:
        print(f"no verify_*.json under {argv[1]}", file=sys.stderr)
        return 2
    for path in files:
        for suite, name, status, extra in lines(json.loads(path.read_text())):
            print(f"{suite:9} {status:12} {name:55} {extra}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
