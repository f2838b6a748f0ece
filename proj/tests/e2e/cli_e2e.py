#!/usr/bin/env python3
"""CLI end-to-end checks: exit codes, mine/organize/export outputs.

usage: cli_e2e.py <factdeck-binary> <fixtures-dir>
"""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = sys.argv[1]
CARS = Path(sys.argv[2]) / "cars"
CHARTS = sorted(str(p) for p in CARS.glob("c[0-9]_*.json"))
failures = []


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=60)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def inputs(*extra):
    args = ["-d", str(CARS / "car_sales.csv"), "--schema", str(CARS / "car_sales.schema.json")]
    for c in CHARTS:
        args += ["-c", c]
    return args + list(extra)


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    r = run("mine", *inputs())
    check(r.returncode == 0, "mine exits 0")
    mined = json.loads(r.stdout)
    check([c["chart_id"] for c in mined["charts"]] == ["c1", "c2", "c3", "c4", "c5"], "mine keeps chart order")
    check(all(1 <= len(c["facts"]) <= 3 for c in mined["charts"]), "default k keeps at most 3 facts")

    r = run("mine", *inputs("-k", "1"))
    check(r.returncode == 0 and all(len(c["facts"]) == 1 for c in json.loads(r.stdout)["charts"]), "-k 1")

    r = run("mine", *inputs("--weights", "1,0,0"))
    check(r.returncode == 0, "--weights 1,0,0 exits 0")
    for c in json.loads(r.stdout)["charts"]:
        sig = [f["fact"]["score"]["significance"] for f in c["facts"]]
        tot = [f["fact"]["score"]["total"] for f in c["facts"]]
        check(all(abs(a - b) < 1e-12 for a, b in zip(sig, tot)), f"{c['chart_id']}: score equals significance")

    # JSON records give the same facts as CSV.
    r = run("mine", "-d", str(CARS / "car_sales.json"), "--schema", str(CARS / "car_sales.schema.json"),
            *sum((["-c", c] for c in CHARTS), []))
    as_json = json.loads(r.stdout)
    check(r.returncode == 0 and [[f["fact"]["id"] for f in c["facts"]] for c in as_json["charts"]]
          == [[f["fact"]["id"] for f in c["facts"]] for c in mined["charts"]], "json records mine like csv")

    story = tmp / "story.json"
    r = run("organize", *inputs("--include-subspace", "-s", str(CARS / "scenario_selection.json"), "-o", str(story)))
    check(r.returncode == 0 and story.exists(), "organize exits 0")

    for fmt, marker in [("json", '"slides"'), ("markdown", "\n## "), ("md", "\n## "), ("html", "<section class=\"slide\"")]:
        r = run("export", str(story), "-f", fmt, "--generated-at", "2026-01-01T00:00:00Z")
        check(r.returncode == 0 and marker in r.stdout, f"export -f {fmt}")
    deck = json.loads(run("export", str(story), "-f", "json", "--generated-at", "2026-01-01T00:00:00Z").stdout)
    check(len(deck["slides"]) == 5, "deck has 5 slides")
    check(deck["metadata"]["generated_at"] == "2026-01-01T00:00:00Z", "timestamp is injected")
    again = json.loads(run("export", str(story), "-f", "json", "--generated-at", "2026-01-01T00:00:00Z").stdout)
    check(again == deck, "export is deterministic")

    # Validation errors exit 2.
    bad_chart = tmp / "bad_chart.json"
    bad_chart.write_text('{"mark":"bar","encoding":{"x":"Nope","y":"Sales"}}')
    bad_data = tmp / "bad.csv"
    bad_data.write_text("A,B\n1,\n")
    empty_sel = tmp / "empty.json"
    empty_sel.write_text('{"facts": []}')
    cases = {
        "missing file": run("mine", "-d", str(tmp / "nope.csv"), "-c", CHARTS[0]),
        "unknown column": run("mine", *inputs()[:4], "-c", str(bad_chart)),
        "null cell": run("mine", "-d", str(bad_data), "-c", CHARTS[0]),
        "bad weights": run("mine", *inputs("--weights", "1,x")),
        "negative weights": run("mine", *inputs("--weights", "-1,0,0")),
        "bad format": run("export", str(story), "-f", "pptx"),
        "unknown selection": run("organize", *inputs("-s", str(CARS / "car_sales.schema.json"))),
        "empty story export": None,
    }
    empty_story = tmp / "empty_story.json"
    run("organize", *inputs("-s", str(empty_sel), "-o", str(empty_story)))
    cases["empty story export"] = run("export", str(empty_story))
    for name, r in cases.items():
        check(r.returncode == 2 and r.stderr.strip() != "", f"{name} exits 2 with a message (got {r.returncode})")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
