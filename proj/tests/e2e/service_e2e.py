#!/usr/bin/env python3
"""Service end-to-end checks against a real `factdeck serve` process.

usage: service_e2e.py <factdeck-binary> <fixtures-dir>

Responses are validated against /schemas when the jsonschema package is
installed; otherwise validation is skipped.
"""
import json
import re
import signal
import subprocess
import sys
import tempfile
import urllib.error
import urllib.request
import warnings
from pathlib import Path

CLI = sys.argv[1]
CARS = Path(sys.argv[2]) / "cars"
CHARTS = sorted(CARS.glob("c[0-9]_*.json"))
failures = []

warnings.filterwarnings("ignore", category=DeprecationWarning)

try:
    import jsonschema
except ImportError:
    jsonschema = None


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


class Server:
    def __init__(self, session_dir):
        self.proc = subprocess.Popen([CLI, "serve", "--port", "0", "--session-dir", str(session_dir)],
                                     stderr=subprocess.PIPE, text=True)
        line = self.proc.stderr.readline()
        m = re.search(r"listening on (http://\S+)", line)
        if not m:
            self.proc.kill()
            raise SystemExit(f"server did not start: {line!r}")
        self.base = m.group(1).rstrip("/")

    def call(self, method, path, body=None, headers=None, content_type="application/json"):
        data = None
        if body is not None:
            data = body.encode() if isinstance(body, str) else json.dumps(body).encode()
        req = urllib.request.Request(self.base + path, data=data, method=method, headers=dict(headers or {}))
        if data is not None:
            req.add_header("Content-Type", content_type)
        try:
            with urllib.request.urlopen(req, timeout=30) as r:
                return r.status, r.headers, r.read().decode()
        except urllib.error.HTTPError as e:
            return e.code, e.headers, e.read().decode()

    def json(self, method, path, body=None, headers=None):
        status, _, text = self.call(method, path, body, headers)
        return status, json.loads(text)

    def stop(self):
        self.proc.send_signal(signal.SIGTERM)
        try:
            return self.proc.wait(timeout=10)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            return None


def make_validator(schemas):
    if jsonschema is None:
        print("skip schema validation: jsonschema not installed")
        return lambda name, doc: None
    registry_doc = dict(schemas)

    def validate(name, doc):
        schema = dict(registry_doc[name])
        # References look like {"$ref": "#/<name>"}; resolve them against the whole document.
        resolver = jsonschema.RefResolver(base_uri="", referrer=registry_doc)
        try:
            jsonschema.validate(doc, schema, resolver=resolver)
            check(True, f"{name} matches its schema")
        except jsonschema.ValidationError as e:
            check(False, f"{name} matches its schema: {e.message}")

    return validate


def main():
    with tempfile.TemporaryDirectory() as tmp:
        srv = Server(tmp)
        try:
            status, schemas = srv.json("GET", "/schemas")
            check(status == 200, "GET /schemas")
            validate = make_validator(schemas)

            status, created = srv.json("POST", "/sessions", {})
            check(status == 201, "create session")
            validate("session_created", created)
            sid = created["session_id"]
            base = f"/sessions/{sid}"

            status, ds = srv.json("POST", base + "/datasets", {
                "data": (CARS / "car_sales.csv").read_text(), "format": "csv",
                "schema": json.loads((CARS / "car_sales.schema.json").read_text())})
            check(status == 201, "upload dataset")
            validate("dataset_created", ds)

            mined_cli = json.loads(subprocess.run(
                [CLI, "mine", "-d", str(CARS / "car_sales.csv"), "--schema", str(CARS / "car_sales.schema.json"),
                 *sum((["-c", str(c)] for c in CHARTS), [])], capture_output=True, text=True, check=True).stdout)
            for i, chart in enumerate(CHARTS):
                status, payload = srv.json("POST", base + "/charts", chart.read_text())
                check(status == 201, f"add chart {chart.name}")
                validate("chart_facts", payload)
                payload.pop("revision")
                cli_chart = mined_cli["charts"][i]
                same = [f["fact"]["id"] for f in payload["facts"]] == [f["fact"]["id"] for f in cli_chart["facts"]] \
                    and payload["facts"] == cli_chart["facts"]
                check(same, f"{chart.name}: service facts equal CLI mine output")

            status, headers, text = srv.call("PUT", base + "/story/facts/c1/trend")
            check(status == 200 and headers.get("ETag") == '"7"', "select fact bumps revision to 7")
            validate("story_outline", json.loads(text))
            srv.call("PUT", base + "/story/facts/c3/extreme-max/compact")
            status, story = srv.json("GET", base + "/story")
            validate("story_outline", story)
            check([s["title"] for s in story["slides"]][0] == "Findings about Sales and Year", "generated title")

            status, fact = srv.json("POST", base + "/facts", {"chart": "c4", "fact_type": "outlier", "focus": "X3"})
            check(status == 201, "custom fact")
            validate("fact_response", fact)
            status, fact = srv.json("PATCH", base + "/facts/c4/outlier/X3", {"description": "X3 sells."})
            check(status == 200 and fact["fact"]["description"] == "X3 sells.", "patch description")
            srv.call("PUT", base + "/story/facts/c4/outlier/X3")

            status, story = srv.json("GET", base)
            rev = story["revision"]
            status, moved = srv.json("POST", base + "/story/moves",
                                     {"op": "move_slide", "slide": {"of_fact": "c4/outlier/X3"}, "position": 0},
                                     {"If-Match": f'"{rev}"'})
            check(status == 200 and moved["slides"][0]["facts"][0]["id"] == "c4/outlier/X3", "move with If-Match")
            status, err = srv.json("POST", base + "/story/moves",
                                   {"op": "move_slide", "slide": {"of_fact": "c1/trend"}, "position": 0},
                                   {"If-Match": f'"{rev}"'})
            check(status == 409 and err["error"]["code"] == "RevisionConflict", "stale If-Match gets 409")
            validate("error", err)

            for fmt, ctype in [("json", "application/json"), ("markdown", "text/markdown"), ("html", "text/html")]:
                status, headers, text = srv.call("POST", f"{base}/export?format={fmt}")
                check(status == 200 and headers.get("Content-Type", "").startswith(ctype), f"export {fmt}")
                if fmt == "json":
                    validate("deck", json.loads(text))

            status, err = srv.json("GET", "/sessions/sess-000000000000/story")
            check(status == 404 and err["error"]["code"] == "UnknownId", "unknown session gets 404")
            status, err = srv.json("POST", base + "/charts", '{"mark":"bar","encoding":{"x":"Nope","y":"Sales"}}')
            check(status == 422 and err["error"]["code"] == "UnknownColumn", "bad chart gets 422")

            status, before = srv.json("GET", base + "/story")
        finally:
            code = srv.stop()
        check(code == 0, f"SIGTERM shuts down cleanly (exit {code})")

        # A new process over the same directory serves the same session.
        srv = Server(tmp)
        try:
            status, after = srv.json("GET", base + "/story")
            check(status == 200 and after == before, "session survives a restart")
            status, _ = srv.json("PUT", base + "/story/facts/c2/trend")
            check(status == 200, "restored session accepts edits")
        finally:
            srv.stop()

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
