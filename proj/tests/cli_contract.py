"""Contract checks for the rfloer command line: schema, determinism, exit codes."""

import json
import subprocess
import sys

import jsonschema

RUNS = [
    ["rfh-w0", "--model", "cp:2", "--m", "3", "--degrees", "-6..6"],
    ["rfh-w0", "--model", "surface:1", "--m", "2", "--degrees", "-2..3"],
    ["rfh-w0", "--model", "point", "--m", "1"],
    ["rfh-w0", "--model", "cp:2", "--m", "2", "--window", "-5/2..7/3", "--degrees", "-4..4"],
    ["rfh-full", "--model", "cp:2", "--m", "2", "--tau", "3/1"],
    ["rfh-full", "--model", "cp:2", "--m", "2", "--tau", "2/1", "--coeff", "fp:5"],
    ["rfh-full", "--model", "cp:2", "--m", "2", "--tau", "2/1"],
    ["rfh-full", "--model", "cp:2", "--m", "4", "--tau", "100/1"],
    ["rfh-full", "--model", "cp:2", "--m", "1", "--tau", "1/2", "--truncation", "6"],
    ["gysin", "--model", "cp:3", "--m", "4", "--degrees", "-6..6"],
    ["gysin", "--model", "surface:2", "--m", "3", "--degrees", "-2..3"],
    ["transfer", "--model", "cp:2", "--m", "5"],
    ["orderability", "--model", "cp:2", "--m", "1"],
    ["orderability", "--model", "cp:2", "--m", "3"],
    ["cp2-demo", "--m", "2"],
]

USAGE_ERRORS = [
    ["rfh-w0", "--tau", "1.5"],
    ["rfh-w0", "--tau", "0"],
    ["rfh-w0", "--degrees", "3..1"],
    ["rfh-w0", "--model", "torus"],
    ["rfh-full", "--coeff", "fp:4"],
    ["rfh-w0", "--bogus"],
    ["rfh-w0", "--format", "xml"],
    [],
]


def run(exe, args):
    return subprocess.run([exe, *args], capture_output=True, text=True, check=False)


def main():
    exe, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path, encoding="utf-8") as f:
        schema = json.load(f)
    failures = []

    for args in RUNS:
        a = run(exe, [*args, "--format", "json"])
        b = run(exe, [*args, "--format", "json"])
        if a.returncode != 0:
            failures.append(f"{args}: exit {a.returncode}: {a.stderr.strip()}")
            continue
        if a.stdout != b.stdout:
            failures.append(f"{args}: output differs between runs")
        try:
            jsonschema.validate(json.loads(a.stdout), schema)
        except (ValueError, jsonschema.ValidationError) as e:
            failures.append(f"{args}: {e}")
        if run(exe, args).returncode != 0:
            failures.append(f"{args}: markdown run failed")

    for args in USAGE_ERRORS:
        r = run(exe, args)
        if r.returncode != 2:
            failures.append(f"{args}: expected exit 2, got {r.returncode}")

    table = json.loads(run(exe, RUNS[0] + ["--format", "json"]).stdout)["results"]
    for cell in table:
        want = {"free": 0, "torsion": [3]} if cell["degree"] % 2 else "0"
        if cell["group"] != want:
            failures.append(f"cp:2 m=3 degree {cell['degree']}: {cell['group']}")

    full = json.loads(run(exe, RUNS[4] + ["--format", "json"]).stdout)["results"]
    for cell in full:
        want = {"Qm": 2} if cell["degree"] % 2 else "0"
        if cell["group"] != want:
            failures.append(f"cp:2 m=2 tau=3 degree {cell['degree']}: {cell['group']}")

    text = run(exe, ["transfer", "--model", "cp:2", "--m", "5"]).stdout.strip()
    if text != "P∘T = T∘P = 5·id: PASS":
        failures.append(f"transfer text: {text!r}")
    text = run(exe, ["orderability", "--model", "cp:2", "--m", "1"]).stdout.splitlines()[0]
    if text != "RFH^{w0} = 0; orderability: unknown":
        failures.append(f"orderability text: {text!r}")

    for f in failures:
        print("FAIL", f)
    print(f"{len(RUNS)} runs, {len(USAGE_ERRORS)} usage errors, {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
