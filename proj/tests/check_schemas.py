"""Runs each CLI command and validates its JSON against the schema of that command."""
import json
import pathlib
import subprocess
import sys

import jsonschema

kq, schema_dir, data = sys.argv[1], pathlib.Path(sys.argv[2]), sys.argv[3]

CASES = [
    ("chartable", ["chartable", "--group", "A5"], 0),
    ("blocks", ["blocks", "--group", "S4", "--p", "3"], 0),
    ("bonnafe", ["bonnafe", "--group", "S3", "--p", "3", "--class", "2a"], 0),
    ("kuhn", ["kuhn", "--group", "A4", "--p", "2"], 0),
    ("kq0", ["kq0", "--group", "S3", "--p", "2", "--gset", "all-cosets"], 0),
    ("charring", ["charring", "--group", "S3", "--p", "3", "--spectrum", "--support", "regular"], 0),
    ("charring", ["charring", "--group", "Z/4", "--p", "2"], 0),
    ("specialize", ["specialize", "--group", "S4", "--p", "2"], 0),
    ("support", ["support", "--group", "S3", "--p", "2", "--gset", "regular"], 0),
    ("koszul", ["koszul", "--group", "Z4xZ2", "--p", "2", "--check-diagonal"], 0),
    ("koszul", ["koszul", "--group", "Z/9", "--p", "3"], 0),
    ("pperm_decompose", ["pperm", "decompose", "--group", "S3", "--p", "3"], 0),
    ("pperm_classify", ["pperm", "classify", "--group", "D4", "--p", "2"], 0),
    ("lattice_decompose", ["lattice", "decompose", "--p", "5", "--model", "1,2,1"], 0),
    ("lattice_decompose", ["lattice", "decompose", "--matrix", f"{data}/lattice_p3.json"], 0),
    ("lattice_e2", ["lattice", "e2", "--pi0", f"{data}/lattice_p2_a.json", "--pi1", f"{data}/lattice_p2_b.json"], 0),
    ("carlsson", ["carlsson", "--f", "x^4+(x+y+z)*x*y*z", "--search", "3,4"], 0),
    ("selftest", ["selftest"], 0),
    ("error", ["kuhn", "--group", "S3", "--p", "4"], 2),
    ("error", ["koszul", "--group", "S3", "--p", "2"], 2),
    ("error", ["chartable", "--group", "nonsense"], 2),
    ("error", ["kuhn", "--group", "S3", "--p", "3", "--precision", "0"], 2),
]

failed = 0
for name, args, code in CASES:
    r = subprocess.run([kq, *args], capture_output=True, text=True)
    schema = json.loads((schema_dir / f"{name}.schema.json").read_text())
    try:
        if r.returncode != code:
            raise AssertionError(f"exit {r.returncode}, wanted {code}")
        jsonschema.validate(json.loads(r.stdout), schema)
    except Exception as e:  # noqa: BLE001
        failed += 1
        print(f"FAIL {' '.join(args)}: {e}\n{r.stdout[:400]}")
    else:
        print(f"ok   {' '.join(args)}")
sys.exit(1 if failed else 0)
