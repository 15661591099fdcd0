"""CLI reports: schema validity, exit codes, determinism and a few worked values."""

import json
import math
import os
import subprocess
import sys
import unittest
from pathlib import Path

import jsonschema

ZDSYS = sys.argv.pop(1)
ROOT = Path(sys.argv.pop(1))
SPECS = ROOT / "data" / "specs"
SCHEMAS = {p.name.split(".")[0]: json.loads(p.read_text()) for p in (ROOT / "schemas").glob("*.schema.json")}

RUNS = [
    ("tower", "shift", []),
    ("tower", "finite_cycle", []),
    ("tower", "two_point", []),
    ("fiberwise", "shift", ["--depth", "3"]),
    ("fiberwise", "two_point", ["--depth", "2"]),
    ("fiberwise", "quotient_product", ["--depth", "2"]),
    ("approximant", "example52", ["--depth", "2"]),
    ("approximant", "odometer", ["--depth", "3"]),
    ("approximant", "quotient_product", ["--depth", "2"]),
    ("ktheory", "odometer", ["--depth", "3"]),
    ("ktheory", "finite_cycle", ["--depth", "2"]),
    ("ktheory", "shift", ["--depth", "2"]),
    ("berg", "example52", ["--N", "8"]),
    ("berg", "odometer", ["--N", "4", "--depth", "2"]),
    ("berg", "example52", ["--N", "1", "--epsilon", "0.1"]),
    ("identities", "example52", []),
    ("identities", "odometer", ["--depth", "2"]),
]


def run(command, spec, extra, seed=None):
    env = dict(os.environ)
    env.pop("ZDSYS_SEED", None)
    if seed is not None:
        env["ZDSYS_SEED"] = str(seed)
    p = subprocess.run([ZDSYS, command, "--spec", str(SPECS / f"{spec}.json"), *extra],
                       capture_output=True, env=env, timeout=120)
    return p.returncode, p.stdout


class Reports(unittest.TestCase):
    def test_schema_and_exit_codes(self):
        for command, spec, extra in RUNS:
            with self.subTest(command=command, spec=spec, extra=extra):
                code, out = run(command, spec, extra)
                body = json.loads(out)
                self.assertEqual(body["exit_code"], code)
                schema = SCHEMAS["error"] if code == 2 else SCHEMAS[command]
                jsonschema.validate(body, schema)

    def test_byte_identical(self):
        for command, spec, extra in RUNS:
            with self.subTest(command=command, spec=spec):
                first = run(command, spec, extra)
                self.assertEqual(first, run(command, spec, extra))
                for seed in (1, 7, 12345):
                    self.assertEqual(first, run(command, spec, extra, seed))

    def test_text_format(self):
        code, out = run("tower", "shift", ["--format", "text"])
        self.assertEqual(code, 0)
        self.assertIn("return times [1,7]", out.decode())

    def test_out_file(self):
        target = Path(os.environ.get("TMPDIR", "/tmp")) / f"zdsys_cli_{os.getpid()}.json"
        code, out = run("tower", "finite_cycle", ["--out", str(target)])
        self.assertEqual((code, out), (0, b""))
        self.assertEqual(json.loads(target.read_text())["result"]["return_times"], [4])
        target.unlink()

    def test_bad_arguments(self):
        code, out = run("berg", "example52", ["--format", "yaml"])
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(out)["error"]["code"], "InvalidArguments")
        p = subprocess.run([ZDSYS, "tower", "--spec", "/nonexistent.json"], capture_output=True)
        self.assertEqual(p.returncode, 2)
        jsonschema.validate(json.loads(p.stdout), SCHEMAS["error"])

    def test_worked_values(self):
        r = json.loads(run("tower", "shift", [])[1])["result"]
        self.assertEqual((r["T"], r["K"], r["return_times"], r["P1_size"]), (1, [2], [1, 7], 8))
        e = json.loads(run("tower", "two_point", [])[1])
        self.assertEqual(e["error"]["code"], "MaxStepsExceeded")
        self.assertEqual(json.loads(run("tower", "finite_cycle", [])[1])["result"]["return_times"], [4])

        for level in json.loads(run("ktheory", "odometer", ["--depth", "3"])[1])["result"]["levels"]:
            self.assertEqual((level["k1"]["rank"], level["k0"]["rank"]), (1, 1))

        blocks = json.loads(run("approximant", "quotient_product", ["--depth", "2"])[1])["result"]["levels"][-1]
        circles = [b["circle"] for b in blocks["descriptor"]["blocks"]]
        self.assertEqual(circles, [1] + [4] * 4)  # window [0, 3], fiber level 2

        code, out = run("berg", "example52", ["--N", "8"])
        b = json.loads(out)["result"]
        self.assertEqual(code, 0)
        self.assertTrue(b["pass"])
        self.assertLessEqual(b["norm_u_prime_minus_u"], math.pi / 8 + 1e-9)

        code, out = run("berg", "example52", ["--N", "1", "--epsilon", "0.1"])
        self.assertEqual((code, json.loads(out)["error"]["code"]), (2, "PreconditionFailed"))

        self.assertEqual(run("fiberwise", "two_point", [])[0], 1)
        self.assertTrue(json.loads(run("identities", "example52", [])[1])["result"]["all_pass"])


if __name__ == "__main__":
    unittest.main()
