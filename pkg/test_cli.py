import importlib
import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

import numpy as np

from app.cli.commands import EXIT_DIAGNOSIS, EXIT_INTERNAL, EXIT_OK, EXIT_VALIDATION, run
from app.cli.job_spec import parse_point
from app.utils.exceptions import ValidationError

W = complex(-0.5, np.sqrt(3) / 2)


def point_text(values):
    return ";".join(f"{complex(z).real!r},{complex(z).imag!r}" for z in values)


KNOWN_POINT = point_text([1, 1, W, 1, W.conjugate(), W, W.conjugate(), 1])


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestQuiverCommand(unittest.TestCase):
    def test_text(self):
        code, out, _ = invoke("quiver")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("8 vertices", out)
        self.assertIn("y4  t1:1,1,1", out)

    def test_json_to_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "quiver.json")
            code, out, _ = invoke("quiver", "-n", "2", "--json", "-o", path)
            self.assertEqual((code, out), (EXIT_OK, ""))
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        self.assertEqual(data["rank"], 2)
        self.assertEqual(len(data["epsilon"]), 3)
        self.assertEqual([v["label"] for v in data["vertices"]], ["a:1", "c:1", "b:1"])

    def test_unknown_surface(self):
        code, _, err = invoke("quiver", "--surface", "genus-7")
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("unknown surface", err)


class TestMapCommand(unittest.TestCase):
    def test_symbolic_components(self):
        code, out, _ = invoke("map", "--word", "L", "--mode", "symbolic")
        self.assertEqual(code, EXIT_OK)
        lines = out.strip().splitlines()
        self.assertEqual(len(lines), 8)
        self.assertTrue(lines[0].startswith("phi*(y1) = "))

    def test_program_listing(self):
        code, out, _ = invoke("map", "--word", "LR", "-n", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("2 mutations", out)

    def test_flip_program_file(self):
        program = {"surface": "torus", "flips": ["c"], "relabeling": [[1, 0], [0, 2]]}
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "program.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump(program, f)
            code, out, _ = invoke("map", "--program", path, "-n", "3", "--json")
        self.assertEqual(code, EXIT_OK)
        steps = json.loads(out)["steps"]
        self.assertEqual(sum("mutate" in s for s in steps), 4)

    def test_missing_word(self):
        code, _, err = invoke("map")
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("--word", err)


class TestTorsionCommand(unittest.TestCase):
    def test_json_report(self):
        code, out, _ = invoke(
            "torsion", "--word", "LR", "--seed-strategy", "user", f"--point={KNOWN_POINT}", "--json"
        )
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data["torsion"], "84")
        self.assertEqual(data["alexander"][0], "1")

    def test_exact_text_report(self):
        code, out, _ = invoke(
            "torsion", "--word", "LR", "--seed-strategy", "user", f"--point={KNOWN_POINT}",
            "--mode", "exact", "-d", "-3",
        )
        self.assertEqual(code, EXIT_OK)
        self.assertIn("(up to sign: 84)", out)
        self.assertIn("exact and numeric polynomials agree", out)

    def test_exact_mode_needs_discriminant(self):
        code, _, err = invoke("torsion", "--word", "LR", "--mode", "exact")
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("-d/--discriminant", err)

    def test_user_strategy_needs_point(self):
        code, _, _ = invoke("torsion", "--word", "LR", "--seed-strategy", "user")
        self.assertEqual(code, EXIT_VALIDATION)

    def test_empty_word_reports_multiplicity(self):
        code, out, err = invoke(
            "torsion", "--word", "", "--seed-strategy", "user", f"--point={point_text([0.5 + 0.5j] * 8)}"
        )
        self.assertEqual(code, EXIT_DIAGNOSIS)
        self.assertEqual(out, "")
        self.assertIn("error [torsion]", err)
        self.assertIn("multiplicity of t = 1: 8 (expected m(n-1) = 2)", err)

    def test_unexpected_exceptions_map_to_an_exit_code(self):
        for exc in (ZeroDivisionError("division by zero"), IndexError("index 9"), TypeError("bad operand")):
            with mock.patch("app.cli.commands.cmd_quiver", side_effect=exc):
                code, out, err = invoke("quiver")
            self.assertEqual(code, EXIT_INTERNAL)
            self.assertEqual(out, "")
            self.assertIn(f"internal error: {type(exc).__name__}", err)
            self.assertNotIn("Traceback", err)

    def test_bad_choice_is_an_argparse_error(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                run(["torsion", "--word", "LR", "--seed-strategy", "random"])
        self.assertEqual(ctx.exception.code, 2)


class TestModuleDocs(unittest.TestCase):
    def test_module_docstrings_are_set(self):
        for name in (
            "app.cli.commands",
            "app.core.cluster.kernels",
            "app.core.quiver.quiver",
            "app.core.ratfun.multipoly",
            "app.core.surface.builtin",
            "app.core.torsion.alexander",
        ):
            self.assertTrue(importlib.import_module(name).__doc__, name)


class TestPointParsing(unittest.TestCase):
    def test_pairs_and_reals(self):
        self.assertEqual(parse_point("1,0; -0.5,2 ;3"), (1 + 0j, -0.5 + 2j, 3 + 0j))

    def test_errors_are_collected(self):
        with self.assertRaises(ValidationError) as ctx:
            parse_point("1,0;x;1,2,3")
        self.assertEqual(len(ctx.exception.errors), 2)


if __name__ == "__main__":
    unittest.main()
