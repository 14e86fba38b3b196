"""Command-line cases with checked-in golden output.

Each case is ``(name, argv without --input, fixture file, expected exit code)``.
Set ``SPECSEQ_REGEN_GOLDEN=1`` to rewrite ``tests/golden/<name>.out``.
"""
from __future__ import annotations

import io
import os
from pathlib import Path

from specseq.cli import run

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"
REGEN = os.environ.get("SPECSEQ_REGEN_GOLDEN") == "1"

CASES = [
    ("snf_identity", ["snf"], "snf_identity.txt", 0),
    ("snf_mixed", ["snf"], "snf_mixed.txt", 0),
    ("cohomology_torsion", ["cohomology"], "complex_torsion.txt", 0),
    ("cohomology_torsion_deg1", ["cohomology", "--degree", "1"], "complex_torsion.txt", 0),
    ("cohomotopy_cobar_z4", ["cohomotopy"], "cobar_z4.txt", 0),
    ("cohomotopy_sign", ["cohomotopy", "--nerve-bound", "2"], "cobar_z2_sign.txt", 0),
    ("cohomotopy_constant_z", ["cohomotopy", "--nerve-bound", "3"], "constant_z.txt", 0),
    ("pi1_s3", ["pi1"], "pi1_s3.txt", 0),
    ("pi1_cobar_z4_z2", ["pi1"], "pi1_cobar_z4_z2.txt", 0),
    ("ss_d2", ["ss-compare"], "ss_d2.txt", 0),
    ("ss_d3", ["ss-compare"], "ss_d3.txt", 0),
    ("ss_bar", ["ss-compare", "--page-max", "4"], "ss_bar.txt", 0),
    ("ss_random_seed3", ["ss-compare", "--seed", "3", "--page-max", "3"], "ss_random.txt", 0),
    ("cech_nerve_z6_z4", ["cech"], "cech_nerve_z6_z4.txt", 0),
    ("cech_sphere", ["cech"], "cech_sphere.txt", 0),
    ("brauer_z2", ["brauer"], "brauer_z2.txt", 0),
    ("brauer_z6_z4", ["brauer"], "brauer_z6_z4.txt", 0),
    ("brauer_sphere", ["brauer"], "brauer_sphere.txt", 0),
]


def run_case(argv, fixture) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv) + ["--input", str(FIXTURES / fixture)], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def golden_path(name: str) -> Path:
    return GOLDEN / (name + ".out")


def check_golden(name: str, text: str) -> bool:
    """Compare with the checked-in file, or write it when regeneration is on."""
    path = golden_path(name)
    if REGEN:
        path.write_text(text, encoding="utf-8", newline="\n")
        return True
    return path.exists() and path.read_text(encoding="utf-8") == text
