"""
Command line walkthrough
========================

Generate an instance, fit it, check the fit against the oracle and draw it,
all through the same entry point as the ``stepfit`` command.
"""
import json
import tempfile
from pathlib import Path

from stepfit.cli import run_cli

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    csv, fit, svg = tmp / "inst.csv", tmp / "fit.json", tmp / "fit.svg"

    run_cli(["gen", "--n", "120", "--k", "3", "--seed", "4", "--profile", "staircase", "--out", str(csv)])
    print(csv.read_text().splitlines()[:3])

    run_cli(["fit", "--input", str(csv), "--k", "3", "--out", str(fit)])
    out = json.loads(fit.read_text())
    print("cost", out["cost"], "boundaries", out["boundaries"])

    code = run_cli(["verify", "--input", str(csv), "--k", "3"])
    print("verify exit code:", code)

    run_cli(["fit", "--input", str(csv), "--k", "3", "--format", "svg", "--out", str(svg)])
    print("svg bytes:", len(svg.read_bytes()))

    # instance problems exit 1 (a CSV carries no k), usage errors exit 2
    print("no k given:", run_cli(["fit", "--input", str(csv)]))
    print("malformed --k:", run_cli(["fit", "--input", str(csv), "--k", "x"]))
