"""Smoke test for the troplag extension module.

Build and install it first:
    pip install -e crates/python --no-build-isolation
"""

import json
import math
import pathlib
import sys

import troplag

DATA = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "data"


def doc(name):
    return (DATA / name).read_text()


def main():
    code, out = troplag.run("genericity", doc("e111.json"))
    rep = json.loads(out)
    assert code == 0 and rep["N"] == 3, rep
    assert rep["schema"] == troplag.SCHEMA

    code, out = troplag.run("realize", doc("n1.json"))
    assert code == 2 and "refusal" in json.loads(out)

    code, out = troplag.run("validate", doc("split_trivial.json"))
    assert code == 0 and json.loads(out)["valid"]

    summary = json.loads(troplag.mirror_summary(1, 1, 1))
    assert summary["N"] == 3 and summary["betti"] == [1, 0, 0]

    zeros = troplag.find_zeros([0.0, -1.0, 0.0, 1.0], 50.0)
    assert len(zeros) == 5
    # ξ(ξ² − 1) is close to ξ³ at this radius: zeros near those of cos 5θ.
    assert all(abs(math.cos(5 * t)) < 1e-3 for t in zeros)

    svg = troplag.render(doc("e111.json"))
    assert svg.count('class="crossing"') == 3

    try:
        troplag.run("genericity", '{"schema": "troplag/1"}')
    except ValueError as e:
        assert "fan" in str(e)
    else:
        raise AssertionError("missing fan accepted")

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
