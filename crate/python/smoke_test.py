"""Smoke test for the morphplan Python bindings.

Build first:
    cargo build -p morphplan-py --features extension-module
then run:
    python3 python/smoke_test.py

If `morphplan_py` is not installed, the freshly built library is loaded
from target/{release,debug}.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import morphplan_py

        return morphplan_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("libmorphplan_py.so", "libmorphplan_py.dylib", "morphplan_py.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                loader = importlib.machinery.ExtensionFileLoader("morphplan_py", str(path))
                spec = importlib.util.spec_from_loader("morphplan_py", loader)
                module = importlib.util.module_from_spec(spec)
                loader.exec_module(module)
                return module
    sys.exit("morphplan_py not found; build it with `cargo build -p morphplan-py --features extension-module`")


def main():
    mp = load()

    model = mp.Model.builtin("wireless")
    assert len(model.leaves) == 11
    s5g = mp.Configuration.builtin("S5G")
    assert model.validate(s5g) == []
    assert model.render(s5g) == (
        "(B11_6 * B12_4) * (B21_8 * B22_2) * (B31_5 * B32_5) * (B41_5 * B42_3 * B43_2 * (B441_1 * B442_1))"
    )

    s6g, s7g = mp.Configuration.builtin("S6G"), mp.Configuration.builtin("S7G")
    deltas = model.diff(s6g, s7g)
    assert deltas == [("B442", "B442_1", "B442_2")]
    assert model.apply(s6g, deltas, id="S7G") == s7g
    assert model.diff(s5g, s5g) == []

    broken = mp.Configuration("X", "S", {k: v for k, v in s5g.assignment.items() if k != "B442"})
    assert model.validate(broken) == ["unassigned leaf: B442"]

    again = mp.Model.from_json(model.to_json())
    assert again.to_json() == model.to_json()

    stage1, stage2 = mp.StagePlan.builtin()
    table9 = stage2.instance()
    for solver in ("dp", "greedy", "exhaustive"):
        sol = table9.solve(solver)
        assert (sol.profit, sol.cost) == ("17.0", "17.5"), sol
    table8 = stage1.instance()
    assert table8.verify([(1, 2), (2, 2), (3, 3), (4, 3), (5, 2)]) == ["budget exceeded: 24.0 > 19.0"]
    assert table8.solve().profit == "17.6"

    small = mp.Instance([[(2, 3), ("4.5", 4.0)], [(1.5, "1.0")]], 5)
    assert small.solve().selection == [2, 1]
    try:
        mp.Instance([[(1, 0)]], 0, "exclusive").solve()
        raise AssertionError("expected InfeasibleError")
    except mp.InfeasibleError:
        pass

    report = json.loads(mp.plan_example())
    assert report["chain"] == "S5G => S5G_adv1 => S5G_adv2"
    notes = [a["message"] for a in report["stages"][0]["annotations"]]
    assert any("budget exceeded: 24.0 > 19.0" in n for n in notes)
    assert mp.plan(model, s5g, [stage1, stage2]) == mp.plan_example()
    assert mp.plan_example(text=True).startswith("strategy: ")

    docs = mp.datasets()
    assert (ROOT / "data" / "table9.json").read_text() == docs["table9.json"]

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
