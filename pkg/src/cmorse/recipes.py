"""Checked-in replication recipes and their runner.

A recipe is a pair of files in ``cmorse/recipes``:

``<name>.json``
    an ordinary CLI configuration, passed verbatim with ``--config``;
``<name>.checks.json``
    ``{"title": str, "expect_exit": int, "checks": [check, ...]}``.

Every check holds a ``claim`` (plain-language statement), a ``kind`` and
kind-specific fields.  Rows can be narrowed with ``where``, a list of
``[column, op, value]`` triples, with op one of ``== != < <= > >=``.

kinds
    argmin_near      column, x, target, steps: argmin of column over x lies within
                     ``steps`` grid steps of target
    ratio_gt         column, x, hi, lo, factor: value at x=hi exceeds factor * value at x=lo
    labels_present   column, labels: each label appears at least once
    none_match       column, value: no row carries value
    all_match        column, value: every row carries value
    all_positive     column: every value is > 0
    any_sign         column, sign (+1 or -1): at least one value has that sign
    abs_small        column, ref, eps: |column| <= eps * max(1, |ref|) everywhere
    interior_min     column, x, group: in each group the minimum is not at an end of x
    json_close       key, target, rel: JSON output value within rel of target
    json_equal       key, value
"""

from __future__ import annotations

import csv
import io
import json
import math
import operator
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .cli import main as cli_main

RECIPE_ORDER = (
    "ppd_vs_imag_mass",
    "ppd_family_imag_mass",
    "ppd_vs_imag_range",
    "ppd_region_map",
    "energy_region_map",
    "ros_ppd_vs_imag_mass",
    "ros_ppd_vs_imag_range",
    "ros_region_map",
    "ros_energy_vs_imag_mass",
    "critical_imag_range",
)

_OPS = {"==": operator.eq, "!=": operator.ne, "<": operator.lt, "<=": operator.le,
        ">": operator.gt, ">=": operator.ge}


@dataclass(frozen=True)
class Recipe:
    name: str
    title: str
    config_path: str
    expect_exit: int
    checks: tuple


@dataclass
class RecipeResult:
    name: str
    passed: bool
    exit_code: int
    failures: list = field(default_factory=list)

    def line(self) -> str:
        if self.passed:
            return f"PASS {self.name}"
        return f"FAIL {self.name}: " + "; ".join(self.failures)


def recipe_dir() -> str:
    return str(resources.files("cmorse") / "recipes")


def load_recipe(name: str, directory: str | None = None) -> Recipe:
    directory = directory or recipe_dir()
    with open(os.path.join(directory, name + ".checks.json"), encoding="utf-8") as fh:
        sidecar = json.load(fh)
    return Recipe(
        name=name,
        title=sidecar.get("title", name),
        config_path=os.path.join(directory, name + ".json"),
        expect_exit=int(sidecar.get("expect_exit", 0)),
        checks=tuple(sidecar["checks"]),
    )


def _coerce(text):
    if text == "":
        return math.nan
    try:
        return float(text)
    except ValueError:
        return text


def _parse_output(text: str):
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text), None
    rows = [{k: _coerce(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]
    return None, rows


def _select(rows, where):
    for column, op, value in where or ():
        rows = [r for r in rows if _OPS[op](r[column], value)]
    return rows


def _grid_step(xs):
    xs = sorted(set(xs))
    return min(b - a for a, b in zip(xs, xs[1:])) if len(xs) > 1 else 0.0


def _check_rows(check, rows):
    """None when the check holds, else a short reason."""
    kind = check["kind"]
    rows = _select(rows, check.get("where"))
    if not rows:
        return "no rows selected"
    col = check.get("column")
    if kind == "argmin_near":
        finite = [r for r in rows if math.isfinite(r[col])]
        best = min(finite, key=lambda r: r[col])
        step = _grid_step([r[check["x"]] for r in finite])
        offset = abs(best[check["x"]] - check["target"])
        if offset <= check.get("steps", 1) * step + 1e-12:
            return None
        return f"minimum at {check['x']}={best[check['x']]:.6g}"
    if kind == "ratio_gt":
        def at(x):
            return min(rows, key=lambda r: abs(r[check["x"]] - x))[col]
        hi, lo = at(check["hi"]), at(check["lo"])
        if hi > check["factor"] * lo:
            return None
        return f"ratio {hi / lo:.4g}"
    if kind == "labels_present":
        seen = {r[col] for r in rows}
        missing = [lab for lab in check["labels"] if lab not in seen]
        return None if not missing else f"missing {', '.join(missing)}"
    if kind == "none_match":
        bad = sum(r[col] == check["value"] for r in rows)
        return None if bad == 0 else f"{bad} rows with {col}={check['value']}"
    if kind == "all_match":
        bad = sum(r[col] != check["value"] for r in rows)
        return None if bad == 0 else f"{bad} rows without {col}={check['value']}"
    if kind == "all_positive":
        bad = sum(not r[col] > 0 for r in rows)
        return None if bad == 0 else f"{bad} rows with {col} <= 0"
    if kind == "any_sign":
        hit = any(r[col] * check["sign"] > 0 for r in rows)
        return None if hit else f"no row with sign {check['sign']:+d}"
    if kind == "abs_small":
        eps = check["eps"]
        bad = sum(not abs(r[col]) <= eps * max(1.0, abs(r[check["ref"]])) for r in rows)
        return None if bad == 0 else f"{bad} rows with |{col}| too large"
    if kind == "interior_min":
        groups = {}
        for r in rows:
            groups.setdefault(r[check["group"]], []).append(r)
        bad = []
        for key, members in sorted(groups.items()):
            members = sorted((m for m in members if math.isfinite(m[col])), key=lambda m: m[check["x"]])
            i = min(range(len(members)), key=lambda j: members[j][col])
            if i in (0, len(members) - 1):
                bad.append(f"{check['group']}={key:.6g}")
        return None if not bad else "edge minimum for " + ", ".join(bad)
    raise ValueError(f"unknown check kind {kind!r}")


def _check_doc(check, doc):
    kind = check["kind"]
    value = doc.get(check["key"])
    if kind == "json_close":
        target = check["target"]
        if value is not None and abs(value - target) <= check["rel"] * abs(target):
            return None
        return f"{check['key']}={value!r}"
    if kind == "json_equal":
        return None if value == check["value"] else f"{check['key']}={value!r}"
    raise ValueError(f"check kind {kind!r} needs CSV output")


def run_recipe(recipe: Recipe) -> RecipeResult:
    """Run one recipe through the command-line entry point and evaluate its checklist."""
    with open(recipe.config_path, encoding="utf-8") as fh:
        command = json.load(fh)["command"]
    with tempfile.TemporaryDirectory(prefix="cmorse-recipe-") as tmp:
        out = os.path.join(tmp, "out")
        code = cli_main([command, "--config", recipe.config_path, "--out", out])
        text = ""
        if os.path.exists(out):
            with open(out, encoding="utf-8") as fh:
                text = fh.read()
    failures = []
    if code != recipe.expect_exit:
        failures.append(f"exit code {code}, expected {recipe.expect_exit}")
    if text:
        doc, rows = _parse_output(text)
        for check in recipe.checks:
            reason = _check_doc(check, doc) if doc is not None else _check_rows(check, rows)
            if reason is not None:
                failures.append(f"{check['claim']} ({reason})")
    elif recipe.checks:
        failures.append("no output produced")
    return RecipeResult(recipe.name, not failures, code, failures)


def run_all_recipes(directory: str | None = None, workers: int = 4) -> list[RecipeResult]:
    """Every recipe, evaluated independently; results come back in RECIPE_ORDER."""
    recipes = [load_recipe(name, directory) for name in RECIPE_ORDER]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_recipe, recipes))


def summary(results) -> str:
    passed = sum(r.passed for r in results)
    lines = [r.line() for r in results]
    lines.append(f"{passed}/{len(results)} recipes passed")
    return "\n".join(lines) + "\n"
