"""Scaling experiments.

Each suite returns a report dict (``suite``, ``columns``, ``rows``,
``summary``); :func:`write_report` stores it as JSON plus a CSV of the rows.
Timings vary between runs; every other field is deterministic.
"""
from __future__ import annotations

import csv
import json
import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import kernels
from .errors import UnknownSuite
from .exact import solve_binary_exact
from .fptas import FptasConfig, build_table, dp_min_min_binary, round_vectors
from .instances import random_binary, random_subset
from .planar import LogField
from .zonotope import minkowski_vertices, topk_sweep_candidates


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def fit_exponent(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    slope, _ = np.polyfit(np.log(np.asarray(xs, dtype=float)),
                          np.log(np.asarray(ys, dtype=float)), 1)
    return float(slope)


def suite_fptas(n: int = 6, seed: int = 2024) -> dict:
    inst = random_binary(seed, n)
    eps_list = [Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]
    rows = []
    for eps in eps_list:
        res, secs = _timed(dp_min_min_binary, inst, FptasConfig(eps))
        rows.append({"epsilon": str(eps), "T": res.T, "table_entries": res.table_entries,
                     "reachable_states": res.reachable_states, "seconds": round(secs, 6)})
    exponent = fit_exponent([float(e) for e in eps_list], [r["table_entries"] for r in rows])
    t_exponent = fit_exponent([float(e) for e in eps_list], [r["T"] for r in rows])
    return {"suite": "fptas", "columns": list(rows[0]), "rows": rows,
            "summary": {"n": n, "d": 3, "seed": seed, "entries_exponent": exponent,
                        "T_exponent": t_exponent}}


def suite_zonotope(sizes=(4, 8, 16, 32, 64), seed: int = 7) -> dict:
    rows = []
    for n in sizes:
        inst = random_binary(seed + n, n)
        field = LogField.for_tails(inst.distributions)
        segs = [(field.log_point(a.tails), field.log_point(b.tails)) for a, b in inst.pairs]
        verts, secs = _timed(minkowski_vertices, segs, field)
        sub = random_subset(seed + n, n, n // 2)
        field = LogField.for_tails(sub.items)
        pts = [field.log_point(x.tails) for x in sub.items]
        subs, sub_secs = _timed(topk_sweep_candidates, pts, n // 2, field)
        rows.append({"n": n, "binary_candidates": len(verts), "subset_candidates": len(subs),
                     "bound_2n": 2 * n, "seconds": round(secs + sub_secs, 6)})
    worst = max(max(r["binary_candidates"], r["subset_candidates"]) / r["n"] for r in rows)
    return {"suite": "zonotope", "columns": list(rows[0]), "rows": rows,
            "summary": {"seed": seed, "max_candidates_per_n": worst}}


def suite_exact(sizes=tuple(range(4, 15, 2)), seed: int = 11) -> dict:
    rows = []
    for n in sizes:
        inst = random_binary(seed + n, n)
        _, secs = _timed(solve_binary_exact, inst)
        rows.append({"n": n, "selections": 2 ** n, "seconds": round(secs, 6)})
    return {"suite": "exact", "columns": list(rows[0]), "rows": rows,
            "summary": {"seed": seed}}


def _table_with(backend, inst, rounded):
    """``build_table`` with an explicit kernel backend."""
    saved = kernels.backend
    kernels.backend = backend
    try:
        return build_table(inst, rounded)
    finally:
        kernels.backend = saved


def _same_table(a, b) -> bool:
    return all(list(map(int, x[i])) == list(map(int, y[i]))
               for x, y in zip(a.stages, b.stages) for i in range(3))


def suite_kernels(seed: int = 5) -> dict:
    """Compiled against pure-Python kernels on the same workloads."""
    rows = []
    inst = random_binary(seed, 14)
    rounded = round_vectors(inst, FptasConfig(Fraction(1, 4)))
    work = [("advance_stage", lambda b: _table_with(b, inst, rounded), _same_table)]
    rng = np.random.PCG64(seed)
    raw = rng.random_raw(size=(200_000, 6))
    thresholds = np.array([[int(x) for x in sorted(np.random.Generator(rng).integers(
        0, 1 << 53, size=2), reverse=True)] for _ in range(6)], dtype=np.int64)
    work.append(("min_index_counts",
                 lambda b: list(b.min_index_counts(raw, thresholds, 3)),
                 lambda a, b: a == b))
    for name, run, same in work:
        py_out, py_secs = _timed(run, kernels.python_backend)
        row = {"kernel": name, "python_seconds": round(py_secs, 6),
               "compiled_seconds": None, "speedup": None, "identical": None}
        if kernels.compiled_backend is not None:
            c_out, c_secs = _timed(run, kernels.compiled_backend)
            row.update(compiled_seconds=round(c_secs, 6),
                       speedup=round(py_secs / c_secs, 2) if c_secs else math.inf,
                       identical=same(py_out, c_out))
        rows.append(row)
    return {"suite": "kernels", "columns": list(rows[0]), "rows": rows,
            "summary": {"compiled_available": kernels.compiled_backend is not None,
                        "active_backend": kernels.BACKEND}}


SUITES = {"fptas": suite_fptas, "zonotope": suite_zonotope, "exact": suite_exact,
          "kernels": suite_kernels}


def bench_suite(name: str) -> dict:
    try:
        suite = SUITES[name]
    except KeyError:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return suite()


def write_report(report: dict, out_dir) -> tuple:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / f"{report['suite']}.json"
    csv_path = out / f"{report['suite']}.csv"
    json_path.write_text(json.dumps(report, indent=2) + "\n")
    with csv_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=report["columns"])
        writer.writeheader()
        writer.writerows(report["rows"])
    return json_path, csv_path
