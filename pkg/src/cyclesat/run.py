"""Per-diagonal enumeration: wiring the engine, minimality hooks, and stats.

Each selected diagonal is an independent subproblem: its axioms are
encoded, a fresh solver enumerates models, and a minimality backend vets
every full assignment (and, at the configured frequency, partial ones)
through the propagator hooks.  Diagonals can run in separate processes;
results are merged and sorted afterwards, so the worker count never
changes the output.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Optional

from .cycleset import CycleSet, PartialCycleSet, extract_partial
from .encoding import Cnf, encode_axioms, decode_model
from .errors import NotPropagatingError
from .learning import blocking_clause, breaking_clause, optimize_clause, propagation_clause
from .mincheck import Minimal, Propagate, SearchBudget, Unknown, Witness
from .mincheck import check as backtrack_check
from .sat_mincheck import OracleInstance
from .sat_mincheck import check as oracle_check
from .solver import PropagatorHooks, Solver
from .symmetry import Diagonal, representative_diagonals

BACKEND_DEFAULTS = {
    "backtrack": {"freq": 50, "node_limit": 200},
    "incremental": {"freq": 100, "conflict_limit": 10},
}


@dataclass
class RunConfig:
    n: int
    diagonal: Optional[str] = None  # cycle notation, or None/"all" for every class
    backend: str = "incremental"
    freq: Optional[int] = None
    node_limit: int = 200
    conflict_limit: int = 10
    eo_method: str = "binary"
    workers: int = 1
    out_path: Optional[str] = None
    stats_path: Optional[str] = None
    seed: int = 0
    dimacs_dir: Optional[str] = None
    trace_path: Optional[str] = None
    sorted_output: bool = True

    def __post_init__(self):
        if self.backend not in BACKEND_DEFAULTS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.eo_method not in ("binary", "commander"):
            raise ValueError(f"unknown ExactlyOne method {self.eo_method!r}")
        if self.n < 2:
            raise ValueError("size must be at least 2")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.freq is None:
            self.freq = BACKEND_DEFAULTS[self.backend]["freq"]


@dataclass
class DiagStats:
    """Counts and per-category times for one diagonal's enumeration."""

    diagonal: str
    solutions: int = 0
    partial_checks: int = 0
    complete_checks: int = 0
    outcomes: dict = field(default_factory=lambda: {
        "partial_witness": 0,
        "partial_propagate": 0,
        "partial_minimal": 0,
        "partial_unknown": 0,
        "complete_witness": 0,
        "complete_minimal": 0,
    })
    time: dict = field(default_factory=lambda: {
        "partial_nonminimal": 0.0,
        "partial_noconclusion": 0.0,
        "complete_nonminimal": 0.0,
        "complete_minimal": 0.0,
    })
    total_time: float = 0.0
    engine: dict = field(default_factory=dict)

    @property
    def mincheck_time(self) -> float:
        return sum(self.time.values())


class MinimalityHooks:
    """Propagator callbacks running the configured minimality backend."""

    def __init__(self, cnf: Cnf, diagonal: Diagonal, config: RunConfig):
        self.varmap = cnf.varmap
        self.diagonal = diagonal
        self.config = config
        self.stats = DiagStats(diagonal=diagonal.label())
        if config.backend == "incremental":
            self._complete_oracle = OracleInstance("complete", config.n, diagonal, config.eo_method)
            self._partial_oracle = OracleInstance("partial", config.n, diagonal, config.eo_method)
        else:
            self._complete_oracle = None
            self._partial_oracle = None

    def _check_complete(self, p: PartialCycleSet):
        if self.config.backend == "backtrack":
            return backtrack_check(p, self.diagonal, complete=True)
        return oracle_check(p, self._complete_oracle)

    def _check_partial(self, p: PartialCycleSet):
        if self.config.backend == "backtrack":
            budget = SearchBudget(max_nodes=self.config.node_limit, frequency=self.config.freq)
            return backtrack_check(p, self.diagonal, budget, complete=False)
        return oracle_check(p, self._partial_oracle, budget=self.config.conflict_limit)

    def on_complete(self, model) -> Optional[list[int]]:
        t0 = time.perf_counter()
        c = decode_model(model, self.varmap)
        p = PartialCycleSet.from_cycle_set(c)
        out = self._check_complete(p)
        st = self.stats
        st.complete_checks += 1
        if isinstance(out, Minimal):
            st.outcomes["complete_minimal"] += 1
            st.time["complete_minimal"] += time.perf_counter() - t0
            return None
        assert isinstance(out, Witness)
        clause = optimize_clause(breaking_clause(p, out.perm, out.cell, self.varmap), self.varmap)
        st.outcomes["complete_witness"] += 1
        st.time["complete_nonminimal"] += time.perf_counter() - t0
        return clause

    def on_partial(self, view) -> Optional[list[int]]:
        t0 = time.perf_counter()
        p = extract_partial(view, self.varmap)
        out = self._check_partial(p)
        st = self.stats
        st.partial_checks += 1
        clause = None
        if isinstance(out, Witness):
            clause = optimize_clause(breaking_clause(p, out.perm, out.cell, self.varmap), self.varmap)
            st.outcomes["partial_witness"] += 1
        elif isinstance(out, Propagate):
            try:
                clause = propagation_clause(p, out.perm, out.cell, out.literal, self.varmap)
                st.outcomes["partial_propagate"] += 1
            except NotPropagatingError:
                st.outcomes["partial_minimal"] += 1
        elif isinstance(out, Unknown):
            st.outcomes["partial_unknown"] += 1
        else:
            st.outcomes["partial_minimal"] += 1
        key = "partial_nonminimal" if clause is not None else "partial_noconclusion"
        st.time[key] += time.perf_counter() - t0
        return clause


def enumerate_diagonal(config: RunConfig, diagonal: Diagonal) -> tuple[list[CycleSet], DiagStats]:
    """Enumerate all lexicographically minimal cycle sets for one diagonal."""
    t0 = time.perf_counter()
    cnf = encode_axioms(config.n, diagonal, config.eo_method)
    if config.dimacs_dir:
        _dump_dimacs(cnf, config, diagonal)
    solver = Solver(cnf.num_vars, num_static=cnf.varmap.num_matrix_vars, seed=config.seed)
    trace_fh = None
    if config.trace_path:
        trace_fh = open(config.trace_path, "a", encoding="utf-8")
        trace_fh.write(f"# diagonal {diagonal.label()}\n")
        solver.trace = trace_fh
    solver.add_cnf(cnf.clauses)
    hooks_impl = MinimalityHooks(cnf, diagonal, config)
    hooks = PropagatorHooks(
        on_complete=hooks_impl.on_complete,
        on_partial=hooks_impl.on_partial,
        partial_frequency=config.freq,
    )
    vm = cnf.varmap

    def blocking(model):
        return blocking_clause(decode_model(model, vm), vm)

    solutions = []
    try:
        for model in solver.enumerate_models(hooks, blocking):
            solutions.append(decode_model(model, vm))
    finally:
        if trace_fh is not None:
            trace_fh.close()
    st = hooks_impl.stats
    st.solutions = len(solutions)
    st.total_time = time.perf_counter() - t0
    st.engine = solver.stats()
    return solutions, st


def _dump_dimacs(cnf: Cnf, config: RunConfig, diagonal: Diagonal):
    import os

    os.makedirs(config.dimacs_dir, exist_ok=True)
    tag = diagonal.label().replace(" ", "").replace("(", "_").replace(")", "")
    base = os.path.join(config.dimacs_dir, f"axioms_n{config.n}{tag or '_id'}")
    with open(base + ".cnf", "w", encoding="utf-8") as fh:
        fh.write(cnf.to_dimacs())
    with open(base + ".vars", "w", encoding="utf-8") as fh:
        fh.write(cnf.varmap.sidecar_text())


def selected_diagonals(config: RunConfig) -> list[Diagonal]:
    if config.diagonal in (None, "all"):
        return representative_diagonals(config.n)
    return [Diagonal.parse(config.diagonal, config.n)]


def _worker(payload: tuple) -> tuple[str, list[str], dict]:
    config_dict, label = payload
    config = RunConfig(**config_dict)
    diagonal = Diagonal.parse(label, config.n)
    sols, st = enumerate_diagonal(config, diagonal)
    return label, [c.to_line() for c in sols], asdict(st)


def run_enumerate(config: RunConfig) -> tuple[list[CycleSet], dict]:
    """Enumerate over the selected diagonals, merge, sort, and report stats."""
    diagonals = selected_diagonals(config)
    per_diag: dict[str, list[CycleSet]] = {}
    stats: dict[str, dict] = {}
    if config.workers > 1 and len(diagonals) > 1:
        payloads = [(asdict(config), d.label()) for d in diagonals]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for label, lines, st in pool.map(_worker, payloads):
                per_diag[label] = [CycleSet.from_line(s) for s in lines]
                stats[label] = st
    else:
        for d in diagonals:
            sols, st = enumerate_diagonal(config, d)
            per_diag[d.label()] = sols
            stats[d.label()] = asdict(st)
    merged: list[CycleSet] = []
    for d in diagonals:
        merged.extend(per_diag[d.label()])
    if config.sorted_output:
        merged.sort()
    return merged, stats


def write_solutions(solutions: list[CycleSet], path: Optional[str]):
    text = "".join(c.to_line() + "\n" for c in solutions)
    if path is None or path == "-":
        import sys

        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def write_stats(stats: dict, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(stats, fh, indent=2, sort_keys=True)
        fh.write("\n")


def render_stats_table(stats: dict) -> str:
    """Per-diagonal table mirroring the four check-time categories."""
    header = [
        "diagonal", "#sols", "time(s)", "%total",
        "#partial", "p-nonmin%", "p-noconc%",
        "#complete", "c-nonmin%", "c-min%", "mincheck%",
    ]
    total_time = sum(st["total_time"] for st in stats.values()) or 1.0
    rows = []
    for label in sorted(stats, key=lambda s: (len(s), s)):
        st = stats[label]
        t = st["total_time"] or 1e-12
        tm = st["time"]
        mc = sum(tm.values())
        rows.append([
            label,
            str(st["solutions"]),
            f"{st['total_time']:.2f}",
            f"{100.0 * st['total_time'] / total_time:.1f}",
            str(st["partial_checks"]),
            f"{100.0 * tm['partial_nonminimal'] / t:.2f}",
            f"{100.0 * tm['partial_noconclusion'] / t:.2f}",
            str(st["complete_checks"]),
            f"{100.0 * tm['complete_nonminimal'] / t:.2f}",
            f"{100.0 * tm['complete_minimal'] / t:.2f}",
            f"{100.0 * mc / t:.2f}",
        ])
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i]) for i in range(len(header))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    for r in rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(header))))
    return "\n".join(lines) + "\n"
