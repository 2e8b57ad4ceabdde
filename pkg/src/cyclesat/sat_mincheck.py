"""Incremental SAT-based minimality check.

The witness-existence problem itself is encoded as CNF once per (size,
diagonal) and solved repeatedly under assumptions that pin the current
(partial) cycle set, with learned clauses retained between checks.

Layers: w encodes the checked matrix M, w2 its image M' under the searched
permutation (p layer, restricted to same-cycle-length pairs and forced to
commute with the diagonal), and im channels M[pi(i), pi(j)] = k' so the
image linking stays quadratic instead of degree six.  The complete kind
adds redundant ExactlyOne constraints on both matrix layers and a
bit-lexicographic chain (cells row-major, values descending, so bit order
matches the numeric order) forcing M' < M.  The partial kind reads w as
set membership, drops the ExactlyOne constraints, and chains threshold
viability via bound indicators: g(c,k) holds when min M_c > k, l(c,k) when
max M'_c < k; a satisfying stop certifies a strict separation at some
cell, with every earlier cell bounded.
"""

from __future__ import annotations

from typing import Optional

from .cycleset import PartialCycleSet, Permutation, apply_permutation, strictly_below
from .encoding import Cnf, exactly_one, VarAllocator
from .errors import BudgetOnCompleteCheckError, ShapeMismatchError
from .mincheck import Minimal, MinCheckOutcome, Unknown, Witness
from .solver import Solver
from .symmetry import Diagonal


class OracleInstance:
    """A persistent witness-search SAT instance for one (kind, n, diagonal)."""

    def __init__(self, kind: str, n: int, diagonal: Diagonal, method: str = "binary"):
        if kind not in ("complete", "partial"):
            raise ValueError(f"kind must be 'complete' or 'partial', got {kind!r}")
        if n < 2:
            raise ValueError("n must be at least 2")
        if diagonal.n != n:
            raise ShapeMismatchError("diagonal size mismatch")
        self.kind = kind
        self.n = n
        self.diagonal = diagonal
        self.method = method
        self._build()
        # permutation variables come first and are branched on positively,
        # mirroring the backtracking search's image-assignment order; the
        # learned-clause cap stays small because stale lemmas from earlier
        # checks tax every later assumption propagation
        self.solver = Solver(self.num_vars, num_static=self.num_p_vars, max_learnts=1500.0)
        self.solver.add_cnf(self.clauses)

    # ------------------------------------------------------------------ build

    def _build(self):
        n = self.n
        diag = self.diagonal.values()
        alloc = VarAllocator()
        clauses: list[list[int]] = []
        offdiag = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        cell_values = {
            (i, j): [k for k in range(1, n + 1) if k != diag[i - 1]] for (i, j) in offdiag
        }
        classes = {x: self.diagonal.cycle_len(x) for x in range(1, n + 1)}
        self.p = {
            (i, j): alloc.fresh()
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            if classes[i] == classes[j]
        }
        self.num_p_vars = alloc.next_var - 1
        self.w = {(c, k): alloc.fresh() for c in offdiag for k in cell_values[c]}
        self.w2 = {(c, k): alloc.fresh() for c in offdiag for k in cell_values[c]}
        self.im = {(c, k): alloc.fresh() for c in offdiag for k in range(1, n + 1)}

        w, w2, p, im = self.w, self.w2, self.p, self.im

        # permutation well-formedness, restricted to same-length classes
        for i in range(1, n + 1):
            cols = [p[(i, j)] for j in range(1, n + 1) if (i, j) in p]
            clauses.extend(exactly_one(cols, self.method, alloc))
        for j in range(1, n + 1):
            rows = [p[(i, j)] for i in range(1, n + 1) if (i, j) in p]
            clauses.extend(exactly_one(rows, self.method, alloc))
        # mapping a point maps its whole cycle
        succ = self.diagonal.successor
        for (i, j), var in p.items():
            clauses.append([-var, p[(succ(i), succ(j))]])

        # im(c, k') <-> the permuted source cell holds k'
        for (i, j) in offdiag:
            for i2 in range(1, n + 1):
                if (i, i2) not in p:
                    continue
                for j2 in range(1, n + 1):
                    if j2 == i2 or (j, j2) not in p:
                        continue
                    guard = [-p[(i, i2)], -p[(j, j2)]]
                    for k2 in range(1, n + 1):
                        src = w.get(((i2, j2), k2))
                        if src is None:
                            clauses.append(guard + [-im[((i, j), k2)]])
                        else:
                            clauses.append(guard + [-src, im[((i, j), k2)]])
                            clauses.append(guard + [src, -im[((i, j), k2)]])

        # w2(c, k) <-> im(c, pi(k))
        for (i, j) in offdiag:
            for k in cell_values[(i, j)]:
                for k2 in range(1, n + 1):
                    if (k, k2) not in p:
                        continue
                    clauses.append([-p[(k, k2)], -im[((i, j), k2)], w2[((i, j), k)]])
                    clauses.append([-p[(k, k2)], im[((i, j), k2)], -w2[((i, j), k)]])

        positions = [(c, k) for c in offdiag for k in sorted(cell_values[c], reverse=True)]
        if self.kind == "complete":
            for layer in (w, w2):
                for c in offdiag:
                    clauses.extend(
                        exactly_one([layer[(c, k)] for k in cell_values[c]], self.method, alloc)
                    )
                for i in range(1, n + 1):
                    for k in range(1, n + 1):
                        if k == diag[i - 1]:
                            continue
                        group = [layer[((i, j), k)] for j in range(1, n + 1) if j != i]
                        clauses.extend(exactly_one(group, self.method, alloc))
            self._build_complete_chain(positions, alloc, clauses)
        else:
            self._build_partial_chain(offdiag, cell_values, positions, alloc, clauses)

        self.num_vars = alloc.next_var - 1
        self.clauses = clauses

    def _build_complete_chain(self, positions, alloc, clauses):
        """Bit-lex chain forcing the image strictly below the matrix."""
        w, w2 = self.w, self.w2
        m = len(positions)
        chain = [alloc.fresh() for _ in range(m - 1)]
        first = positions[0]
        clauses.append([w[first], -w2[first]])
        clauses.append([-w2[first], chain[0]])
        clauses.append([w[first], chain[0]])
        for t in range(m - 2):
            nxt = positions[t + 1]
            clauses.append([-chain[t], w[nxt], -w2[nxt]])
            clauses.append([-chain[t], -w2[nxt], chain[t + 1]])
            clauses.append([-chain[t], w[nxt], chain[t + 1]])
        last = positions[m - 1]
        clauses.append([-chain[m - 2], w[last]])
        clauses.append([-chain[m - 2], -w2[last]])
        self.chain = chain

    def _build_partial_chain(self, offdiag, cell_values, positions, alloc, clauses):
        """Threshold chain over bound indicators for the partial order."""
        n = self.n
        w, w2 = self.w, self.w2
        # g(c, k): no value <= k possible in M_c
        self.g = {}
        for c in offdiag:
            for k in range(1, n):
                below = [w[(c, v)] for v in cell_values[c] if v <= k]
                var = alloc.fresh()
                self.g[(c, k)] = var
                for x in below:
                    clauses.append([-var, -x])
                clauses.append([var] + below)
        # l(c, k): no value >= k possible in M'_c
        self.l = {}
        for c in offdiag:
            for k in range(2, n + 1):
                above = [w2[(c, v)] for v in cell_values[c] if v >= k]
                var = alloc.fresh()
                self.l[(c, k)] = var
                for x in above:
                    clauses.append([-var, -x])
                clauses.append([var] + above)
        # thresholds k = n..2 per cell; chain may stop only at a certified
        # separation: min M_c >= k > max M'_c
        chain_positions = [(c, k) for c in offdiag for k in range(n, 1, -1)]
        m = len(chain_positions)
        chain = [alloc.fresh() for _ in range(m)]
        clauses.append([chain[0]])
        for t, (c, k) in enumerate(chain_positions):
            gv = self.g[(c, k - 1)]
            lv = self.l[(c, k)]
            if t == m - 1:
                clauses.append([-chain[t], gv])
                clauses.append([-chain[t], lv])
            else:
                clauses.append([-chain[t], gv, lv])
                clauses.append([-chain[t], gv, chain[t + 1]])
                clauses.append([-chain[t], lv, chain[t + 1]])
        self.chain = chain

    # ------------------------------------------------------------------ query

    def to_cnf(self) -> Cnf:
        """The instance as a plain CNF, for DIMACS dumps."""
        return Cnf([list(c) for c in self.clauses], self.num_vars)

    def assumptions_for(self, p: PartialCycleSet) -> list[int]:
        """Literals pinning the w layer to the given (partial) cycle set."""
        if p.n != self.n:
            raise ShapeMismatchError(f"cycle set of size {p.n}, instance of size {self.n}")
        diag = self.diagonal.values()
        for x in range(1, self.n + 1):
            if p.domain(x, x) != 1 << (diag[x - 1] - 1):
                raise ShapeMismatchError("cycle set disagrees with the instance diagonal")
        out = []
        for (c, k), var in self.w.items():
            if p.domain(*c) & (1 << (k - 1)):
                out.append(var)
            else:
                out.append(-var)
        return out

    def decode_permutation(self, model) -> Permutation:
        images = [0] * self.n
        for (i, j), var in self.p.items():
            if model[var]:
                images[i - 1] = j
        return Permutation(images)


def check(p: PartialCycleSet, inst: OracleInstance, budget: Optional[int] = None) -> MinCheckOutcome:
    """Run one minimality query against a persistent oracle instance.

    SAT decodes the permutation layer and locates the strict cell on the
    caller's side; UNSAT means lexicographically minimal; UNKNOWN is
    possible only for the partial kind under a conflict budget.
    """
    if inst.kind == "complete":
        if budget is not None:
            raise BudgetOnCompleteCheckError("complete checks must run to completion")
        if not p.is_complete():
            raise ValueError("complete-kind oracle needs a fully defined cycle set")
    res = inst.solver.solve(inst.assumptions_for(p), conflict_budget=budget)
    if res.status == "unknown":
        return Unknown()
    if res.status == "unsat":
        return Minimal()
    pi = inst.decode_permutation(res.model)
    cell = strictly_below(apply_permutation(pi, p), p)
    if cell is None:
        raise RuntimeError("oracle produced a permutation that is not a witness")
    return Witness(pi, cell)
