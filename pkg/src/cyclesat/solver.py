"""A self-contained CDCL SAT solver with external-propagator hooks.

Features the enumeration pipeline relies on: two-watched-literal
propagation, first-UIP clause learning with cheap minimization, VSIDS-style
activities, Luby restarts, LBD-based deletion of learned clauses,
incremental solving under assumptions with unsat cores, permanent external
clauses added during search, and all-solutions enumeration with blocking
clauses vetted by a user propagator.

Literals are signed integers at the API boundary (DIMACS style) and are
encoded internally as var<<1 | sign.  Externally added clauses and
blocking clauses are pinned: they are never deleted, since they carry
symmetry information whose loss would break completeness of the breaking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

from .errors import PropagatorContractViolation


def _enc(lit: int) -> int:
    return (lit << 1) if lit > 0 else ((-lit) << 1) | 1


def _dec(enc: int) -> int:
    return (enc >> 1) if not (enc & 1) else -(enc >> 1)


def _luby(x: int) -> int:
    """x-th term (0-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x %= size
    return 1 << seq


@dataclass
class SolveResult:
    status: str  # "sat" | "unsat" | "unknown"
    model: Optional[list[bool]] = None  # indexed by variable, model[0] unused
    core: Optional[list[int]] = None  # subset of the given assumptions


@dataclass
class PropagatorHooks:
    """Callbacks consulted during search and at full assignments.

    on_complete is called for every full assignment before it is reported;
    returning a clause suppresses the model and installs the clause.
    on_partial is called before every `partial_frequency`-th decision; a
    returned clause must be falsified or unit under the current trail.
    """

    on_complete: Callable[[list[bool]], Optional[list[int]]]
    on_partial: Optional[Callable[["AssignmentView"], Optional[list[int]]]] = None
    partial_frequency: int = 50


class AssignmentView:
    """Read-only view of the current assignment: get(var) -> True/False/None."""

    __slots__ = ("_sol",)

    def __init__(self, sol: "Solver"):
        self._sol = sol

    def get(self, var: int):
        v = self._sol._val[var << 1]
        if v == 0:
            return None
        return v > 0


class Solver:
    """CDCL solver over variables 1..num_vars.

    Branching is static: variables are picked in index order with saved
    phases (initially positive for the first `num_static` variables,
    negative for the rest).  The enumeration pipeline numbers the matrix
    variables first, in cell order with values ascending, so the trail
    prefix follows the lexicographic cell order the minimality check
    consumes.  Activity scores are still kept per variable (bumped during
    conflict analysis) for clause-quality bookkeeping.
    """

    def __init__(self, num_vars: int, num_static: int = 0, seed: int = 0, max_learnts: float = 4000.0):
        self.num_vars = num_vars
        self.num_static = num_static
        self.seed = seed
        n2 = (num_vars + 1) << 1
        self._val = [0] * n2
        self._watches: list[list[list[int]]] = [[] for _ in range(n2)]
        self._level = [0] * (num_vars + 1)
        self._reason: list[Optional[list[int]]] = [None] * (num_vars + 1)
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._activity = [0.0] * (num_vars + 1)
        self._var_inc = 1.0
        self._phase = [1] * (num_static + 1) + [-1] * (num_vars - num_static)
        self._static_head = 1
        self._seen = bytearray(num_vars + 1)
        self._learnts: list[list[int]] = []
        self._lbd: dict[int, int] = {}
        self._externals: list[list[int]] = []
        self._clauses: list[list[int]] = []
        self._max_learnts = max_learnts
        self._asm_stack: list[int] = []  # assumptions currently held as levels 1..k
        self.ok = True
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.restarts = 0
        self.trace = None  # optional text stream for conflict/restart logging

    # ------------------------------------------------------------------ basics

    def _current_level(self) -> int:
        return len(self._trail_lim)

    def value(self, lit: int) -> int:
        """1 if lit true, -1 if false, 0 if unassigned."""
        return self._val[_enc(lit)]

    def assignment_view(self) -> AssignmentView:
        return AssignmentView(self)

    def _attach(self, c: list[int]):
        self._watches[c[0]].append(c)
        self._watches[c[1]].append(c)

    def _detach(self, c: list[int]):
        self._watches[c[0]].remove(c)
        self._watches[c[1]].remove(c)

    def _enqueue(self, enc: int, reason: Optional[list[int]]):
        val = self._val
        val[enc] = 1
        val[enc ^ 1] = -1
        v = enc >> 1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(enc)

    def _new_level(self):
        self._trail_lim.append(len(self._trail))

    def _cancel_until(self, lvl: int):
        if len(self._trail_lim) <= lvl:
            return
        trail = self._trail
        val = self._val
        phase = self._phase
        reason = self._reason
        lim = self._trail_lim[lvl]
        head = self._static_head
        for idx in range(len(trail) - 1, lim - 1, -1):
            enc = trail[idx]
            v = enc >> 1
            val[enc] = 0
            val[enc ^ 1] = 0
            phase[v] = -1 if (enc & 1) else 1
            reason[v] = None
            if v < head:
                head = v
        self._static_head = head
        del trail[lim:]
        del self._trail_lim[lvl:]
        if len(self._asm_stack) > lvl:
            del self._asm_stack[lvl:]
        self._qhead = lim

    def add_clause(self, lits: Sequence[int]) -> bool:
        """Install an original clause; call before or between searches."""
        if not self.ok:
            return False
        self._cancel_until(0)
        enc_lits = []
        seen = set()
        for l in lits:
            e = _enc(l)
            if e ^ 1 in seen:
                return True  # tautology
            if e in seen:
                continue
            seen.add(e)
            if self._val[e] == 1:
                return True
            if self._val[e] != -1:
                enc_lits.append(e)
        if not enc_lits:
            self.ok = False
            return False
        if len(enc_lits) == 1:
            self._enqueue(enc_lits[0], None)
            if self._propagate() is not None:
                self.ok = False
                return False
            return True
        self._clauses.append(enc_lits)
        self._attach(enc_lits)
        return True

    def add_cnf(self, clauses: Sequence[Sequence[int]]):
        for cl in clauses:
            if not self.add_clause(cl):
                break

    # ------------------------------------------------------------- propagation

    def _propagate(self) -> Optional[list[int]]:
        val = self._val
        watches = self._watches
        trail = self._trail
        level = self._level
        reason = self._reason
        lvl = len(self._trail_lim)
        qhead = self._qhead
        ntrail = len(trail)
        nprops = 0
        confl = None
        while qhead < ntrail:
            p = trail[qhead]
            qhead += 1
            nprops += 1
            fenc = p ^ 1
            ws = watches[fenc]
            i = 0
            j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                c0 = c[0]
                if c0 == fenc:
                    c0 = c[1]
                    c[0] = c0
                    c[1] = fenc
                if val[c0] == 1:
                    ws[j] = c
                    j += 1
                    continue
                moved = False
                for t in range(2, len(c)):
                    lt = c[t]
                    if val[lt] != -1:
                        c[1] = lt
                        c[t] = fenc
                        watches[lt].append(c)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = c
                j += 1
                if val[c0] == -1:
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    confl = c
                    qhead = ntrail
                    break
                val[c0] = 1
                val[c0 ^ 1] = -1
                v = c0 >> 1
                level[v] = lvl
                reason[v] = c
                trail.append(c0)
                ntrail += 1
            del ws[j:]
            if confl is not None:
                break
        self._qhead = qhead
        self.propagations += nprops
        return confl

    # ---------------------------------------------------------------- learning

    def _bump(self, v: int):
        act = self._activity
        act[v] += self._var_inc
        if act[v] > 1e100:
            for i in range(1, self.num_vars + 1):
                act[i] *= 1e-100
            self._var_inc *= 1e-100

    def _analyze(self, confl: list[int]) -> tuple[list[int], int, int]:
        """First-UIP learning. Returns (learnt encoded, backjump level, lbd)."""
        seen = self._seen
        level = self._level
        trail = self._trail
        cur = len(self._trail_lim)
        learnt = [0]
        path = 0
        idx = len(trail) - 1
        p = -1
        cl = confl
        while True:
            start = 0 if p == -1 else 1
            for t in range(start, len(cl)):
                q = cl[t]
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            cl = self._reason[v]
            seen[v] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        collected = learnt
        # cheap local minimization: drop literals implied by the rest
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = self._reason[q >> 1]
            if r is None:
                keep.append(q)
                continue
            if all(seen[x >> 1] or level[x >> 1] == 0 for x in r[1:]):
                continue
            keep.append(q)
        learnt = keep
        if len(learnt) == 1:
            bt = 0
        else:
            mx = 1
            for t in range(2, len(learnt)):
                if level[learnt[t] >> 1] > level[learnt[mx] >> 1]:
                    mx = t
            learnt[1], learnt[mx] = learnt[mx], learnt[1]
            bt = level[learnt[1] >> 1]
        lbd = len({level[q >> 1] for q in learnt})
        for q in collected:
            seen[q >> 1] = 0
        return learnt, bt, lbd

    def _record_learnt(self, learnt: list[int], bt: int, lbd: int):
        self._cancel_until(bt)
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
        else:
            self._learnts.append(learnt)
            self._lbd[id(learnt)] = lbd
            self._attach(learnt)
            self._enqueue(learnt[0], learnt)
        self._var_inc /= 0.95

    def _on_conflict(self, confl: list[int]) -> bool:
        """Learn from a conflict; False when the formula is proved unsat."""
        self.conflicts += 1
        if self.trace is not None:
            self.trace.write(f"conflict {self.conflicts} level {len(self._trail_lim)}\n")
        if not self._trail_lim:
            self.ok = False
            return False
        # the clause may sit entirely below the current level (external
        # clauses, conflicts among batched assumptions): drop down first
        level = self._level
        top = max(level[q >> 1] for q in confl)
        if top == 0:
            self.ok = False
            return False
        if top < len(self._trail_lim):
            self._cancel_until(top)
        learnt, bt, lbd = self._analyze(confl)
        self._record_learnt(learnt, bt, lbd)
        return True

    def _reduce_db(self):
        """Drop the worst half of the deletable learned clauses."""
        locked = set()
        for v in range(1, self.num_vars + 1):
            r = self._reason[v]
            if r is not None:
                locked.add(id(r))
        ranked = sorted(
            (c for c in self._learnts if id(c) not in locked and len(c) > 2 and self._lbd[id(c)] > 2),
            key=lambda c: (self._lbd[id(c)], -len(c)),
        )
        drop = set(id(c) for c in ranked[len(ranked) // 2 :])
        if not drop:
            self._max_learnts *= 1.3
            return
        kept = []
        for c in self._learnts:
            if id(c) in drop:
                self._detach(c)
                del self._lbd[id(c)]
            else:
                kept.append(c)
        self._learnts = kept
        self._max_learnts *= 1.3

    # ---------------------------------------------------------------- decisions

    def _pick_branch_lit(self) -> Optional[int]:
        val = self._val
        v = self._static_head
        num_vars = self.num_vars
        while v <= num_vars and val[v << 1] != 0:
            v += 1
        self._static_head = v
        if v > num_vars:
            return None
        return (v << 1) if self._phase[v] > 0 else (v << 1) | 1

    # ------------------------------------------------------ incremental solving

    def _analyze_final(self, p_enc: int, n_assumption_levels: int) -> list[int]:
        """Assumptions implying the falsity of assumption literal p."""
        core = [_dec(p_enc)]
        if n_assumption_levels == 0:
            return core
        seen = self._seen
        seen[p_enc >> 1] = 1
        trail = self._trail
        for idx in range(len(trail) - 1, -1, -1):
            enc = trail[idx]
            v = enc >> 1
            if not seen[v]:
                continue
            seen[v] = 0
            if self._level[v] == 0:
                continue
            r = self._reason[v]
            if r is None:
                core.append(_dec(enc))
            else:
                for q in r[1:]:
                    if self._level[q >> 1] > 0:
                        seen[q >> 1] = 1
        seen[p_enc >> 1] = 0
        return core

    def solve(self, assumptions: Sequence[int] = (), conflict_budget: Optional[int] = None) -> SolveResult:
        """Search under assumptions; learned clauses persist across calls.

        Returns SAT with a complete model, UNSAT with a sufficient subset of
        the assumptions, or UNKNOWN when the conflict budget runs out.
        Assumption levels shared with the previous call are kept in place,
        so runs over similar assumption sets skip most re-propagation.
        """
        if not self.ok:
            return SolveResult("unsat", core=[])
        asm = [_enc(l) for l in assumptions]
        held = self._asm_stack
        keep = 0
        limit_keep = min(len(asm), len(held))
        while keep < limit_keep and held[keep] == asm[keep]:
            keep += 1
        self._cancel_until(keep)
        budget = conflict_budget
        restart_count = 0
        limit = 100 * _luby(restart_count)
        since_restart = 0
        nasm = len(asm)
        while True:
            confl = self._propagate()
            if confl is not None:
                if not self._on_conflict(confl):
                    return SolveResult("unsat", core=[])
                since_restart += 1
                if budget is not None:
                    budget -= 1
                    if budget <= 0:
                        self._cancel_until(len(self._asm_stack))
                        return SolveResult("unknown")
                continue
            lvl = len(self._trail_lim)
            if lvl < nasm:
                p = asm[lvl]
                v = self._val[p]
                if v == -1:
                    core = self._analyze_final(p, lvl)
                    return SolveResult("unsat", core=core)
                self._new_level()
                self._asm_stack.append(p)
                if v == 0:
                    self._enqueue(p, None)
                continue
            if len(self._trail) == self.num_vars:
                model = [False] * (self.num_vars + 1)
                val = self._val
                for v in range(1, self.num_vars + 1):
                    model[v] = val[v << 1] == 1
                self._cancel_until(nasm)
                return SolveResult("sat", model=model)
            if since_restart >= limit:
                restart_count += 1
                self.restarts += 1
                if self.trace is not None:
                    self.trace.write(f"restart {self.restarts}\n")
                since_restart = 0
                limit = 100 * _luby(restart_count)
                self._cancel_until(nasm)
                continue
            if len(self._learnts) >= self._max_learnts:
                self._reduce_db()
            lit = self._pick_branch_lit()
            self.decisions += 1
            self._new_level()
            self._enqueue(lit, None)

    # ------------------------------------------------------- external clauses

    def add_external_clause(self, lits: Sequence[int]) -> Optional[list[int]]:
        """Permanently install a clause during search.

        Returns a conflicting clause for the caller's conflict handling if
        the clause is falsified (after backjumping to its highest level);
        propagates immediately if it is unit.  None otherwise.
        """
        if not self.ok:
            return None
        enc_lits = []
        seen = set()
        for l in lits:
            e = _enc(l)
            if e ^ 1 in seen:
                enc_lits = None  # tautology: nothing to do
                break
            if e not in seen:
                seen.add(e)
                enc_lits.append(e)
        if enc_lits is None:
            return None
        if not enc_lits:
            self.ok = False
            return None
        val = self._val
        if len(enc_lits) == 1:
            e = enc_lits[0]
            self._cancel_until(0)
            if val[e] == -1:
                self.ok = False
                return None
            if val[e] == 0:
                self._enqueue(e, None)
                confl = self._propagate()
                if confl is not None and not self._on_conflict(confl):
                    return None
            return None
        level = self._level
        # watch order: satisfied literals, then unassigned, then false by level
        # descending; a satisfied watch prevents a spurious unit propagation
        def rank(e: int):
            v = val[e]
            if v == 1:
                return (0, level[e >> 1])
            if v == 0:
                return (1, 0)
            return (2, -level[e >> 1])

        enc_lits.sort(key=rank)
        self._externals.append(enc_lits)
        self._attach(enc_lits)
        first, second = enc_lits[0], enc_lits[1]
        if val[first] == 0 and val[second] == -1:
            self._enqueue(first, enc_lits)
            return None
        if val[first] == -1:
            top = max(level[e >> 1] for e in enc_lits)
            if top == 0:
                self.ok = False
                return None
            self._cancel_until(top)
            return enc_lits
        return None

    # -------------------------------------------------------------- enumeration

    def enumerate_models(self, hooks: PropagatorHooks, blocking_fn: Callable[[list[bool]], Sequence[int]]) -> Iterator[list[bool]]:
        """All-solutions search.

        Every full assignment is shown to hooks.on_complete first; if it
        returns a clause the model is suppressed, otherwise the model is
        yielded and blocked via blocking_fn.  hooks.on_partial is consulted
        before every partial_frequency-th decision and may inject a
        falsified or unit clause.
        """
        view = AssignmentView(self)
        restart_count = 0
        limit = 100 * _luby(restart_count)
        since_restart = 0
        while self.ok:
            confl = self._propagate()
            if confl is not None:
                if not self._on_conflict(confl):
                    return
                since_restart += 1
                continue
            if len(self._trail) == self.num_vars:
                model = [False] * (self.num_vars + 1)
                val = self._val
                for v in range(1, self.num_vars + 1):
                    model[v] = val[v << 1] == 1
                clause = hooks.on_complete(model)
                if clause is None:
                    yield model
                    clause = blocking_fn(model)
                if not self._handle_hook_clause(clause, at_full=True):
                    return
                continue
            if since_restart >= limit:
                restart_count += 1
                self.restarts += 1
                if self.trace is not None:
                    self.trace.write(f"restart {self.restarts}\n")
                since_restart = 0
                limit = 100 * _luby(restart_count)
                self._cancel_until(0)
                continue
            if len(self._learnts) >= self._max_learnts:
                self._reduce_db()
            self.decisions += 1
            if hooks.on_partial is not None and self.decisions % hooks.partial_frequency == 0:
                clause = hooks.on_partial(view)
                if clause is not None:
                    if not self._handle_hook_clause(clause, at_full=False):
                        return
                    continue
            lit = self._pick_branch_lit()
            self._new_level()
            self._enqueue(lit, None)

    def _handle_hook_clause(self, clause: Sequence[int], at_full: bool) -> bool:
        """Install a propagator clause; False when enumeration is finished."""
        vals = [self.value(l) for l in clause]
        if any(v == 1 for v in vals):
            raise PropagatorContractViolation("returned clause is satisfied")
        unassigned = sum(1 for v in vals if v == 0)
        if unassigned > 1:
            raise PropagatorContractViolation("returned clause has several free literals")
        if unassigned == 1 and at_full:
            raise PropagatorContractViolation("free literal in a clause at a full assignment")
        confl = self.add_external_clause(clause)
        if not self.ok:
            return False
        if confl is not None and not self._on_conflict(confl):
            return False
        return True

    def stats(self) -> dict:
        return {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
            "restarts": self.restarts,
            "learned": len(self._learnts),
        }
