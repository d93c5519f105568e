"""Quantified boolean formulas: parsing, printing, evaluation, normalization.

Input format is line oriented, QDIMACS-like:

    p qbf <nvars> <nclauses>
    e 1
    a 2
    ...
    1 -2 3 0

Quantifier lines appear in prefix order, one variable each; clause lines are
signed variable numbers terminated by 0 (negative = negated literal).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .board import ParseError


@dataclass(frozen=True)
class Literal:
    variable: int  # 1-based
    negated: bool = False

    def __str__(self) -> str:
        return f"{'-' if self.negated else ''}{self.variable}"


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not 1 <= len(self.literals) <= 3:
            raise ParseError(f"clause width must be 1..3, got {len(self.literals)}")

    def holds(self, assignment: dict[int, bool]) -> bool:
        return any(assignment[l.variable] != l.negated for l in self.literals)


EXISTS = "e"
FORALL = "a"


@dataclass(frozen=True)
class QbfFormula:
    quantifiers: tuple[str, ...]  # one of EXISTS/FORALL per variable, x1..xn
    clauses: tuple[Clause, ...]

    @property
    def nvars(self) -> int:
        return len(self.quantifiers)

    def is_normalized(self) -> bool:
        q = self.quantifiers
        alternating = all(
            q[k] == (EXISTS if k % 2 == 0 else FORALL) for k in range(len(q))
        )
        return alternating and all(len(c.literals) == 3 for c in self.clauses)


def parse_qbf(text: str) -> QbfFormula:
    nvars = nclauses = None
    quantifiers: list[str] = []
    qvars: list[int] = []
    clauses: list[Clause] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if nvars is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "qbf":
                raise ParseError(f"bad problem line {line!r}", lineno)
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"bad counts in problem line {line!r}", lineno) from None
        elif parts[0] in (EXISTS, FORALL):
            if len(parts) != 2:
                raise ParseError(f"quantifier line must be '{parts[0]} <var>'", lineno)
            try:
                v = int(parts[1])
            except ValueError:
                raise ParseError(f"bad variable {parts[1]!r}", lineno) from None
            if v != len(quantifiers) + 1:
                raise ParseError(
                    f"quantifier for x{v} out of order (expected x{len(quantifiers) + 1})",
                    lineno,
                )
            quantifiers.append(parts[0])
            qvars.append(v)
        else:
            try:
                nums = [int(p) for p in parts]
            except ValueError:
                raise ParseError(f"bad clause line {line!r}", lineno) from None
            if not nums or nums[-1] != 0:
                raise ParseError("clause line must end with 0", lineno)
            nums = nums[:-1]
            if not nums:
                raise ParseError("empty clause", lineno)
            lits = []
            for num in nums:
                if num == 0:
                    raise ParseError("0 inside clause", lineno)
                lits.append(Literal(abs(num), num < 0))
            clauses.append(Clause(tuple(lits)))
    if nvars is None:
        raise ParseError("missing problem line", 1)
    if len(quantifiers) != nvars:
        raise ParseError(f"expected {nvars} quantifier lines, got {len(quantifiers)}", 1)
    if nclauses != len(clauses):
        raise ParseError(f"expected {nclauses} clauses, got {len(clauses)}", 1)
    for c in clauses:
        for l in c.literals:
            if not 1 <= l.variable <= nvars:
                raise ParseError(f"free variable x{l.variable} in clause", 1)
    return QbfFormula(tuple(quantifiers), tuple(clauses))


def print_qbf(f: QbfFormula) -> str:
    lines = [f"p qbf {f.nvars} {len(f.clauses)}"]
    for k, q in enumerate(f.quantifiers, start=1):
        lines.append(f"{q} {k}")
    for c in f.clauses:
        lines.append(" ".join(str(l) for l in c.literals) + " 0")
    return "\n".join(lines) + "\n"


def evaluate(f: QbfFormula) -> bool:
    """Recursive semantics: exists = OR, forall = AND over both values."""

    def rec(k: int, assignment: dict[int, bool]) -> bool:
        if k > f.nvars:
            return all(c.holds(assignment) for c in f.clauses)
        results = []
        for val in (False, True):
            assignment[k] = val
            results.append(rec(k + 1, assignment))
        del assignment[k]
        if f.quantifiers[k - 1] == EXISTS:
            return any(results)
        return all(results)

    return rec(1, {})


def evaluate_truth_table(f: QbfFormula) -> bool:
    """Independent oracle: materialize the full truth table, then fold."""
    n = f.nvars
    table = {}
    for bits in product((False, True), repeat=n):
        assignment = {k + 1: bits[k] for k in range(n)}
        table[bits] = all(c.holds(assignment) for c in f.clauses)

    def fold(prefix: tuple[bool, ...]) -> bool:
        k = len(prefix)
        if k == n:
            return table[prefix]
        vals = [fold(prefix + (v,)) for v in (False, True)]
        return any(vals) if f.quantifiers[k] == EXISTS else all(vals)

    return fold(())


def normalize(f: QbfFormula) -> QbfFormula:
    """Strictly alternating prefix starting with exists; width-3 clauses.

    Fresh dummy variables enforce alternation; they never occur in the matrix
    so the truth value is preserved.  Short clauses are padded by repeating
    their last literal.
    """
    new_quantifiers: list[str] = []
    mapping: dict[int, int] = {}
    for old_index, q in enumerate(f.quantifiers, start=1):
        expected = EXISTS if len(new_quantifiers) % 2 == 0 else FORALL
        if q != expected:
            new_quantifiers.append(expected)  # dummy, unused in the matrix
        mapping[old_index] = len(new_quantifiers) + 1
        new_quantifiers.append(q)
    if not new_quantifiers:
        new_quantifiers.append(EXISTS)

    new_clauses = []
    for c in f.clauses:
        lits = [Literal(mapping[l.variable], l.negated) for l in c.literals]
        while len(lits) < 3:
            lits.append(lits[-1])
        new_clauses.append(Clause(tuple(lits)))
    return QbfFormula(tuple(new_quantifiers), tuple(new_clauses))
