"""Graded complexes, exact ranks, dimension tables, and witness checks.

With shift parameter a = 0 the reduced differential preserves the grade
s = weight - letters, so the complex splits into finite graded pieces and
each cohomology dimension is an exact rank computation over the rationals.
With a != 0 the a-part lowers s by one, so the subcomplex of cochains
supported on grades <= S is finite and closed under d; its cohomology is
computed at S and S + 1 and compared (stabilization).

Ranks use fraction-free integer elimination; the tests check it against a
naive rational Gaussian oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .anick import Chain, enumerate_chains, grade, is_chain
from .cochain import reduced_row
from .scalars import format_rational

Rational = Fraction


def graded_basis(n: int, s: int) -> list[Chain]:
    """Degree-n chains of grade exactly s, in lexicographic order."""
    if n == 0:
        return [()] if s == 0 else []
    return [c for c in enumerate_chains(n, s) if grade(c) == s]


def window_basis(n: int, s_max: int) -> list[Chain]:
    """Degree-n chains of grade <= s_max (the truncated complex basis)."""
    if n == 0:
        return [()]
    return enumerate_chains(n, s_max)


@dataclass
class DiffMatrix:
    """Rows indexed by target chains, columns by source chains."""

    source: list[Chain]
    target: list[Chain]
    entries: list[list[Rational]]  # entries[i][j] = coefficient of source[j] in d(·)(target[i])

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.target), len(self.source))


def matrix_d(
    n: int, source: list[Chain], target: list[Chain], delta: Rational, alpha: Rational
) -> DiffMatrix:
    """Differential from degree n to n + 1 between explicit bases."""
    col_of = {c: j for j, c in enumerate(source)}
    rows = []
    for tgt in target:
        row = [Fraction(0)] * len(source)
        for src, val in reduced_row(tgt).items():
            j = col_of.get(src)
            if j is not None:
                row[j] = val.specialize(delta, alpha)
        rows.append(row)
    return DiffMatrix(source=source, target=target, entries=rows)


def rank(m: DiffMatrix | list[list[Rational]]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    rows = m.entries if isinstance(m, DiffMatrix) else m
    if not rows or not rows[0]:
        return 0
    # clear denominators rowwise; rank is unchanged
    mat: list[list[int]] = []
    for row in rows:
        mult = lcm(*(v.denominator for v in row)) if row else 1
        mat.append([int(v * mult) for v in row])
    nrows, ncols = len(mat), len(mat[0])
    r = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(r + 1, nrows):
            if not any(mat[i][col:]):
                continue
            head = mat[i][col]
            lead = mat[r][col]
            for j in range(col, ncols):
                mat[i][j] = (lead * mat[i][j] - head * mat[r][j]) // prev
        prev = mat[r][col]
        r += 1
        if r == nrows:
            break
    return r


@dataclass
class DimTable:
    """Cohomology dimensions at one parameter point.

    For alpha = 0, ``by_grade[(n, s)]`` holds the graded dimensions and
    ``totals[n]`` their sums.  For alpha != 0 the complex is not graded;
    only ``totals`` is filled (from the truncated complex) together with
    ``stable[n]`` comparing the cutoffs S and S + 1.
    """

    delta: Rational
    alpha: Rational
    n_max: int
    s_max: int
    by_grade: dict[tuple[int, int], int] = field(default_factory=dict)
    totals: dict[int, int] = field(default_factory=dict)
    stable: dict[int, bool] | None = None

    def csv_rows(self) -> list[str]:
        out = []
        d, a = format_rational(self.delta), format_rational(self.alpha)
        if self.by_grade:
            for (n, s), dim in sorted(self.by_grade.items()):
                out.append(f"{d},{a},{n},{s},{dim}")
        else:
            for n in sorted(self.totals):
                out.append(f"{d},{a},{n},,{self.totals[n]}")
        return out

    def as_dict(self) -> dict:
        doc = {
            "delta": format_rational(self.delta),
            "alpha": format_rational(self.alpha),
            "n_max": self.n_max,
            "s_max": self.s_max,
            "totals": {str(n): self.totals[n] for n in sorted(self.totals)},
        }
        if self.by_grade:
            doc["by_grade"] = {
                f"{n},{s}": dim for (n, s), dim in sorted(self.by_grade.items())
            }
        if self.stable is not None:
            doc["stable"] = {str(n): self.stable[n] for n in sorted(self.stable)}
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "DimTable":
        from .scalars import parse_rational

        table = cls(
            delta=parse_rational(doc["delta"]),
            alpha=parse_rational(doc["alpha"]),
            n_max=int(doc["n_max"]),
            s_max=int(doc["s_max"]),
            totals={int(n): int(v) for n, v in doc["totals"].items()},
        )
        for key, dim in doc.get("by_grade", {}).items():
            n, s = key.split(",")
            table.by_grade[(int(n), int(s))] = int(dim)
        if "stable" in doc:
            table.stable = {int(n): bool(v) for n, v in doc["stable"].items()}
        return table


def _grade_range(n: int, s_max: int) -> range:
    # minimal grade in degree n: -1 for single letters, n - 3 beyond
    lo = 0 if n == 0 else (-1 if n == 1 else n - 3)
    return range(lo, s_max + 1)


def cohomology_dims(delta: Rational, n_max: int = 4, s_max: int = 8) -> DimTable:
    """Graded cohomology dimensions for the shift-free module (alpha = 0)."""
    table = DimTable(delta=Fraction(delta), alpha=Fraction(0), n_max=n_max, s_max=s_max)
    bases: dict[tuple[int, int], list[Chain]] = {}
    ranks: dict[tuple[int, int], int] = {}

    def basis(n: int, s: int) -> list[Chain]:
        key = (n, s)
        if key not in bases:
            bases[key] = graded_basis(n, s)
        return bases[key]

    def rank_d(n: int, s: int) -> int:
        key = (n, s)
        if key not in ranks:
            ranks[key] = rank(matrix_d(n, basis(n, s), basis(n + 1, s), delta, Fraction(0)))
        return ranks[key]

    for n in range(1, n_max + 1):
        total = 0
        for s in _grade_range(n, s_max):
            dim_n = len(basis(n, s))
            if dim_n == 0:
                table.by_grade[(n, s)] = 0
                continue
            dim = dim_n - rank_d(n, s) - rank_d(n - 1, s)
            assert dim >= 0, (n, s)
            table.by_grade[(n, s)] = dim
            total += dim
        table.totals[n] = total
    return table


def truncated_dims(delta: Rational, alpha: Rational, n_max: int, S: int) -> dict[int, int]:
    """Cohomology of the finite subcomplex supported on grades <= S."""
    if not alpha:
        raise ValueError("the truncated route is for a nonzero shift")
    bases = {n: window_basis(n, S) for n in range(0, n_max + 2)}
    ranks = {
        n: rank(matrix_d(n, bases[n], bases[n + 1], delta, alpha))
        for n in range(0, n_max + 1)
    }
    out = {}
    for n in range(1, n_max + 1):
        dim = len(bases[n]) - ranks[n] - ranks[n - 1]
        assert dim >= 0, n
        out[n] = dim
    return out


def truncated_cohomology(
    delta: Rational, alpha: Rational, n_max: int = 4, S: int = 8
) -> DimTable:
    """Truncated dims at cutoffs S and S + 1 with per-degree stability flags."""
    at_S = truncated_dims(delta, alpha, n_max, S)
    at_S1 = truncated_dims(delta, alpha, n_max, S + 1)
    table = DimTable(
        delta=Fraction(delta), alpha=Fraction(alpha), n_max=n_max, s_max=S,
        totals=at_S, stable={n: at_S[n] == at_S1[n] for n in at_S},
    )
    return table


def _rref_insert(rows: list[list[Fraction]], vec: list[Fraction]) -> int | None:
    """Reduce vec against rows (kept fully reduced); insert if independent.

    Every stored row has leading coefficient 1 and zeros at the pivot
    columns of all other rows, so one reduction pass suffices.  Returns
    the pivot column of the inserted vector, or None if dependent.
    """
    v = list(vec)
    for row in rows:
        p = next(j for j, x in enumerate(row) if x)
        if v[p]:
            f = v[p]
            for j in range(p, len(v)):
                v[j] -= f * row[j]
    piv = next((j for j, x in enumerate(v) if x), None)
    if piv is None:
        return None
    scale = v[piv]
    v = [x / scale for x in v]
    for row in rows:
        if row[piv]:
            f = row[piv]
            for j in range(piv, len(v)):
                row[j] -= f * v[j]
    rows.append(v)
    return piv


def _kernel_basis(mat: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the nullspace of mat (acting on column vectors)."""
    rows = [list(r) for r in mat]
    nrows = len(rows)
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, col))
        r += 1
        if r == nrows:
            break
    pivot_cols = {c for _, c in pivots}
    out = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, c in pivots:
            vec[c] = -rows[i][free]
        out.append(vec)
    return out


def locate_classes(delta: Rational, n: int, s_max: int = 8) -> list[Chain]:
    """Chains carrying the surviving classes in degree n (alpha = 0).

    Per grade: a kernel basis of the outgoing differential is reduced
    against the incoming image; each new echelon pivot marks the chain
    whose dual coordinate carries one cohomology class.
    """
    found: list[Chain] = []
    for s in _grade_range(n, s_max):
        src = graded_basis(n, s)
        if not src:
            continue
        below = graded_basis(n - 1, s)
        above = graded_basis(n + 1, s)
        d_out = matrix_d(n, src, above, delta, Fraction(0)).entries
        d_in = matrix_d(n - 1, below, src, delta, Fraction(0)).entries
        # image vectors: columns of d_in, i.e. d(e_b) expanded over src
        echelon: list[list[Fraction]] = []
        for j in range(len(below)):
            _rref_insert(echelon, [d_in[i][j] for i in range(len(src))])
        for vec in _kernel_basis(d_out, len(src)):
            piv = _rref_insert(echelon, vec)
            if piv is not None:
                found.append(src[piv])
    return sorted(found)


@dataclass
class ContractionReport:
    degree: int
    delta: Rational
    alpha: Rational
    samples: list[Chain]
    failures: list[tuple[Chain, Fraction, Fraction]]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        head = (
            f"contraction witness, degree {self.degree} at "
            f"(D={format_rational(self.delta)}, a={format_rational(self.alpha)}): "
            f"{len(self.samples)} samples"
        )
        if self.ok:
            return head + ", all reproduced"
        lines = [head + f", {len(self.failures)} FAILED"]
        for c, got, want in self.failures:
            lines.append(f"  {c}: got {got}, want {want}")
        return "\n".join(lines)


def verify_contraction(
    n: int,
    delta: Rational,
    alpha: Rational,
    samples: list[Chain] | None = None,
    alpha_rule=None,
) -> ContractionReport:
    """Check the coboundary witness for cocycles concentrated on (..., 0).

    Cocycle values on chains ending in 0 determine degree-n classes when the
    shift is nonzero; the witness is the degree-(n - 1) cochain

        beta(c') = (-1)^(n-1) * alpha((c', 0)) / a

    on chains c' with a positive last letter, zero elsewhere.  Its reduced
    differential must literally reproduce alpha at every sampled chain.
    """
    if n < 2:
        raise ValueError("witness degrees start at 2")
    alpha = Fraction(alpha)
    if not alpha:
        raise ValueError("the witness construction needs a nonzero shift")
    delta = Fraction(delta)
    if samples is None:
        samples = [c for c in enumerate_chains(n, 8) if c[-1] == 0][:12]
    if alpha_rule is None:
        # deterministic but unstructured sample values
        def alpha_rule(c: Chain) -> Fraction:
            h = 1
            for m in c:
                h = (h * 31 + m + 7) % 1009
            return Fraction(h % 19 - 9, 1 + h % 5)

    sign = Fraction(1 if n % 2 else -1)  # (-1)^(n-1)

    def beta_rule(cp: Chain) -> Fraction:
        if cp[-1] >= 1:
            return sign * alpha_rule(cp + (0,)) / alpha
        return Fraction(0)

    failures = []
    for c in samples:
        if len(c) != n or c[-1] != 0:
            raise ValueError(f"sample {c} is not a degree-{n} chain ending in 0")
        got = Fraction(0)
        for cp, val in reduced_row(c).items():
            if len(cp) == n - 1 and is_chain(cp) and cp[-1] >= 1:
                got += val.specialize(delta, alpha) * beta_rule(cp)
        want = alpha_rule(c)
        if got != want:
            failures.append((c, got, want))
    return ContractionReport(
        degree=n, delta=delta, alpha=alpha, samples=list(samples), failures=failures
    )
