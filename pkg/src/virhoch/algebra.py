"""Rewriting arithmetic in the positive coefficient algebra.

The algebra is generated over the rationals by symbols v(0), v(1), v(2), ...
subject to two reduction rules (a complete rewriting system for the
deg-lex order with v(0) < v(1) < ...):

    v(1)v(0) -> v(0)v(1) + v(0)

    v(n)v(m) -> nm/(n+m-1) v(1)v(n+m-1)
                - (n-1)(m-1)/(n+m-1) v(0)v(n+m)
                + n(n-1)/(n+m-1) v(n+m-1)          for n >= 2, m >= 0

A word is *normal* when no adjacent pair matches a left-hand side, i.e. it
has the shape v(0)^p v(1)^q v(k) with k >= 1 whenever q >= 1.  Every element
has a unique normal form; confluence is exercised by ``check_overlap`` over
all inclusion-free critical pairs and soundness by
``verify_defining_relations`` against the two defining families

    v(n)v(m) - 3 v(n-1)v(m+1) + 3 v(n-2)v(m+2) - v(n-3)v(m+3) = 0   (n >= 3)
    v(n)v(m) - v(m)v(n) = (n-m) v(n+m-1)                            (n > m)

Words are plain int tuples; linear combinations are ``AlgElem``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .scalars import Scalar, format_rational

Word = tuple[int, ...]


def word_from_text(text: str) -> Word:
    """Parse ``"v2.v0"`` or ``"[2|0]"`` (empty word: ``""`` or ``"[]"``)."""
    text = text.strip()
    if text.startswith("["):
        inner = text[1:-1].strip()
        return tuple(int(x) for x in inner.split("|")) if inner else ()
    if not text:
        return ()
    return tuple(int(part.lstrip("v")) for part in text.split("."))


def word_to_text(w: Word) -> str:
    return ".".join(f"v{i}" for i in w)


def weight(w: Word) -> int:
    return sum(w)


def deglex_key(w: Word) -> tuple[int, Word]:
    # deg-lex: compare length first, then letters left to right.
    return (len(w), w)


def is_obstruction(i: int, j: int) -> bool:
    """True when v(i)v(j) is a rule left-hand side."""
    return i >= 2 or (i, j) == (1, 0)


def is_normal_word(w: Word) -> bool:
    return all(not is_obstruction(w[k], w[k + 1]) for k in range(len(w) - 1))


def leftmost_obstruction(w: Word) -> int | None:
    for k in range(len(w) - 1):
        if is_obstruction(w[k], w[k + 1]):
            return k
    return None


def rule_rhs(i: int, j: int) -> list[tuple[Word, Fraction]]:
    """Right-hand side of the rule rewriting v(i)v(j), as (word, coeff) pairs."""
    if not is_obstruction(i, j):
        raise ValueError(f"v({i})v({j}) is not a rule left-hand side")
    if (i, j) == (1, 0):
        return [((0, 1), Fraction(1)), ((0,), Fraction(1))]
    d = Fraction(1, i + j - 1)
    out = [((1, i + j - 1), d * i * j)]
    c0 = -d * (i - 1) * (j - 1)
    if c0:
        out.append(((0, i + j), c0))
    out.append(((i + j - 1,), d * i * (i - 1)))
    return out


def _check_step(parent: Word, child: Word) -> None:
    # Each rewrite must respect the (weight, length) filtration and strictly
    # decrease deg-lex; a violated assert means a broken rule table.
    assert (weight(child), len(child)) <= (weight(parent), len(parent))
    assert deglex_key(child) < deglex_key(parent)


def rewrite_leftmost(w: Word) -> list[tuple[Word, Fraction]]:
    """One rewriting step at the leftmost obstruction (error if normal)."""
    k = leftmost_obstruction(w)
    if k is None:
        raise ValueError(f"{word_to_text(w)} is already normal")
    return _expand_at(w, k)


def _expand_at(w: Word, k: int) -> list[tuple[Word, Fraction]]:
    out = []
    for rhs, coeff in rule_rhs(w[k], w[k + 1]):
        child = w[:k] + rhs + w[k + 2 :]
        _check_step(w, child)
        out.append((child, coeff))
    return out


# Single-word normal forms are pure rational data shared by every scalar
# type, so they are memoized globally.
_NF_CACHE: dict[Word, dict[Word, Fraction]] = {}


def nf_word(w: Word) -> dict[Word, Fraction]:
    """Normal form of one word, as a map {normal word: rational coeff}."""
    cached = _NF_CACHE.get(w)
    if cached is not None:
        return cached
    stack = [w]
    while stack:
        cur = stack[-1]
        if cur in _NF_CACHE:
            stack.pop()
            continue
        k = leftmost_obstruction(cur)
        if k is None:
            _NF_CACHE[cur] = {cur: Fraction(1)}
            stack.pop()
            continue
        children = _expand_at(cur, k)
        missing = [c for c, _ in children if c not in _NF_CACHE]
        if missing:
            stack.extend(missing)
            continue
        total: dict[Word, Fraction] = {}
        for child, coeff in children:
            for word, inner in _NF_CACHE[child].items():
                val = total.get(word, Fraction(0)) + coeff * inner
                if val:
                    total[word] = val
                elif word in total:
                    del total[word]
        _NF_CACHE[cur] = total
        stack.pop()
    return _NF_CACHE[w]


def clear_caches() -> None:
    """Drop memoized normal forms (used by the rule-defect test hook)."""
    _NF_CACHE.clear()


class AlgElem:
    """Linear combination of words, coefficients Fraction or ParamPoly."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        clean: dict[Word, Scalar] = {}
        if terms:
            for word, coeff in terms.items():
                if coeff:
                    prev = clean.get(word)
                    coeff = coeff if prev is None else prev + coeff
                    if coeff:
                        clean[word] = coeff
                    elif word in clean:
                        del clean[word]
        self._terms = clean

    @staticmethod
    def gen(i: int) -> "AlgElem":
        return AlgElem({(i,): Fraction(1)})

    @staticmethod
    def word(w: Word, coeff: Scalar = Fraction(1)) -> "AlgElem":
        return AlgElem({tuple(w): coeff})

    @staticmethod
    def one() -> "AlgElem":
        return AlgElem({(): Fraction(1)})

    def __add__(self, other: "AlgElem") -> "AlgElem":
        out = dict(self._terms)
        for word, coeff in other._terms.items():
            prev = out.get(word)
            val = coeff if prev is None else prev + coeff
            if val:
                out[word] = val
            elif word in out:
                del out[word]
        elem = AlgElem()
        elem._terms = out
        return elem

    def __neg__(self) -> "AlgElem":
        return self.scale(-1)

    def __sub__(self, other: "AlgElem") -> "AlgElem":
        return self + (-other)

    def scale(self, coeff) -> "AlgElem":
        if not coeff:
            return AlgElem()
        return AlgElem({w: coeff * c for w, c in self._terms.items()})

    def __mul__(self, other: "AlgElem") -> "AlgElem":
        out: dict[Word, Scalar] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                word = w1 + w2
                val = c1 * c2
                prev = out.get(word)
                val = val if prev is None else prev + val
                if val:
                    out[word] = val
                elif word in out:
                    del out[word]
        elem = AlgElem()
        elem._terms = out
        return elem

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        raise TypeError("AlgElem is mutable-adjacent; not hashable")

    def terms(self) -> list[tuple[Word, Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: deglex_key(kv[0]))

    def coeff(self, w: Word) -> Scalar:
        return self._terms.get(tuple(w), Fraction(0))

    def is_normal(self) -> bool:
        return all(is_normal_word(w) for w in self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.terms():
            cs = format_rational(c) if isinstance(c, Fraction) else f"({c})"
            parts.append(f"{cs}*{word_to_text(w) or '1'}")
        return " + ".join(parts)

    __repr__ = __str__


def normal_form(x: AlgElem | Word) -> AlgElem:
    """Unique normal form; linear, idempotent, multiplicative with products."""
    if isinstance(x, tuple):
        x = AlgElem.word(x)
    out: dict[Word, Scalar] = {}
    for word, coeff in x._terms.items():
        for nw, q in nf_word(word).items():
            val = coeff * q
            prev = out.get(nw)
            val = val if prev is None else prev + val
            if val:
                out[nw] = val
            elif nw in out:
                del out[nw]
    elem = AlgElem()
    elem._terms = out
    return elem


def derive(x: AlgElem | Word) -> AlgElem:
    """The derivation sending v(n) to -n v(n-1), extended by Leibniz.

    Commutes with normal forms: derive(NF(x)) reduces to NF(derive(x)).
    """
    if isinstance(x, tuple):
        x = AlgElem.word(x)
    out = AlgElem()
    for word, coeff in x._terms.items():
        for k, letter in enumerate(word):
            if letter == 0:
                continue
            child = word[:k] + (letter - 1,) + word[k + 1 :]
            out = out + AlgElem.word(child, coeff * Fraction(-letter))
    return out


def check_overlap(n: int, m: int, p: int) -> bool:
    """Resolve the critical pair on v(n)v(m)v(p); True when confluent.

    Requires both adjacent pairs to be rule left-hand sides, i.e. n >= 2 with
    (m >= 2 or (m, p) == (1, 0)).
    """
    if not (is_obstruction(n, m) and is_obstruction(m, p)):
        raise ValueError(f"({n},{m},{p}) is not an overlap ambiguity")
    w = (n, m, p)
    left = AlgElem({child: c for child, c in _expand_at(w, 0)})
    right = AlgElem({child: c for child, c in _expand_at(w, 1)})
    return normal_form(left) == normal_form(right)


@dataclass
class RelationReport:
    """Outcome of re-checking the defining relations below a bound."""

    bound: int
    locality_checked: int = 0
    commutator_checked: int = 0
    overlaps_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        return (
            f"relations up to {self.bound}: locality {self.locality_checked}, "
            f"commutators {self.commutator_checked}, overlaps {self.overlaps_checked}: {status}"
        )


def verify_defining_relations(bound: int, with_overlaps: bool = True) -> RelationReport:
    """Reduce both defining families with all indices <= bound to zero.

    Optionally also resolves every overlap ambiguity with n, m, p <= bound.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    report = RelationReport(bound=bound)
    for n in range(3, bound + 1):
        for m in range(0, bound + 1):
            elem = (
                AlgElem.word((n, m))
                - AlgElem.word((n - 1, m + 1)).scale(3)
                + AlgElem.word((n - 2, m + 2)).scale(3)
                - AlgElem.word((n - 3, m + 3))
            )
            report.locality_checked += 1
            if normal_form(elem):
                report.violations.append(f"locality({n},{m})")
    for n in range(1, bound + 1):
        for m in range(0, n):
            elem = (
                AlgElem.word((n, m))
                - AlgElem.word((m, n))
                - AlgElem.word((n + m - 1,)).scale(Fraction(n - m))
            )
            report.commutator_checked += 1
            if normal_form(elem):
                report.violations.append(f"commutator({n},{m})")
    if with_overlaps:
        for n in range(2, bound + 1):
            for m in range(2, bound + 1):
                for p in range(0, bound + 1):
                    report.overlaps_checked += 1
                    if not check_overlap(n, m, p):
                        report.violations.append(f"overlap({n},{m},{p})")
            report.overlaps_checked += 1
            if not check_overlap(n, 1, 0):
                report.violations.append(f"overlap({n},1,0)")
    return report


# ---------------------------------------------------------------------------
# negative-control hook: deliberately corrupt the second rule family so the
# downstream consistency suites must fail.  Only the CLI test mode uses this.

_RULE_DEFECT = False
_true_rule_rhs = rule_rhs


def set_rule_defect(enabled: bool) -> None:
    global rule_rhs, _RULE_DEFECT
    from . import anick, cochain  # local import; avoids a cycle at load time

    _RULE_DEFECT = bool(enabled)
    rule_rhs = _defective_rule_rhs if enabled else _true_rule_rhs
    clear_caches()
    anick.clear_caches()
    cochain.clear_caches()


def _defective_rule_rhs(i: int, j: int) -> list[tuple[Word, Fraction]]:
    out = _true_rule_rhs(i, j)
    if i >= 2:
        word, coeff = out[-1]
        out[-1] = (word, coeff + 1)  # perturb one structure constant
    return out
