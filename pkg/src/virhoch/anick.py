"""Chains and the free-resolution differential.

Degree-n chains index a basis of the n-th term of a free resolution of the
trivial module over the coefficient algebra.  A letter tuple (m_1, ..., m_n)
is a chain when

    m_1, ..., m_{n-2} >= 2   and   (m_{n-1} >= 2  or  (m_{n-1}, m_n) == (1, 0));

every 1-letter tuple is a chain and so is the empty tuple (degree 0).  Each
adjacent pair of a chain is then a rewriting-rule left-hand side, and the
minimal weight in degree n is 2n - 3 (letters n >= 2), so the grade
``weight - letters`` is bounded below by n - 3.

The differential is computed two ways:

* ``delta_generic`` runs the standard two-operator iteration: ``delta_prime``
  peels the leading letter and merges adjacent slots, ``delta_dprime``
  re-splits the leftmost composite slot while the slot prefix stays a chain.
  Iteration stops when every bracket is a chain of single letters.  This is
  the authority: it only uses the rewriting system.

* ``delta_closed`` evaluates an explicit formula for the same map, with
  separate shapes for chains ending in (1, 0).  It must agree with the
  generic computation term by term; the test suite enforces that on every
  chain in range.

Output elements are ``ResElem``: maps {(target chain, leading word): coeff}
with the leading word of length at most one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from . import algebra
from .algebra import Word, is_obstruction, nf_word, weight

Chain = tuple[int, ...]
Slots = tuple[Word, ...]


def is_chain(c: Chain) -> bool:
    n = len(c)
    if any(m < 0 for m in c):
        return False
    if n <= 1:
        return True
    if any(m < 2 for m in c[: n - 2]):
        return False
    return c[n - 2] >= 2 or (c[n - 2], c[n - 1]) == (1, 0)


def grade(c: Chain) -> int:
    """Weight minus letter count; the differential preserves the filtration."""
    return sum(c) - len(c)


def chain_to_text(c: Chain) -> str:
    return "[" + "|".join(str(m) for m in c) + "]"


def chain_from_text(text: str) -> Chain:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"bad chain literal: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    c = tuple(int(p) for p in inner.split("|"))
    if not is_chain(c):
        raise ValueError(f"{text} is not a chain")
    return c


def enumerate_chains(n: int, s_max: int) -> list[Chain]:
    """All n-letter chains of grade <= s_max, in lexicographic order."""
    if n < 0 or (n >= 2 and s_max < n - 3):
        return []
    if n == 0:
        return [()]
    if n == 1:
        return [(k,) for k in range(0, s_max + 2)]
    budget = n + s_max  # max weight
    out: list[Chain] = []

    def extend(prefix: Chain) -> None:
        used = sum(prefix)
        if len(prefix) == n - 2:
            # tail: either (x>=2, y>=0) or (1, 0)
            if used + 1 <= budget:
                out.append(prefix + (1, 0))
            for x in range(2, budget - used + 1):
                for y in range(0, budget - used - x + 1):
                    out.append(prefix + (x, y))
            return
        # later interior letters need >= 2 each and the tail needs >= 1
        reserve = 2 * (n - 2 - len(prefix) - 1) + 1
        for m in range(2, budget - used - reserve + 1):
            extend(prefix + (m,))

    extend(())
    out.sort()
    return out


# ---------------------------------------------------------------------------
# generic differential

BarElem = dict[tuple[Word, Slots], Fraction]
ResElem = dict[tuple[Chain, Word], Fraction]


def _bar_add(acc: dict, key, val) -> None:
    cur = acc.get(key)
    val = val if cur is None else cur + val
    if val:
        acc[key] = val
    elif key in acc:
        del acc[key]


def delta_prime(slots: Slots) -> BarElem:
    """Peel the first slot out front and merge each adjacent pair.

    [w1|...|wk] maps to w1 [w2|...|wk] plus sum over j of (-1)^j
    [w1|...|NF(w_j w_{j+1})|...|wk], the merged slot expanded multilinearly.
    """
    out: BarElem = {}
    _bar_add(out, (slots[0], slots[1:]), Fraction(1))
    for j in range(1, len(slots)):
        sign = Fraction(-1 if j % 2 else 1)
        for word, q in nf_word(slots[j - 1] + slots[j]).items():
            merged = slots[: j - 1] + (word,) + slots[j + 1 :]
            _bar_add(out, ((), merged), sign * q)
    return out


def delta_dprime(slots: Slots) -> BarElem | None:
    """One rewriting pass on a bracket; None means the bracket is final.

    A bracket of single letters is final when the letters form a chain and
    zero otherwise.  Otherwise let the leftmost composite slot sit at
    position p (0-based): the bracket maps to zero unless the p letters
    before it form a chain that stays a chain after appending the composite
    slot's first letter; in that case the slot is split in two and
    ``delta_prime`` of the longer bracket is taken with sign (-1)^p, plus
    the bracket itself.  The copy regenerated by the merge at the split
    point cancels that last summand.
    """
    p = None
    for idx, w in enumerate(slots):
        if len(w) >= 2:
            p = idx
            break
    if p is None:
        letters = tuple(w[0] for w in slots)
        return None if is_chain(letters) else {}
    prefix = tuple(w[0] for w in slots[:p])
    head = slots[p][0]
    if not (is_chain(prefix) and is_chain(prefix + (head,))):
        return {}
    split = slots[:p] + ((head,), slots[p][1:]) + slots[p + 1 :]
    sign = Fraction(-1 if p % 2 else 1)
    out: BarElem = {}
    for key, q in delta_prime(split).items():
        _bar_add(out, key, sign * q)
    _bar_add(out, ((), slots), Fraction(1))
    return out


class IterationOverflow(RuntimeError):
    """The bracket rewriting failed to stabilize within the step budget."""


def bar_reduce(elem: BarElem, cap: int) -> ResElem:
    """Iterate ``delta_dprime`` over every bracket until all are final."""
    out: ResElem = {}
    steps = 0
    while elem:
        steps += 1
        if steps > cap:
            raise IterationOverflow(f"bracket rewriting exceeded {cap} passes")
        nxt: BarElem = {}
        for (lam, slots), coeff in elem.items():
            res = delta_dprime(slots)
            if res is None:
                _bar_add(out, (tuple(w[0] for w in slots), lam), coeff)
                continue
            for (lam2, slots2), q in res.items():
                if not lam2:
                    _bar_add(nxt, (lam, slots2), coeff * q)
                elif not lam:
                    _bar_add(nxt, (lam2, slots2), coeff * q)
                else:
                    # leading words multiply in the algebra
                    for word, r in nf_word(lam + lam2).items():
                        _bar_add(nxt, (word, slots2), coeff * q * r)
        elem = nxt
    return out


_DELTA_CACHE: dict[Chain, ResElem] = {}


def clear_caches() -> None:
    _DELTA_CACHE.clear()


def delta_generic(c: Chain) -> ResElem:
    """Differential of the basis element indexed by chain c, by iteration."""
    cached = _DELTA_CACHE.get(c)
    if cached is not None:
        return cached
    if not is_chain(c) or not c:
        raise ValueError(f"{c} is not a nonempty chain")
    start = delta_prime(tuple((m,) for m in c))
    out = bar_reduce(start, cap=8 * (len(c) + sum(c)))
    wt = sum(c)
    for (cp, lam) in out:
        # structural invariants of the computed differential
        assert len(lam) <= 1 and is_chain(cp) and len(cp) == len(c) - 1
        assert weight(lam) + sum(cp) in (wt - 1, wt)
    _DELTA_CACHE[c] = out
    return out


# ---------------------------------------------------------------------------
# closed-form differential

def _drop_non_chains(elem: ResElem) -> ResElem:
    return {key: q for key, q in elem.items() if is_chain(key[0])}


def delta_closed(c: Chain) -> ResElem:
    """Explicit formula for the differential; cross-check for the iteration.

    For a chain (i_1, ..., i_n) not ending in (1, 0) the value is built from
    the rule applied to each adjacent pair: the pair merges either to the
    single letter i_j + i_{j+1} - 1 (leading factor v(1) or a scalar) or to
    i_j + i_{j+1} (leading factor v(0)), and the scalar parts collect one
    contribution for every earlier letter.  Chains ending in (1, 0) get the
    same sums over the pairs before the tail plus a fixed tail correction.
    Brackets that are not chains never survive the iteration, so they are
    dropped here as well.
    """
    if not is_chain(c) or not c:
        raise ValueError(f"{c} is not a nonempty chain")
    L = len(c)
    if L == 1:
        return {((), (c[0],)): Fraction(1)}
    special = c[-2:] == (1, 0)
    out: ResElem = {}
    _bar_add(out, (c[1:], (c[0],)), Fraction(1))  # leading letter peels off
    jmax = L - 2 if special else L - 1
    for j in range(1, jmax + 1):
        x, y = c[j - 1], c[j]
        K = x + y - 1
        m_minus = c[: j - 1] + (K,) + c[j + 1 :]
        m_plus = c[: j - 1] + (x + y,) + c[j + 1 :]
        sj = Fraction(-1 if j % 2 else 1)
        frac = Fraction(x * y, K)
        if frac:
            _bar_add(out, (m_minus, (1,)), sj * frac)
            for t in range(1, j):
                _bar_add(out, (m_minus, ()), sj * frac * (c[t - 1] - 1))
        _bar_add(out, (m_minus, ()), sj * Fraction(x * (x - 1), K))
        frac = Fraction((x - 1) * (y - 1), K)
        if frac:
            _bar_add(out, (m_plus, (0,)), -sj * frac)
            for t in range(1, j):
                dec = m_plus[: t - 1] + (m_plus[t - 1] - 1,) + m_plus[t:]
                _bar_add(out, (dec, ()), -sj * frac * c[t - 1])
    if special:
        body = c[:-2]
        sn = Fraction(1 if L % 2 else -1)  # (-1)^(L-1)
        _bar_add(out, (body + (0,), ()), sn)
        _bar_add(out, (body + (1,), (0,)), sn)
        for j, letter in enumerate(body):
            dec = body[:j] + (letter - 1,) + body[j + 1 :]
            _bar_add(out, (dec + (1,), ()), sn * letter)
    return _drop_non_chains(out)


# ---------------------------------------------------------------------------
# composition check

def compose_delta(c: Chain, delta=delta_generic) -> dict[tuple[Chain, Word], Fraction]:
    """Apply the differential twice; the result must vanish identically.

    Leading words multiply through the rewriting system, so the value lives
    in brackets with arbitrary normal leading words.
    """
    if len(c) < 2:
        raise ValueError("need a chain of degree >= 2")
    out: dict[tuple[Chain, Word], Fraction] = {}
    for (c1, lam1), q1 in delta(c).items():
        for (c2, lam2), q2 in delta(c1).items():
            for word, r in nf_word(lam1 + lam2).items():
                _bar_add(out, ((c2), word), q1 * q2 * r)
    return out
