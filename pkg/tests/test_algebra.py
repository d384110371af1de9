"""Rewriting system: normal forms, confluence, derivation compatibility.

The frozen normal-form values below were re-derived with the independent
single-step rewriter at the bottom of this file before being pinned.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from virhoch.algebra import (
    AlgElem,
    check_overlap,
    derive,
    is_normal_word,
    is_obstruction,
    nf_word,
    normal_form,
    rule_rhs,
    verify_defining_relations,
    word_from_text,
    word_to_text,
)

words = st.lists(st.integers(0, 6), max_size=4).map(tuple)
elems = st.lists(
    st.tuples(words, st.fractions(min_value=-5, max_value=5, max_denominator=4)),
    max_size=3,
).map(lambda pairs: sum((AlgElem({w: c}) for w, c in pairs), AlgElem({})))


# --- an independent oracle: one leftmost rewrite step at a time -------------


def _oracle_step(w):
    """First obstruction from the left, expanded by the rule table."""
    for i in range(len(w) - 1):
        if is_obstruction(w[i], w[i + 1]):
            out = []
            for rhs, coeff in rule_rhs(w[i], w[i + 1]):
                if coeff:
                    out.append((w[:i] + rhs + w[i + 2 :], coeff))
            return out
    return None


def _oracle_nf(w):
    acc = {w: Fraction(1)}
    while True:
        target = next((v for v in acc if _oracle_step(v) is not None), None)
        if target is None:
            return {v: c for v, c in acc.items() if c}
        coeff = acc.pop(target)
        for child, c in _oracle_step(target):
            acc[child] = acc.get(child, Fraction(0)) + coeff * c
    # unreachable


# --- obstruction / normal-word structure ------------------------------------


def test_obstruction_table():
    assert is_obstruction(3, 0)
    assert is_obstruction(1, 0)
    assert not is_obstruction(1, 1)
    assert not is_obstruction(0, 5)


def test_normal_word_examples():
    assert is_normal_word((0, 1, 5))
    assert not is_normal_word((2, 0))
    assert not is_normal_word((0, 1, 0))
    assert is_normal_word(())


def test_normal_word_characterization():
    # no adjacent obstruction <=> v(0)^p v(1)^q v(k) with q >= 1 -> k >= 1
    for w in _all_words(4, 6):
        expected = all(
            w[i] <= 1 and (w[i], w[i + 1]) != (1, 0) for i in range(len(w) - 1)
        )
        assert is_normal_word(w) == expected


def _all_words(max_len, max_idx):
    from itertools import product

    for n in range(max_len + 1):
        yield from product(range(max_idx + 1), repeat=n)


# --- normal forms ------------------------------------------------------------


def test_nf_rule_one():
    assert normal_form(AlgElem.word((1, 0))) == AlgElem.word((0, 1)) + AlgElem.word((0,))


def test_nf_rule_two_instance():
    got = normal_form(AlgElem.word((3, 0)))
    assert got == AlgElem.word((0, 3)) + AlgElem.word((2,)).scale(3)


def test_nf_long_word():
    got = normal_form(AlgElem.word((2, 2, 0)))
    want = (
        AlgElem.word((0, 1, 3)).scale(Fraction(4, 3))
        - AlgElem.word((0, 0, 4)).scale(Fraction(1, 3))
        + AlgElem.word((0, 3)).scale(Fraction(2, 3))
        + AlgElem.word((1, 2)).scale(4)
        + AlgElem.word((2,)).scale(2)
    )
    assert got == want
    assert {w: c for w, c in got.terms()} == _oracle_nf((2, 2, 0))


@given(words)
@settings(max_examples=60)
def test_nf_matches_oracle(w):
    assert dict(nf_word(w)) == _oracle_nf(w)


@given(elems)
@settings(max_examples=40)
def test_nf_idempotent_linear(x):
    nx = normal_form(x)
    assert normal_form(nx) == nx
    assert all(is_normal_word(w) for w, _ in nx.terms())
    assert normal_form(x + x) == nx + nx


@given(elems, elems)
@settings(max_examples=25, deadline=None)
def test_nf_multiplicative(x, y):
    assert normal_form(x * y) == normal_form(normal_form(x) * normal_form(y))


# --- derivation --------------------------------------------------------------


def test_derive_examples():
    assert derive(AlgElem.word((3,))) == AlgElem.word((2,)).scale(-3)
    assert derive(AlgElem.one()) == AlgElem({})
    got = derive(AlgElem.word((2, 1)))
    assert got == AlgElem.word((1, 1)).scale(-2) - AlgElem.word((2, 0))


@given(elems, elems)
@settings(max_examples=25, deadline=None)
def test_derive_leibniz_compatible_with_nf(x, y):
    lhs = normal_form(derive(x * y))
    rhs = normal_form(derive(x) * y + x * derive(y))
    assert lhs == rhs


# --- confluence and defining relations ---------------------------------------


def test_overlap_examples():
    assert check_overlap(2, 2, 0)
    assert check_overlap(5, 1, 0)
    with pytest.raises(ValueError):
        check_overlap(1, 1, 0)


def test_commutator_instance():
    # v(3)v(2) - v(2)v(3) reduces to (3-2) v(4)
    diff = normal_form(AlgElem.word((3, 2)) - AlgElem.word((2, 3)))
    assert diff == AlgElem.word((4,))


def test_locality_instance():
    elem = (
        AlgElem.word((3, 0))
        - AlgElem.word((2, 1)).scale(3)
        + AlgElem.word((1, 2)).scale(3)
        - AlgElem.word((0, 3))
    )
    assert not normal_form(elem)


def test_relations_bound_8():
    report = verify_defining_relations(8)
    assert report.ok
    assert report.overlaps_checked >= 100


def test_word_text_forms():
    assert word_to_text((2, 0)) == "v2.v0"
    assert word_from_text("v2.v0") == (2, 0)
    assert word_from_text("[2|0]") == (2, 0)
