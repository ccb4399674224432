import numpy as np
from hypothesis import given, settings, strategies as st

from finealign.oracle import brute_force_mems, diagonal_run_mems
from finealign.suffix_index import (
    SYMBOLS, Match, build, descend_with_mismatches, enumerate_mmss, joined_text,
)

from .conftest import random_codes

dna = st.text("ACGTN", max_size=40)
# banana/ananas over b->A a->C n->G s->T
BANANA, ANANAS = "ACGCGC", "CGCGCT"


def check_tree(tree):
    text = "".join(SYMBOLS[c] for c in tree.text)
    assert sorted(tree.root_to_leaf_paths()) == sorted(text[i:] for i in range(len(text)))
    for v in tree.internal_nodes():
        assert len(tree.children(v)) >= 2
        link = tree.suffix_link(v)
        assert link >= 0
        assert tree.path_label(link) == tree.path_label(v)[1:]


def test_tree_on_small_pair(backend):
    check_tree(build(BANANA, ANANAS))


@settings(max_examples=60, deadline=None)
@given(dna, dna)
def test_tree_valid_property(a, b):
    check_tree(build(a, b))


def test_banana_mems(backend):
    tree = build(BANANA, ANANAS)
    assert {m.key for m in enumerate_mmss(tree, min_length=2)} == {(1, 0, 5), (1, 2, 3), (3, 0, 3)}
    # length-1 maximal matches also exist at full resolution
    assert {(1, 4, 1), (5, 0, 1)} <= {m.key for m in enumerate_mmss(tree)}


def test_identical_and_disjoint(backend):
    assert Match(0, 0, 8) in enumerate_mmss(build("ACGTACGA", "ACGTACGA"))
    assert enumerate_mmss(build("AAAA", "CCCC")) == []
    assert enumerate_mmss(build("NNNN", "NNNN")) == []


@settings(max_examples=150, deadline=None)
@given(st.text("ACGN", max_size=48), st.text("ACGN", max_size=48), st.integers(1, 4))
def test_mems_equal_oracles(a, b, k):
    got = enumerate_mmss(build(a, b), min_length=k)
    want = [m for m in brute_force_mems(a, b) if m.length >= k]
    assert got == want
    assert [m for m in diagonal_run_mems(a, b) if m.length >= k] == want


def test_mems_equal_oracle_each_backend(backend):
    rng = np.random.default_rng(3)
    for _ in range(40):
        a = random_codes(rng, int(rng.integers(0, 50)), int(rng.integers(1, 5)), 0.05)
        b = random_codes(rng, int(rng.integers(0, 50)), int(rng.integers(1, 5)), 0.05)
        assert enumerate_mmss(build(a, b)) == brute_force_mems(a, b)


def test_unique_mems():
    a, b = "ACGTTTACGT", "ACGTCC"
    tree = build(a, b)
    uniq = enumerate_mmss(tree, unique=True)
    for m in uniq:
        word = a[m.pos1:m.end1]
        assert a.count(word) == 1 and b.count(word) == 1
    assert set(uniq) <= set(enumerate_mmss(tree))


def test_longest_common_length():
    assert build("TTACGTCC", "GACGTAG").longest_common_length() == 4
    assert build("AAA", "CCC").longest_common_length() == 0


def _hamming_oracle(text, q, budget):
    out = []
    for p in range(len(text) - len(q) + 1):
        window = text[p:p + len(q)]
        if (window >= 6).any():
            continue
        mm = int(np.count_nonzero((window != q) | (window >= 4)))
        if mm <= budget:
            out.append((p, mm))
    return out


def test_descend_matches_scan(backend):
    rng = np.random.default_rng(5)
    for _ in range(60):
        a = random_codes(rng, int(rng.integers(0, 30)), 4, 0.05)
        b = random_codes(rng, int(rng.integers(0, 30)), 4, 0.05)
        tree = build(a, b)
        q = random_codes(rng, int(rng.integers(1, 7)))
        budget = int(rng.integers(0, 3))
        assert descend_with_mismatches(tree, q, budget) == _hamming_oracle(joined_text(a, b), q, budget)


def test_match_order_helpers():
    x, y = Match(0, 0, 3), Match(3, 4, 2)
    assert x.precedes(y) and x.compatible(y) and not y.precedes(x)
    assert not Match(0, 5, 3).compatible(Match(2, 0, 3))
    assert y.diagonal == 1 and y.end1 == 5 and y.end2 == 6
