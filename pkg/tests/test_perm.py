import random

import pytest
from hypothesis import given, strategies as st

from pattern_forge import (
    InvalidPermutation, Occurrence, Permutation, Word, count_321, direct_sum,
    first_middle, occurrences_321, participating_indices, pattern_type, reduce,
)

from oracles import (
    all_perms, count_321_bruteforce, first_middle_bruteforce,
    participating_bruteforce, reduce_bruteforce, triples_321, type_bruteforce,
)

P = Permutation.parse


@st.composite
def permutations(draw, max_size=12):
    n = draw(st.integers(min_value=0, max_value=max_size))
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


@st.composite
def words(draw, max_size=10):
    universe = draw(st.integers(min_value=0, max_value=30))
    size = draw(st.integers(min_value=0, max_value=min(max_size, universe)))
    entries = draw(st.lists(st.integers(1, max(universe, 1)), min_size=size,
                            max_size=size, unique=True)) if universe else []
    return Word(tuple(entries), universe)


class TestParsing:
    @pytest.mark.parametrize("text, expected", [
        ("1,3,8,5,2,7,9,4,6", (1, 3, 8, 5, 2, 7, 9, 4, 6)),
        ("138527946", (1, 3, 8, 5, 2, 7, 9, 4, 6)),
        ("3 1 2", (3, 1, 2)),
        (" 2, 1 ", (2, 1)),
        ("", ()),
        ("10,9,8,7,6,5,4,3,2,1", tuple(range(10, 0, -1))),
    ])
    def test_parse(self, text, expected):
        assert P(text).entries == expected

    @pytest.mark.parametrize("text", ["1,1", "0,1", "1,3", "a,b", "2"])
    def test_rejects_non_permutations(self, text):
        with pytest.raises(InvalidPermutation):
            P(text)

    def test_error_names_one_based_position(self):
        with pytest.raises(InvalidPermutation, match="position 3"):
            Permutation((1, 2, 2))

    def test_format(self):
        p = P("138527946")
        assert str(p) == "1,3,8,5,2,7,9,4,6"
        assert p.format(compact=True) == "138527946"
        big = Permutation(tuple(range(1, 11)))
        assert big.format(compact=True) == str(big)

    def test_word_validation(self):
        with pytest.raises(InvalidPermutation):
            Word((3, 3), 5)
        with pytest.raises(InvalidPermutation):
            Word((7,), 5)


class TestReduce:
    def test_paper_example(self):
        assert reduce(Word((8, 4, 5, 2), 8)) == P("4231")

    def test_already_reduced(self):
        assert reduce(Word((1, 2, 3), 3)) == P("123")

    def test_subset_word(self):
        assert reduce(Word((9, 2, 7), 9)) == P("312")

    def test_empty(self):
        assert reduce(Word((), 0)) == Permutation(())

    @given(words())
    def test_matches_oracle_and_is_idempotent(self, w):
        once = reduce(w)
        assert once.entries == reduce_bruteforce(w.entries)
        assert reduce(once) == once


class TestDirectSum:
    def test_examples(self):
        assert direct_sum(P("12"), P("321")) == P("12543")
        assert direct_sum(Permutation(()), P("321")) == P("321")
        assert direct_sum(P("321"), P("321")) == P("321654")

    def test_double_321_has_two_occurrences(self):
        assert count_321_bruteforce(direct_sum(P("321"), P("321")).entries) == 2

    @pytest.mark.parametrize("n", range(0, 8))
    def test_adds_exactly_one_occurrence(self, n):
        for entries in all_perms(n):
            p = Permutation(entries)
            assert count_321(direct_sum(p, P("321"))) == count_321(p) + 1


class TestCount:
    @pytest.mark.parametrize("text, expected", [
        ("125643", 2), ("123456", 0), ("138527946", 4), ("321", 1), ("", 0),
    ])
    def test_examples(self, text, expected):
        assert count_321(P(text)) == expected

    @pytest.mark.parametrize("n", range(0, 9))
    def test_exhaustive_against_bruteforce(self, n):
        for entries in all_perms(n):
            assert count_321(entries) == count_321_bruteforce(entries)

    def test_random_against_bruteforce(self):
        rng = random.Random(321)
        for _ in range(500):
            n = rng.randint(0, 30)
            p = list(range(1, n + 1))
            rng.shuffle(p)
            assert count_321(p) == count_321_bruteforce(p)


class TestOccurrences:
    def test_examples(self):
        assert occurrences_321(P("321")) == [Occurrence(0, 1, 2)]
        assert occurrences_321(P("1234")) == []

    def test_paper_example_values(self):
        p = P("125643")
        found = occurrences_321(p)
        assert [o.values(p) for o in found] == [(5, 4, 3), (6, 4, 3)]

    @given(permutations(max_size=10))
    def test_lexicographic_and_complete(self, p):
        found = occurrences_321(p)
        assert found == sorted(found)
        assert [tuple(o) for o in found] == triples_321(p.entries)
        assert len(found) == count_321(p)


class TestParticipation:
    def test_paper_example(self):
        p = P("125643")
        assert [p[i] for i in participating_indices(p)] == [5, 6, 4, 3]

    def test_worked_example(self):
        p = P("138527946")
        idx = participating_indices(p)
        assert [i + 1 for i in idx] == [3, 4, 5, 6, 8, 9]
        assert reduce([p[i] for i in idx]) == P("631524")

    def test_avoider(self):
        assert participating_indices(P("2413")) == ()

    @pytest.mark.parametrize("n", range(0, 9))
    def test_exhaustive_against_union_of_triples(self, n):
        for entries in all_perms(n):
            assert list(participating_indices(entries)) == participating_bruteforce(entries)


class TestType:
    @pytest.mark.parametrize("text, expected", [
        ("125643", "3421"), ("138527946", "631524"), ("12345", ""),
    ])
    def test_examples(self, text, expected):
        assert pattern_type(P(text)) == P(expected)

    @pytest.mark.parametrize("n", range(0, 9))
    def test_exhaustive_properties(self, n):
        for entries in all_perms(n):
            q = pattern_type(entries)
            r = count_321(entries)
            assert q.entries == type_bruteforce(entries)
            assert pattern_type(q) == q
            assert count_321(q) == r
            if r:
                assert len(q) <= 3 * r


class TestFirstMiddle:
    def test_examples(self):
        assert first_middle(P("138527946")) == (3, 5)
        assert first_middle(P("321")) == (1, 2)
        assert first_middle(P("123")) is None
        assert first_middle(Permutation(())) is None

    @given(permutations(max_size=10))
    def test_matches_oracle(self, p):
        assert first_middle(p) == first_middle_bruteforce(p.entries)
        assert (first_middle(p) is not None) == (count_321(p) > 0)
