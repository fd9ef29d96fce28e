import math
from fractions import Fraction

import numpy as np
import pytest

from pattern_forge import (
    LimitExceeded, Permutation, SequenceTable, bound_report, build_table,
    catalan, count_321, direct_sum, enumerate_avoiders, enumerate_fixed,
    group_by_type, k_r_formula, pattern_type,
)
from pattern_forge import _kernel
from pattern_forge.enumeration import scan

from oracles import (
    all_perms, count_321_bruteforce, count_with_r, factorial_sum, type_bruteforce,
)

P = Permutation.parse


class TestKernel:
    @pytest.mark.parametrize("n", range(0, 7))
    def test_unrank_follows_lexicographic_order(self, n):
        for rank, entries in enumerate(all_perms(n)):
            assert tuple(_kernel.unrank(n, rank)) == entries

    def test_next_permutation_walks_everything(self):
        p = np.array([1, 2, 3, 4], dtype=np.int64)
        seen = [tuple(p)]
        while _kernel.next_permutation(p):
            seen.append(tuple(p))
        assert seen == all_perms(4)

    @pytest.mark.parametrize("n", range(0, 9))
    def test_scan_matches_bruteforce(self, n):
        expected = {}
        for entries in all_perms(n):
            r = count_321_bruteforce(entries)
            expected[r] = expected.get(r, 0) + 1
        assert scan(n).counts == dict(sorted(expected.items()))

    @pytest.mark.parametrize("n", range(3, 9))
    def test_type_tallies_match_python(self, n):
        expected = {}
        for entries in all_perms(n):
            r = count_321(entries)
            if r:
                key = (r, type_bruteforce(entries) if n < 7 else pattern_type(entries).entries)
                expected[key] = expected.get(key, 0) + 1
        result = scan(n, collect_types=True)
        assert result.type_counts == dict(sorted(expected.items()))
        assert result.type_excess == max(len(q) - 3 * r for r, q in expected)

    def test_chunked_scan_is_identical(self):
        assert scan(8, jobs=1) == scan(8, jobs=3)


class TestEnumerateFixed:
    def test_small(self):
        assert enumerate_fixed(3, 1) == [P("321")]
        assert len(enumerate_fixed(4, 1)) == count_with_r(4, 1) == 6

    def test_contains_paper_example(self):
        assert P("125643") in enumerate_fixed(6, 2)

    @pytest.mark.parametrize("n, r", [(5, 2), (6, 1), (7, 3)])
    def test_lexicographic_and_exact(self, n, r):
        perms = enumerate_fixed(n, r)
        assert perms == sorted(perms)
        assert [p.entries for p in perms] == [
            e for e in all_perms(n) if count_321_bruteforce(e) == r]

    def test_jobs_do_not_change_output(self):
        assert enumerate_fixed(8, 3, jobs=1) == enumerate_fixed(8, 3, jobs=4)

    def test_limit(self):
        with pytest.raises(LimitExceeded):
            enumerate_fixed(12, 1)
        with pytest.raises(LimitExceeded):
            enumerate_fixed(6, 1, limit=5)
        assert len(enumerate_fixed(6, 1, limit=5, force=True)) == 110


class TestAvoiders:
    def test_examples(self):
        assert len(enumerate_avoiders(3)) == 5
        assert enumerate_avoiders(0) == [Permutation(())]
        assert len(enumerate_avoiders(4)) == 14

    @pytest.mark.parametrize("n", range(0, 10))
    def test_catalan(self, n):
        assert len(enumerate_avoiders(n)) == catalan(n)


class TestGroupByType:
    def test_examples(self):
        assert P("125643") in group_by_type(6, 2)[P("3421")]
        groups = group_by_type(3, 1)
        assert groups == {P("321"): [P("321")]}

    def test_n9_r4_contains_worked_example(self):
        assert P("138527946") in group_by_type(9, 4)[P("631524")]

    @pytest.mark.parametrize("n, r", [(6, 2), (7, 1), (7, 4), (8, 2)])
    def test_partition(self, n, r):
        groups = group_by_type(n, r)
        assert sum(len(v) for v in groups.values()) == len(enumerate_fixed(n, r))
        for q in groups:
            assert len(q) <= 3 * r
            assert pattern_type(q) == q
        assert list(groups) == sorted(groups)

    def test_rejects_r0(self):
        with pytest.raises(ValueError):
            group_by_type(4, 0)


class TestKrFormula:
    def test_values(self):
        assert factorial_sum(3) == 9
        assert k_r_formula(1, 1) == factorial_sum(3) * 4 ** 3 == 576
        assert k_r_formula(1, 2) == 4 * k_r_formula(1, 1)
        assert k_r_formula(2, 1) == factorial_sum(6) * 4 ** 6 == 3575808

    def test_big_r_is_exact(self):
        assert k_r_formula(10, 7) == factorial_sum(30) * 4 ** 30 * 49


class TestBoundReport:
    def test_r1_n3(self):
        report = bound_report(1, 3)
        assert report.ratios[3] == Fraction(1, 5)
        assert report.lower_ok[3]

    def test_r2_lower_side(self):
        report = bound_report(2, 10)
        for n in range(6, 11):
            assert report.lower_ok[n]
            assert report.counts[n] >= catalan(n - 6)

    def test_max_ratio(self):
        report = bound_report(1, 8)
        assert report.max_ratio == max(Fraction(count_with_r(n, 1), catalan(n)) for n in range(1, 9))

    def test_uses_table(self):
        table = build_table(7, type_limit=0)
        assert bound_report(2, 7, table=table).counts == bound_report(2, 7).counts


@pytest.fixture(scope="module")
def table():
    return build_table(8, type_limit=7)


class TestSequenceTable:
    def test_row_sums(self, table):
        for n in range(9):
            assert sum(table.row(n).values()) == math.factorial(n)
            assert table.count(n, 0) == catalan(n)

    def test_type_rows_sum_to_rows(self, table):
        for n in range(3, 8):
            for r in table.row(n):
                if r:
                    total = sum(c for (m, s, _), c in table.type_rows.items() if (m, s) == (n, r))
                    assert total == table.count(n, r)

    def test_type_count_lookup(self, table):
        assert table.type_count(6, 2, P("3421")) == len(group_by_type(6, 2)[P("3421")])
        with pytest.raises(LimitExceeded):
            table.type_count(8, 1, P("321"))

    def test_text_format(self, table):
        lines = table.to_text().splitlines()
        assert lines[0] == "version=1 limit=8 type_limit=7"
        assert "n=3 r=1 count=1" in lines
        assert "n=3 r=1 q=3,2,1 count=1" in lines

    def test_round_trip_and_coherence(self, table, tmp_path):
        path = table.save(tmp_path)
        assert path.read_text(encoding="utf-8") == table.to_text()
        loaded = SequenceTable.load(tmp_path)
        assert loaded == table
        for n in range(9):
            assert scan(n).counts == loaded.row(n)


class TestLemmaWitness:
    @pytest.mark.parametrize("n", range(3, 10))
    def test_direct_sum_adds_one(self, n):
        for r in range(0, 4):
            for p in enumerate_fixed(n - 3, r):
                assert count_321(direct_sum(p, P("321"))) == r + 1
