import pytest

from elimdist.errors import GraphFormatError, PreconditionError, SizeCapExceeded
from elimdist.graph import to_mask
from elimdist.separation import (
    SeparatingFamily, build_family, code_bound, code_length, format_family, load_family, parse_family,
    verify_family, write_family,
)

SMALL = [(n, a, b) for n in range(1, 9) for a in range(3) for b in range(3) if a <= n and b <= n]


class TestGreedy:
    @pytest.mark.parametrize("n, a, b", SMALL)
    def test_small_families_separate(self, n, a, b):
        fam = build_family(n, a, b, method="greedy")
        assert (fam.a, fam.b) == (a, b)
        assert verify_family(fam)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", range(9, 13))
    @pytest.mark.parametrize("a, b", [(1, 1), (1, 2), (2, 1), (2, 2)])
    def test_larger_families_separate(self, n, a, b):
        assert verify_family(build_family(n, a, b))

    @pytest.mark.slow
    @pytest.mark.parametrize("n", range(6, 10))
    @pytest.mark.parametrize("a, b", [(3, 1), (1, 3), (3, 2), (2, 3), (3, 3)])
    def test_three_a_side(self, n, a, b):
        assert verify_family(build_family(n, a, b, method="greedy"))

    def test_budget(self):
        with pytest.raises(SizeCapExceeded):
            build_family(30, 1, 1, method="greedy")


class TestCode:
    @pytest.mark.parametrize("n, a, b", [(5, 1, 1), (8, 1, 2), (10, 2, 2), (16, 1, 1), (16, 2, 2), (12, 1, 3)])
    def test_code_families_separate(self, n, a, b):
        fam = build_family(n, a, b, method="code")
        assert verify_family(fam)
        assert len(fam) <= code_bound(n, a, b)

    @pytest.mark.parametrize("n, a, b", [(6, 2, 1), (9, 3, 1), (12, 3, 2)])
    def test_a_larger_than_b_uses_complements(self, n, a, b):
        fam = build_family(n, a, b, method="code")
        assert (fam.a, fam.b) == (a, b)
        assert verify_family(fam)

    def test_deterministic_for_a_seed(self):
        assert build_family(20, 2, 2, seed=5) == build_family(20, 2, 2, seed=5)

    def test_size_grows_with_log_n(self):
        sizes = [len(build_family(n, 2, 2, method="code")) for n in (64, 128, 256, 512)]
        for n, size in zip((64, 128, 256, 512), sizes):
            assert size <= code_bound(n, 2, 2)
        assert sizes == sorted(set(sizes))
        assert sizes[-1] < 1.5 * sizes[0]

    def test_code_length(self):
        assert code_length(7, 1, 1) == 18
        assert code_length(8, 2, 2) == 24 * 4

    def test_trivial_sides(self):
        assert build_family(5, 0, 3).sets == (0,)
        assert build_family(5, 3, 0).sets == (0b11111,)
        assert verify_family(build_family(5, 0, 3))
        assert verify_family(build_family(5, 3, 0))


class TestVerify:
    def test_missing_member_is_caught(self):
        assert not verify_family(SeparatingFamily(4, 1, 1, (0b0011,)))
        assert not verify_family(SeparatingFamily(4, 1, 1, ()))

    def test_verify_cap(self):
        with pytest.raises(SizeCapExceeded):
            verify_family(SeparatingFamily(17, 1, 1, (0,)))
        with pytest.raises(SizeCapExceeded):
            verify_family(SeparatingFamily(8, 4, 3, (0,)))

    def test_build_errors(self):
        with pytest.raises(PreconditionError):
            build_family(3, 4, 1)
        with pytest.raises(PreconditionError):
            build_family(3, 1, 1, method="random")
        with pytest.raises(PreconditionError):
            SeparatingFamily(2, 1, 1, (0b100,))


class TestMembers:
    def test_lift(self):
        fam = SeparatingFamily(3, 1, 1, (0b101, 0b010))
        assert fam.lift([4, 7, 9]) == [to_mask([4, 9]), to_mask([7])]

    def test_complement(self):
        fam = SeparatingFamily(3, 1, 2, (0b001, 0b110)).complement()
        assert (fam.a, fam.b) == (2, 1)
        assert fam.sets == (0b110, 0b001)


class TestFormat:
    def test_round_trip(self, tmp_path):
        fam = build_family(6, 2, 1)
        path = tmp_path / "fam.txt"
        write_family(fam, path)
        assert load_family(path) == fam

    def test_empty_member(self):
        fam = SeparatingFamily(3, 0, 1, (0,))
        assert format_family(fam) == "3 0 1 1\n-\n"
        assert parse_family("3 0 1 1\n-\n") == fam

    @pytest.mark.parametrize("text", [
        "",
        "3 1 1\n",
        "3 1 1 2\n0\n",
        "3 1 1 1\n3\n",
        "3 1 1 1\nx\n",
    ])
    def test_errors(self, text):
        with pytest.raises(GraphFormatError):
            parse_family(text)
