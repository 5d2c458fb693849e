import pytest

from thermo_opt.errors import NoPrimitiveLevels, NotAdmissible, NotMixing, NotSquare, ValidationError, ZeroRowOrColumn
from thermo_opt.shift import (
    CountableShift,
    check_word,
    connectivity_data,
    count_words,
    countable_full_shift,
    enumerate_periodic_words,
    enumerate_words,
    full_shift,
    is_admissible,
    iter_word_blocks,
    to_word,
    truncate,
    validate_shift,
    word_array,
)


def test_golden_mean_words(golden):
    assert list(enumerate_words(golden, 3)) == [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 1, 2)]
    assert count_words(golden, 3) == 5
    assert golden.mixing_witness == 2


def test_full_shift_counts():
    s = full_shift(3)
    assert s.mixing_witness == 1
    assert count_words(s, 4) == 81
    assert count_words(s, 4, anchor=2) == 27
    assert count_words(s, 4, anchor=2, periodic=True) == 27


def test_periodic_words(golden):
    # anchored period-3 points in [1]: 111, 112, 121
    assert list(enumerate_periodic_words(golden, 3, 1)) == [(1, 1, 1), (1, 1, 2), (1, 2, 1)]
    assert count_words(golden, 3, 1, periodic=True) == 3
    # traces of T^n are Lucas numbers
    assert [count_words(golden, n, periodic=True) for n in range(1, 7)] == [1, 3, 4, 7, 11, 18]


def test_validation_errors():
    with pytest.raises(NotSquare):
        validate_shift([[1, 1]])
    with pytest.raises(ZeroRowOrColumn):
        validate_shift([[1, 0], [1, 0]])
    with pytest.raises(ValidationError):
        validate_shift([[2, 1], [1, 1]])
    assert ZeroRowOrColumn("x").name == "ZeroRowOrColumn"


def test_non_mixing_shift():
    s = validate_shift([[0, 1], [1, 0]])
    assert not s.is_mixing
    with pytest.raises(NotMixing):
        connectivity_data(s)


def test_admissibility(golden):
    assert is_admissible(golden, (1, 2, 1))
    assert not is_admissible(golden, (2, 2))
    assert not is_admissible(golden, (3,))
    with pytest.raises(NotAdmissible):
        check_word(golden, (1, 2, 2))


def test_connectivity(golden, full2):
    conn = connectivity_data(golden)
    for a in (1, 2):
        for b in (1, 2):
            assert is_admissible(golden, (a,) + conn.connector(a, b) + (b,))
    assert conn.k == 1
    assert conn.connector(2, 2) == (1,)
    assert connectivity_data(full2).W == [(1,)]


def test_blocks_match_dfs(golden):
    s = validate_shift([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    for n in (1, 4, 7):
        rows = [to_word(r) for w, _ in iter_word_blocks(s, n, block_rows=8) for r in w]
        assert rows == list(enumerate_words(s, n))
    rows = [to_word(r) for w, _ in iter_word_blocks(golden, 6, 1, periodic=True, block_rows=4) for r in w]
    assert rows == list(enumerate_periodic_words(golden, 6, 1))


def test_word_array_sorted(full2):
    w = word_array(full2, 5)
    assert w.shape == (32, 5)
    assert to_word(w[0]) == (1,) * 5 and to_word(w[-1]) == (2,) * 5


def test_truncation_skips_bad_levels():
    c = CountableShift(lambda i, j: 1 if (i, j) != (1, 1) else 0, "no11")
    fam = truncate(c, [1, 2, 3])
    assert fam.levels == (2, 3)
    assert fam.skipped == ((1, "ZeroRowOrColumn"),)
    bad = CountableShift(lambda i, j: 1 if i != j else 0)
    with pytest.raises(NoPrimitiveLevels):
        truncate(bad, [2])
    assert len(truncate(countable_full_shift(), [4, 2])) == 2
