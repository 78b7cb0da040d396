from solution import merge_sorted


def test_interleaved():
    assert merge_sorted([1, 4, 6], [2, 3, 7]) == [1, 2, 3, 4, 6, 7]


def test_first_empty():
    assert merge_sorted([], [1, 2]) == [1, 2]


def test_second_empty():
    assert merge_sorted([3], []) == [3]


def test_both_empty():
    assert merge_sorted([], []) == []


def test_equal_heads():
    assert merge_sorted([1], [1]) == [1, 1]
