from solution import summary_ranges


def test_example():
    assert summary_ranges([0, 1, 2, 4, 5, 7]) == ["0->2", "4->5", "7"]


def test_singletons():
    assert summary_ranges([1, 3, 5]) == ["1", "3", "5"]


def test_one_range():
    assert summary_ranges([-2, -1, 0]) == ["-2->0"]


def test_empty():
    assert summary_ranges([]) == []


def test_single():
    assert summary_ranges([9]) == ["9"]
