from solution import rotate_right


def test_example():
    assert rotate_right([1, 2, 3, 4, 5], 2) == [4, 5, 1, 2, 3]


def test_zero():
    assert rotate_right([1, 2, 3], 0) == [1, 2, 3]


def test_wraps():
    assert rotate_right([1, 2], 3) == [2, 1]


def test_empty():
    assert rotate_right([], 4) == []
