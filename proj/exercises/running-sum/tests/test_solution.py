from solution import running_sum


def test_example():
    assert running_sum([1, 2, 3, 4]) == [1, 3, 6, 10]


def test_empty():
    assert running_sum([]) == []


def test_zeroes():
    assert running_sum([0, 0]) == [0, 0]


def test_negative():
    assert running_sum([3, -1, -2]) == [3, 2, 0]
