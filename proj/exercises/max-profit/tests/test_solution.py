from solution import max_profit


def test_example():
    assert max_profit([7, 1, 5, 3, 6, 4]) == 5


def test_falling():
    assert max_profit([7, 6, 4, 3, 1]) == 0


def test_empty():
    assert max_profit([]) == 0


def test_single_day():
    assert max_profit([5]) == 0


def test_rising():
    assert max_profit([1, 2, 3, 4]) == 3
