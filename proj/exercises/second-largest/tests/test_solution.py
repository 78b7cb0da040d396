from solution import second_largest


def test_example():
    assert second_largest([4, 9, 2, 9]) == 4


def test_ascending():
    assert second_largest([1, 2, 3]) == 2


def test_all_same():
    assert second_largest([5, 5]) == None


def test_empty():
    assert second_largest([]) == None


def test_descending():
    assert second_largest([8, 6, 3]) == 6
