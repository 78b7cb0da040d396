from solution import binary_search


def test_found_right():
    assert binary_search([1, 3, 5, 7, 9], 7) == 3


def test_found_middle():
    assert binary_search([1, 3, 5, 7, 9], 5) == 2


def test_missing():
    assert binary_search([1, 3, 5], 4) == -1


def test_empty():
    assert binary_search([], 1) == -1


def test_found_left():
    assert binary_search([2, 4, 6, 8], 2) == 0
