from solution import remove_duplicates


def check(nums, expected):
    k = remove_duplicates(nums)
    assert k == len(expected)
    assert nums[:k] == expected


def test_example():
    check([1, 1, 2, 3, 3], [1, 2, 3])


def test_distinct():
    check([1, 2, 3], [1, 2, 3])


def test_empty():
    check([], [])


def test_single():
    check([7], [7])


def test_all_same():
    check([4, 4, 4], [4])
