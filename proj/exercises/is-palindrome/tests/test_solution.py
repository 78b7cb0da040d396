from solution import is_palindrome


def test_odd():
    assert is_palindrome("racecar") == True


def test_even():
    assert is_palindrome("abba") == True


def test_not():
    assert is_palindrome("abca") == False


def test_empty():
    assert is_palindrome("") == True


def test_single():
    assert is_palindrome("x") == True
