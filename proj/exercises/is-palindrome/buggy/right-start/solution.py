def is_palindrome(text):
    left = 0
    right = len(text)
    while left < right:
        if text[left] != text[right]:
            return False
        left += 1
        right -= 1
    return True
