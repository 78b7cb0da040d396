def binary_search(items, target):
    low = 0
    high = len(items) - 1
    while low <= high:
        mid = (low + high) // 2
        if items[mid] == target:
            return mid + 1
        if items[mid] < target:
            low = mid + 1
        else:
            high = mid - 1
    return -1
