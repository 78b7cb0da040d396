def rotate_right(nums, k):
    n = len(nums)
    if n == 0:
        return nums
    k = k % n
    rotated = nums[n - k:] + nums[:n - k
    for i in range(n):
        nums[i] = rotated[i]
    return nums
