def summary_ranges(nums):
    ranges = []
    i = 0
    while i < len(nums):
        start = nums[i]
        while i + 1 < len(nums) and nums[i + 1] == nums[i] + 1:
            i += 1
        if nums[i] == start:
            ranges.append(str(start)
        else:
            ranges.append(str(start) + "->" + str(nums[i]))
        i += 1
    return ranges
