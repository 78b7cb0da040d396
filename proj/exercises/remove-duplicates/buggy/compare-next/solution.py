def remove_duplicates(nums):
    if len(nums) == 0:
        return 0
    write = 1
    for read in range(1, len(nums)):
        if nums[read] != nums[write]:
            nums[write] = nums[read]
            write += 1
    return write
