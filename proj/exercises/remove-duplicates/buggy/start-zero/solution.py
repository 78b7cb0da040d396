def remove_duplicates(nums):
    if len(nums) == 0:
        return 0
    write = 0
    for read in range(1, len(nums)):
        if nums[read] != nums[write - 1]:
            nums[write] = nums[read]
            write += 1
    return write
