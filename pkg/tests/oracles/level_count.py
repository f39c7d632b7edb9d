"""Independent count of the level-2 nodes of the universal model.

A level-2 node has only leaves above it, so it is fixed by a nonempty set
S of leaf valuations and a valuation U inside every member of S, proper
when S is a singleton. Run as a script to print the counts.
"""
from itertools import combinations


def level_two_count(n: int) -> int:
    vals = range(1 << n)
    total = 0
    for r in range(1, (1 << n) + 1):
        for S in combinations(vals, r):
            common = (1 << n) - 1
            for v in S:
                common &= v
            choices = 1 << bin(common).count("1")
            total += choices - 1 if r == 1 else choices
    return total


if __name__ == "__main__":
    for n in (1, 2, 3):
        print(n, 1 << n, level_two_count(n))
