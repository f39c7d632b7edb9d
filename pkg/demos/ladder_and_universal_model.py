"""Walk the one-variable ladder and see it mirrored in the universal model K_1.

Run: python3 demos/ladder_and_universal_model.py
"""
from heyting import complete_fragment, entails, equivalent, rn_ladder
from heyting.dejongh import node_formulas

ladder = rn_ladder(8)
print("ladder members:")
for name, f in ladder[:8]:
    print(f"  {name:>5}  {f}")

frag = complete_fragment(1, 4)
print(f"\n{frag}")
print("each node of K_1 is named by the ladder member equivalent to its de Jongh formula:")
names = {}
for a in range(len(frag)):
    pos = node_formulas(frag, a).pos
    names[a] = next(name for name, g in ladder if equivalent(pos, g, 1))
    print(f"  node {a} (level {frag.level_of(a)}) -> {names[a]}")

lad = dict(ladder)
a, b = 4, 0
print(f"\nnode {a} below node {b}: {frag.leq(a, b)}; "
      f"{names[b]} |- {names[a]}: {entails(lad[names[b]], lad[names[a]], 1).valid}")
