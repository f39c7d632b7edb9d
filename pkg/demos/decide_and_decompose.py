"""Decide entailments, read countermodels, split formulas into join-irreducibles.

Run: python3 demos/decide_and_decompose.py
"""
from heyting import decompose, entails, is_join_irreducible, parse
from heyting.semantics import force

peirce = parse("((x1 -> x2) -> x1) -> x1", 2)
res = entails(parse("T"), peirce, 2)
print(f"Peirce's law valid? {res.valid}")
model = res.countermodel
print("countermodel:", model.to_json()["nodes"])
print("root forces it?", force(model, peirce).forces(0))

for text in ("x1 | x2", "x1 | ~x1", "(x1 -> x2) | (x2 -> x1)", "x1 & ~x1"):
    f = parse(text, 2)
    parts = decompose(f, 2)
    print(f"\n{text}: {len(parts)} join-irreducible component(s)")
    for c in parts:
        ji = is_join_irreducible(c)
        print(f"  {c}   mintype size {len(ji.mintype)}")
