"""Classify join-irreducibles into J1/J2/J3 and carry out one extension step.

Run: python3 demos/strata_and_extension.py
"""
from heyting import parse
from heyting.structure import (Bqsl, build_j2_formula, classify, enumerate_k,
                               fraisse_extend_details, smallest_triplet)
from heyting.universal import complete_fragment

for text in ("x1 & ~x2", "x1", "~x1", "T", "x1 -> x2"):
    label = classify(parse(text, 2), 2)
    print(f"{text:>10}: {label.kind}")

frag = complete_fragment(2, 2)
t = smallest_triplet(frag)
phi = build_j2_formula(frag, t)
ken = enumerate_k(phi, frag=frag, level_budget=8)
print(f"\nJ2 witness for triplet {t.ids}: {classify(phi, 2).kind}, forcers per level {ken.counts}")

Q2 = Bqsl.from_relations(["bot", "l", "q", "u"], [("bot", "l"), ("l", "q"), ("q", "u")])
images = [("bot", parse("F", 2)), ("l", parse("x1 -> x2", 2)), ("u", parse("T", 2))]
res = fraisse_extend_details(images, Q2, "q", 2)
print(f"\nextension case {res.case!r}; every check holds: {all(res.checks.values())}")
for name, ok in res.checks.items():
    print(f"  {name}: {ok}")
