#!/usr/bin/env python3
"""Regenerates data/family.kb, a synthetic three-generation family ABox.

Deterministic: same script, same file. Roughly 200 individuals with
Male/Female (subclasses of Person), hasChild from both parents, symmetric
hasSibling between children of the same couple, and symmetric married
between spouses.
"""

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "family.kb"


def main() -> None:
    rng = random.Random(20240707)
    lines = [
        "# synthetic family knowledge base (generated by scripts/make_family_kb.py)",
        "subclass Male Person",
        "subclass Female Person",
    ]
    next_id = 0

    def person(sex: str) -> str:
        nonlocal next_id
        name = f"p{next_id}"
        next_id += 1
        lines.append(f"type {name} {sex}")
        return name

    def couple() -> tuple[str, str]:
        husband = person("Male")
        wife = person("Female")
        lines.append(f"role {husband} married {wife}")
        lines.append(f"role {wife} married {husband}")
        return husband, wife

    def children_of(father: str, mother: str, count: int) -> list[str]:
        kids = [person("Male" if rng.random() < 0.5 else "Female") for _ in range(count)]
        for kid in kids:
            lines.append(f"role {father} hasChild {kid}")
            lines.append(f"role {mother} hasChild {kid}")
        for a in kids:
            for b in kids:
                if a != b:
                    lines.append(f"role {a} hasSibling {b}")
        return kids

    # generation 0: founder couples
    gen1: list[str] = []
    for _ in range(28):
        father, mother = couple()
        gen1 += children_of(father, mother, rng.randint(2, 4))

    # generation 1: some children marry across families and have children
    rng.shuffle(gen1)
    gen2: list[str] = []
    for i in range(0, len(gen1) - 1, 2):
        a, b = gen1[i], gen1[i + 1]
        if rng.random() < 0.65:
            lines.append(f"role {a} married {b}")
            lines.append(f"role {b} married {a}")
            gen2 += children_of(a, b, rng.randint(1, 3))

    # generation 2: a few young couples, mostly childless
    rng.shuffle(gen2)
    for i in range(0, len(gen2) - 1, 2):
        a, b = gen2[i], gen2[i + 1]
        if rng.random() < 0.3:
            lines.append(f"role {a} married {b}")
            lines.append(f"role {b} married {a}")
            if rng.random() < 0.5:
                children_of(a, b, 1)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n")
    print(f"wrote {OUT} with {next_id} individuals and {len(lines)} lines")


if __name__ == "__main__":
    main()
