"""Synthetic corpus generator for demos, benchmarks, and the test suite.

Five planted topic groups with disjoint vocabularies; every document
carries its group's signature keyword, so the mock gateway's topic table
labels each group consistently and the groups separate cleanly in the map.
"""

from __future__ import annotations

import csv
import json
import random

GROUP_VOCAB = {
    "governance": ["voting", "election", "ballot", "policy", "civic",
                   "deliberation", "consensus", "democracy", "referendum", "citizens"],
    "music": ["music", "musical", "melody", "audio", "harmony",
              "rhythm", "instrument", "composition", "sound", "concert"],
    "robotics": ["robot", "robots", "actuator", "gripper", "kinematics",
                 "manipulation", "locomotion", "drone", "motor", "servo"],
    "neuroscience": ["brain", "neuron", "cortex", "synapse", "cognition",
                     "memory", "imaging", "stimulus", "plasticity", "attention"],
    "sustainability": ["climate", "solar", "carbon", "energy", "renewable",
                       "grid", "emissions", "recycling", "biodiversity", "ocean"],
}

# first vocab entry is the signature keyword present in every document
FILLER = ["study", "tool", "approach", "prototype", "interactive",
          "framework", "workshop", "collaborative", "exploring", "novel"]


def synthetic_records(n: int = 500, seed: int = 7,
                      year_range: tuple[int, int] = (2010, 2024)) -> list[dict]:
    rng = random.Random(seed)
    groups = list(GROUP_VOCAB)
    records = []
    for i in range(n):
        group = groups[i % len(groups)]
        vocab = GROUP_VOCAB[group]
        signature = vocab[0]
        words = [signature] + rng.choices(vocab, k=7) + rng.choices(FILLER, k=2)
        rng.shuffle(words)
        title = f"{group.capitalize()} {rng.choice(vocab)} {i}"
        description = "A " + " ".join(words) + " project."
        year = rng.randint(*year_range)
        month = rng.randint(1, 12)
        day = rng.randint(1, 28)
        records.append({
            "id": f"p{i:04d}",
            "title": title,
            "description": description,
            "group": group,
            "date": f"{year:04d}-{month:02d}-{day:02d}",
        })
    return records


def write_synthetic_corpus(path: str, n: int = 500, seed: int = 7,
                           fmt: str = "json") -> list[dict]:
    records = synthetic_records(n=n, seed=seed)
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(records, fh, ensure_ascii=False, indent=1)
    elif fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["id", "title", "description", "group", "date"])
            writer.writeheader()
            writer.writerows(records)
    else:
        raise ValueError(f"unsupported format {fmt!r}")
    return records
