"""Generate a small synthetic data set in the a9a layout (LIBSVM format).

Fourteen one-hot groups spanning feature indices 1..123, binary labels
drawn from a fixed logistic model. Output is deterministic.
"""
import math
import random
import sys

GROUPS = [(1, 5), (6, 13), (14, 18), (19, 34), (35, 39), (40, 46), (47, 60),
          (61, 66), (67, 71), (72, 73), (74, 75), (76, 77), (78, 82), (83, 123)]


def main(rows=500, seed=20200601):
    rng = random.Random(seed)
    weights = [rng.gauss(0.0, 1.0) for _ in range(124)]
    skew = [[rng.random() ** 2 for _ in range(hi - lo + 1)] for lo, hi in GROUPS]
    out = []
    for _ in range(rows):
        feats = []
        for (lo, hi), w in zip(GROUPS, skew):
            idx = rng.choices(range(lo, hi + 1), weights=w)[0]
            feats.append(idx)
        z = sum(weights[i] for i in feats) - 2.5
        label = "+1" if rng.random() < 1.0 / (1.0 + math.exp(-z)) else "-1"
        out.append(label + " " + " ".join(f"{i}:1" for i in sorted(feats)) + " ")
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
