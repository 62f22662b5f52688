#!/usr/bin/env python3
"""Writes a deterministic stand-in attitude controller.

Architecture: 6 inputs, three hidden layers of 64 sigmoid neurons, and 3
identity outputs. Weights are small so the closed loop stays close to the
open-loop dynamics over a few control steps.
"""
import argparse

import numpy as np


def layer(rng, rows, cols, scale):
    w = rng.normal(0.0, scale / np.sqrt(cols), size=(rows, cols))
    b = rng.normal(0.0, 0.1, size=rows)
    return w, b


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    ap.add_argument("--seed", type=int, default=2021)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    sizes = [6, 64, 64, 64, 3]
    acts = ["sigmoid", "sigmoid", "sigmoid", "identity"]
    layers = [layer(rng, sizes[i + 1], sizes[i], 1.0 if i < 3 else 0.5) for i in range(4)]

    with open(args.out, "w") as f:
        f.write(f"# stand-in attitude controller, seed {args.seed}\n")
        f.write(f"{sizes[0]}\n{sizes[-1]}\n{len(sizes) - 2}\n")
        for n in sizes[1:-1]:
            f.write(f"{n}\n")
        for a in acts:
            f.write(f"{a}\n")
        for w, b in layers:
            for j in range(w.shape[0]):
                for v in w[j]:
                    f.write(f"{float(np.float32(v))!r}\n")
                f.write(f"{float(np.float32(b[j]))!r}\n")


if __name__ == "__main__":
    main()
