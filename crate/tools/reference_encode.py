#!/usr/bin/env python3
"""Independent reference implementation of the spfq encoding pipeline.

Reproduces the share files of an `spfq encode` run bit-for-bit from the
source matrix and the manifest alone, following the pinned recipe in the
guide chapter "File Formats and Reproducibility": xoshiro256** seeded via
SplitMix64, one uniform double per entry in row-major order, and the fixed
inverse-CDF category orders. Exits nonzero on any mismatch.

Usage: reference_encode.py SOURCE.spfq SHARE_DIR
"""

import sys

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.x = seed & MASK

    def next(self):
        self.x = (self.x + 0x9E3779B97F4A7C15) & MASK
        z = self.x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return (z ^ (z >> 31)) & MASK


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK


class Xoshiro256StarStar:
    def __init__(self, seed):
        g = SplitMix64(seed)
        self.s = [g.next() for _ in range(4)]

    def next(self):
        s = self.s
        out = (rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return out

    def next_f64(self):
        return (self.next() >> 11) * (2.0 ** -53)


def read_spfq(path):
    with open(path) as f:
        lines = f.read().splitlines()
    if lines[0] != "SPFQ 1":
        raise ValueError(f"{path}: bad magic {lines[0]!r}")
    q, rows, cols, nnz = map(int, lines[1].split())
    entries = {}
    for line in lines[2:2 + nnz]:
        r, c, v = map(int, line.split())
        entries[(r, c)] = v
    return q, rows, cols, entries


def read_manifest(path):
    kv = {}
    with open(path) as f:
        lines = f.read().splitlines()
    if lines[0] != "SPFQ-SHARES 1":
        raise ValueError(f"{path}: bad magic {lines[0]!r}")
    for line in lines[1:]:
        if line.strip():
            key, value = line.split(" ", 1)
            kv[key] = value
    return kv


def sample_padding(q, source, rows, cols, alphas, p1, p_star, seed):
    rng = Xoshiro256StarStar(seed)
    p1_inv = (1.0 - p1) / (q - 1)
    inv = {al: pow(al, q - 2, q) for al in alphas}
    padding = {}
    for r in range(rows):
        for c in range(cols):
            a = source.get((r, c), 0)
            u = rng.next_f64()
            if a == 0:
                if u < p1 or p1_inv <= 0.0:
                    v = 0
                else:
                    v = 1 + min(int((u - p1) / p1_inv), q - 2)
            else:
                specials = [(-a * inv[al]) % q for al in alphas]
                mass = len(specials) * p_star
                rest = (1.0 - mass) / (q - len(specials))
                if u < mass or rest <= 0.0:
                    v = specials[min(int(u / p_star), len(specials) - 1)]
                else:
                    v = min(int((u - mass) / rest), q - len(specials) - 1)
                    for sp in sorted(specials):
                        if v >= sp:
                            v += 1
            if v:
                padding[(r, c)] = v
    return padding


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    source_path, share_dir = sys.argv[1], sys.argv[2]
    q, rows, cols, source = read_spfq(source_path)
    manifest = read_manifest(f"{share_dir}/manifest.txt")
    if int(manifest["q"]) != q:
        sys.exit(f"modulus mismatch: source q={q}, manifest q={manifest['q']}")
    n = int(manifest["n"])
    alphas = list(map(int, manifest["alphas"].split()))
    seed = int(manifest["seed"])
    p1 = float(manifest["p1"])
    p_star = float(manifest["p_star"])

    padding = sample_padding(q, source, rows, cols, alphas, p1, p_star, seed)
    failures = 0
    for i, alpha in enumerate(alphas[:n]):
        _, _, _, share = read_spfq(f"{share_dir}/share_{i + 1}.spfq")
        rebuilt = {}
        for r in range(rows):
            for c in range(cols):
                v = (source.get((r, c), 0) + alpha * padding.get((r, c), 0)) % q
                if v:
                    rebuilt[(r, c)] = v
        if rebuilt == share:
            print(f"share_{i + 1}.spfq: reproduced bit-for-bit")
        else:
            print(f"share_{i + 1}.spfq: MISMATCH")
            failures += 1
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
