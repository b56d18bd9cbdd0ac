"""Print free Lie algebra layer sizes from the Lyndon basis next to the necklace count."""

import argparse

from engelcheck.lie import Gen, lyndon_basis


def necklace(k, n):
    def mobius(d):
        sign, p = 1, 2
        while p * p <= d:
            if d % p == 0:
                d //= p
                if d % p == 0:
                    return 0
                sign = -sign
            p += 1
        return -sign if d > 1 else sign

    return sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-k", type=int, nargs="+", default=[2, 3])
    ap.add_argument("-w", "--max-weight", type=int, default=8)
    args = ap.parse_args()
    for k in args.k:
        layers = lyndon_basis([Gen(i) for i in range(1, k + 1)], args.max_weight)
        print(f"k={k}")
        for n in range(1, args.max_weight + 1):
            got = len(layers.get(n, []))
            mark = "" if got == necklace(k, n) else "  MISMATCH"
            print(f"  weight {n:2d}: {got:8d}{mark}")


if __name__ == "__main__":
    main()
