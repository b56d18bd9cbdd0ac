"""Survey Young symmetrizers: the scalar k with e*e = k*e for every standard tableau up to size N."""

import argparse
import time

from engelcheck.symgroup import essential_scalar, partitions, standard_tableaux, young_symmetrizer


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-N", type=int, default=4)
    args = ap.parse_args()
    for n in range(1, args.N + 1):
        t = time.perf_counter()
        for shape in partitions(n):
            tabs = standard_tableaux(shape)
            e = young_symmetrizer(tabs[0])
            k = essential_scalar(tabs[0])
            assert e * e == e.scale(k)
            print(f"N={n} shape={shape}: k={k} standard tableaux={len(tabs)}")
        print(f"  ({time.perf_counter() - t:.2f} s)")


if __name__ == "__main__":
    main()
