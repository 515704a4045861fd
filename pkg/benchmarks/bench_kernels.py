"""Compare the compiled and pure-Python kernels on closure and normalizer scans.

Run with ``python benchmarks/bench_kernels.py``.
"""
import argparse
import importlib
import timeit

from picard import _pykernels, matring

try:
    _ck = importlib.import_module("picard._ckernels")
except ImportError:
    _ck = None


def closure_case():
    # the realized Picard group of case (i) with P = V4, n = 2
    from picard import picassembly
    real = picassembly.assemble("thm-main-i,P=P(1,1),n=2")
    gens = [g for g, _ in real.generators]
    return "closure (order 576, degree %d)" % len(gens[0]), \
        lambda impl: impl.closure(gens, len(gens[0]), 10 ** 6)


def normalizer_case():
    s = matring.lift_odd_subgroup(3, 2, "C7")
    args = (3, 4, s.generators, s.elements, [tuple([0] * 9)], 1)
    return "normalizer scan GL3(Z/4) (262144 candidates)", lambda impl: impl.scan_normalizer(*args)


def compose_case():
    p = tuple(range(64, 0, -1))
    q = tuple((-1) ** i * (i + 1) for i in range(64))
    return "compose_signed x 10^4 (degree 64)", \
        lambda impl: [impl.compose_signed(p, q) for _ in range(10 ** 4)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    impls = [("python", _pykernels)] + ([("cython", _ck)] if _ck is not None else [])
    if _ck is None:
        print("compiled kernels not built; timing the Python fallback only")
    for make in (compose_case, closure_case, normalizer_case):
        name, fn = make()
        times = {}
        for label, impl in impls:
            times[label] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
        line = f"{name:48s} " + "  ".join(f"{k}: {v * 1000:9.1f} ms" for k, v in times.items())
        if len(times) == 2:
            line += f"  speedup: {times['python'] / times['cython']:.1f}x"
        print(line)


if __name__ == "__main__":
    main()
