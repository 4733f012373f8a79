"""Compare the compiled and pure-Python F_p kernels on trace-function workloads.

    python3 benchmarks/bench_fq.py [--repeat N]
"""
import argparse
import time
from contextlib import contextmanager

from wklr import fq
from wklr import _fq_py
from wklr.hall import check_hq_algebra_map, func_y
from wklr.loading import Loading, enumerate_chambers
from wklr.quiver import a2, kronecker

NAMES = ("apply", "count_flags", "image_in", "in_span", "line_reps", "reduce_vec", "rref", "subspaces")


@contextmanager
def backend(mod):
    saved = {n: getattr(fq, n) for n in NAMES}
    for n in NAMES:
        setattr(fq, n, getattr(mod, n))
    try:
        yield
    finally:
        for n, f in saved.items():
            setattr(fq, n, f)


def trace_functions(q, nu, p):
    return [func_y(q, i, p) for i in enumerate_chambers(q, nu).representatives]


def hall_checks(q, p):
    singles = [Loading.of([(0, v)]) for v in range(q.vertex_count)]
    pairs = enumerate_chambers(q, (1, 1)).representatives
    return [check_hq_algebra_map(q, a, b, p).ok for a in singles for b in pairs]


WORKLOADS = [
    ("func_y kronecker (2,2) p=2", lambda: trace_functions(kronecker(), (2, 2), 2)),
    ("func_y kronecker (2,1) p=3", lambda: trace_functions(kronecker(), (2, 1), 3)),
    ("func_y a2 (2,2) p=3", lambda: trace_functions(a2(), (2, 2), 3)),
    ("hall check kronecker p=3", lambda: hall_checks(kronecker(), 3)),
]


def timed(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        from wklr import _fq as compiled
    except ImportError:
        raise SystemExit("compiled extension not built; run: python3 setup.py build_ext --inplace")
    print(f"{'workload':32s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for name, fn in WORKLOADS:
        with backend(_fq_py):
            tp, rp = timed(fn, args.repeat)
        with backend(compiled):
            tc, rc = timed(fn, args.repeat)
        if repr(rp) != repr(rc):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:32s} {tp:10.3f} {tc:11.3f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
