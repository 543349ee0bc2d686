"""Smoke test for the seqconvex Python extension.

Build the extension first:

    cargo build -p seqconvex-py --release --features extension-module

The script copies target/{release,debug}/libseqconvex.so to a temporary
directory as seqconvex.so and imports it from there. Pass an explicit path
to the shared library as the first argument to override the lookup.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_library():
    if len(sys.argv) > 1:
        return Path(sys.argv[1])
    for profile in ("release", "debug"):
        for name in ("libseqconvex.so", "libseqconvex.dylib"):
            candidate = ROOT / "target" / profile / name
            if candidate.exists():
                return candidate
    sys.exit("extension not built; run: cargo build -p seqconvex-py --release --features extension-module")


def main():
    staging = tempfile.mkdtemp()
    shutil.copy(locate_library(), Path(staging) / "seqconvex.so")
    sys.path.insert(0, staging)
    import seqconvex as sc

    v = sc.is_convex([0.0, 1.0, 0.0])
    assert not v.holds and not v
    c = v.certificate
    assert c.kind == "violation" and c.inequality == "second_difference" and c.indices == [1]
    assert c.margin == -2.0 and c.replay([0.0, 1.0, 0.0]) == -2.0

    assert sc.is_eps_convex([0.0, 1.0, 0.0], 2.0, mode="exists").holds
    assert not sc.is_eps_convex([0.0, 1.0, 0.0, 1.0], 1.99, mode="forall").holds
    assert sc.is_wright_convex([4.0, 1.0, 0.0, 1.0, 4.0]).holds

    zigzag = [0.0, 1.0, 0.0, 1.0, 0.0]
    assert sc.min_eps_convex(zigzag, "exists").eps == 2.0
    m = sc.min_eps_convex(zigzag, "forall")
    assert m.eps == 6.0 and m.tight.kind == "witness"
    assert sc.min_eps_affine(zigzag, "forall").eps == 6.0

    d = sc.affine_approx([3.0, 5.0, 7.0, 9.0])
    assert (d.line.slope, d.line.intercept, d.bound) == (2.0, 3.0, 0.0)

    u = [float(n * n) for n in range(20)]
    assert sc.gcm(u) == u
    opt = sc.convex_approx_optimal([0.0, 1.0, 0.0])
    assert opt.bound == 0.5
    h = sc.convex_approx_hyers([0.0, 1.0, 0.0, 1.0], mode="forall")
    assert h.bound <= h.eps + 1e-9

    sep = sc.affine_approx_by_separation([0.0, 0.4, 0.1, 0.5, 0.2], mode="forall")
    assert sep.bound <= sep.eps + 1e-9

    line = sc.separating_line([0.0, 0.0, 0.0], [2.0, 2.0, 2.0])
    assert math.isclose(line(1.0), 1.0)

    assert sc.deltas([1.0, 3.0, 6.0]) == [2.0, 3.0]
    lo, hi = sc.mediant_bounds([1.0, 3.0], [2.0, 1.0])
    assert lo <= 4.0 / 3.0 <= hi

    f = sc.PiecewiseLinear([0.0, 2.0, 1.0])
    assert f(0.5) == 1.0 and f.upper == 2.0
    holds, checked, _ = f.check_eps_convex(3.0, samples=500, seed=1)
    assert holds and checked > 0

    for bad in (lambda: sc.is_convex([]), lambda: sc.is_convex([1.0, math.nan]),
                lambda: sc.min_eps_convex([1.0], "sometimes"), lambda: f(5.0),
                lambda: sc.convex_approx_hyers([-float(n * n) for n in range(10)], mode="exists")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print(f"seqconvex {sc.__version__}: python smoke test passed")


if __name__ == "__main__":
    main()
