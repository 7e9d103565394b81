#!/usr/bin/env python3
"""Refit the degree-(3,3) bivariate rational initial guess and emit the
frozen coefficient fixture.

Reference total volatilities come from the package's bisection oracle on a
200 x 200 grid over the fitted domain {|x| < 3, 0.0005 < c < 0.9995}.  The
linearized least-squares problem  P(x,c) - v Q(x,c) ~ 0  (denominator
constant normalized to 1) is solved with Loeb reweighting (w = 1/(v |Q|))
followed by Lawson power iterations that push the fit toward minimax in
relative error.

Usage:  python scripts/fit_li_coefficients.py [output.txt]
"""

import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from flashiv.oracle import iv_reference_batch  # noqa: E402
from flashiv.seeds import _POWERS  # noqa: E402

GRID_N = 200
X_LO, X_HI = -2.9925, -0.0075
C_LO, C_HI = 0.0005 + 2.4975e-3, 0.9995 - 2.4975e-3
LOEB_ITERS = 4
LAWSON_ITERS = 24
LAWSON_POWER = 0.35


def build_reference_grid():
    xs = np.linspace(X_LO, X_HI, GRID_N)
    cs = np.linspace(C_LO, C_HI, GRID_N)
    xg, cg = np.meshgrid(xs, cs, indexing="ij")
    xf, cf = xg.ravel(), cg.ravel()
    print(f"inverting {xf.size} grid points against the oracle ...", flush=True)
    vf = iv_reference_batch(xf, cf)
    return xf, cf, vf


def design_matrix(x, c):
    cols = [x**i * c**j for (i, j) in _POWERS]
    return np.stack(cols, axis=1)


def fit(x, c, v):
    phi = design_matrix(x, c)  # shared numerator/denominator monomials
    a_full = np.concatenate([phi, -v[:, None] * phi[:, 1:]], axis=1)
    w = 1.0 / v
    lawson = np.ones_like(v)
    best = None
    for it in range(LOEB_ITERS + LAWSON_ITERS):
        ww = w * lawson
        theta, *_ = np.linalg.lstsq(a_full * ww[:, None], v * ww, rcond=None)
        m = theta[:10]
        n = np.concatenate([[1.0], theta[10:]])
        den = phi @ n
        num = phi @ m
        rel = np.abs(num / den / v - 1.0)
        if best is None or rel.max() < best[0]:
            best = (rel.max(), m.copy(), n.copy())
        if it < LOEB_ITERS:
            w = 1.0 / (v * np.maximum(np.abs(den), 1e-3))
        else:
            lawson *= np.maximum(rel, 1e-6) ** LAWSON_POWER
            lawson /= lawson.mean()
        print(
            f"  iter {it:2d}: max rel {rel.max():.4f}  mean {rel.mean():.5f}"
            f"  p99 {np.quantile(rel, 0.99):.4f}",
            flush=True,
        )
    return best


def validate(m, n, x, c, v):
    phi = design_matrix(x, c)
    den = phi @ n
    num = phi @ m
    rel = np.abs(num / den / v - 1.0)
    print(f"validation: max rel {rel.max():.4f}  mean {rel.mean():.5f}")
    print(f"denominator range: [{den.min():.4f}, {den.max():.4f}]")
    if den.min() <= 0:
        raise SystemExit("FAIL: denominator vanishes on the fitted domain")
    return rel


def main():
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else (
        pathlib.Path(__file__).resolve().parents[1] / "src/flashiv/data/li_coefficients.txt"
    )
    x, c, v = build_reference_grid()
    max_rel, m, n = fit(x, c, v)
    validate(m, n, x, c, v)
    lines = ["# degree-(3,3) rational guess coefficients",
             "# numerator m_ij then denominator n_ij; order (i,j) ="]
    lines.append("# " + ", ".join(str(p) for p in _POWERS))
    lines += [repr(val) for val in m]
    lines += [repr(val) for val in n]
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} (grid max rel err {max_rel:.4f})")


if __name__ == "__main__":
    main()
