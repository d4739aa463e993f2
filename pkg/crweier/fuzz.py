# crweier/fuzz.py
"""Random strongly pseudoconvex charts and test functions, reproducible from a seed."""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import List

import numpy as np

from crweier import expr as ex
from crweier.frame import ChartSpec

FUZZ_DOMAIN = ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))


def _monomials(degree: int) -> List[str]:
    out = ["1"]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(("u1", "u2", "u3"), d):
            out.append("*".join(combo))
    return out


def random_polynomial(rng: np.random.Generator, degree: int = 2, scale: float = 1.0) -> str:
    """Source text of a polynomial with coefficients uniform in [−scale, scale]."""
    terms = []
    for mono in _monomials(degree):
        coef = format(float(rng.uniform(-scale, scale)), ".17g")
        terms.append(f"({coef})" if mono == "1" else f"({coef})*{mono}")
    return " + ".join(terms)


def random_function(seed: int, degree: int = 2) -> str:
    """A smooth complex function mixing a polynomial with elementary functions."""
    rng = np.random.default_rng(seed)
    p, q, r = (random_polynomial(rng, degree, 0.5) for _ in range(3))
    return f"{p} + sin({q}) + i*exp({r})"


def fuzz_chart(seed: int, eps: float = 0.05, degree: int = 2) -> ChartSpec:
    """θ = du3 + (2u1 + εp1) du2 + εp2 du1 with Z_raw a nonvanishing multiple of e1 − i e2.

    e_j = ∂_j − θ_j ∂3 lie in ker θ; the multiplier is exp(εr + is).
    """
    rng = np.random.default_rng(seed)
    p1, p2, r, s = (random_polynomial(rng, degree) for _ in range(4))
    alpha1 = f"{eps!r}*({p2})"
    alpha2 = f"2*u1 + {eps!r}*({p1})"
    m = f"exp({eps!r}*({r}) + i*({s}))"
    z_raw = (m, f"-i*{m}", f"-({m})*(({alpha1}) - i*({alpha2}))")
    theta = (alpha1, alpha2, "1")
    return ChartSpec(
        name=f"fuzz-{seed}",
        domain=FUZZ_DOMAIN,
        z_raw=tuple(ex.parse(z) for z in z_raw),
        theta=tuple(ex.parse(t) for t in theta),
    )
