"""Certified spectral decisions for integer matrices.

`unit_root_free` decides whether an integer polynomial has a root of
modulus exactly 1 and returns a certificate.  The decision is exact:

  1. every unit-modulus root of a real polynomial p also divides
     rev(p) = x^deg p(1/x), so it lies in g = gcd(p, rev p); a constant g
     settles the question outright;
  2. otherwise g is screened for cyclotomic factors;
  3. otherwise the squarefree part of g is palindromic of even degree with
     no root at +-1, and under y = x + 1/x its unit-circle roots
     correspond exactly to real roots of the half-degree trace polynomial
     in (-2, 2), which a Sturm count settles;
  4. in the root-free case, every root of g is additionally enclosed in a
     certified disk (approximations are only hints; the containment radius
     n*|g/g'| and all comparisons are exact rational arithmetic), giving
     per-root modulus intervals with positive margin from 1.

Compound matrices expose r-fold eigenvalue products to the same test.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import linalg
from .intpoly import (
    IntPolynomial,
    count_real_roots,
    cyclotomic,
    cyclotomic_indices_up_to_degree,
    divides,
    isolate_one_real_root,
    poly_gcd,
    squarefree_part,
    trace_polynomial,
)

DEFAULT_BUDGET_BITS = 256


class IndeterminateError(RuntimeError):
    """Refinement budget exhausted before every enclosure became decisive."""


def _budget_bits(budget_bits):
    if budget_bits is not None:
        return budget_bits
    return int(os.environ.get("ANOSOGRAPH_BUDGET_BITS", DEFAULT_BUDGET_BITS))


def char_poly(a):
    """Characteristic polynomial det(xI - A), by the division-free
    Berkowitz iteration over principal submatrices."""
    n = len(a)
    if n == 0:
        return IntPolynomial([1])
    for row in a:
        if len(row) != n:
            raise ValueError("matrix must be square")
    a = [[int(x) for x in row] for row in a]
    p = [1]  # descending coefficients, charpoly of the empty matrix
    for r in range(1, n + 1):
        arr = a[r - 1][r - 1]
        row = a[r - 1][: r - 1]
        col = [a[i][r - 1] for i in range(r - 1)]
        sub = [a[i][: r - 1] for i in range(r - 1)]
        t = [1, -arr]
        vec = col
        for _ in range(r - 1):
            t.append(-sum(x * y for x, y in zip(row, vec)))
            vec = [sum(sub[i][j] * vec[j] for j in range(r - 1)) for i in range(r - 1)]
        p = [sum(t[i - j] * p[j] for j in range(max(0, i - len(t) + 1), min(i + 1, len(p))))
             for i in range(r + 1)]
    return IntPolynomial(list(reversed(p)))


def _colex_subsets(n, r):
    subs = list(itertools.combinations(range(n), r))
    subs.sort(key=lambda s: tuple(reversed(s)))
    return subs


def compound_matrix(a, r):
    """r-th compound: minors det A[I, J] over r-subsets in colex order.

    Its eigenvalue multiset is exactly the r-fold products of A's
    eigenvalues over index subsets.
    """
    n = len(a)
    if not 1 <= r <= n:
        raise ValueError(f"compound order r={r} outside 1..{n}")
    subs = _colex_subsets(n, r)
    out = []
    for rows in subs:
        line = []
        for cols in subs:
            minor = [[a[i][j] for j in cols] for i in rows]
            line.append(int(linalg.det_bareiss(minor)))
        out.append(line)
    return out


@dataclass
class UnitRootCertificate:
    verdict: str  # "free" | "not-free"
    method: str  # "gcd-trivial" | "cyclotomic-factor" | "isolated-interval"
    polynomial: IntPolynomial
    symmetric_factor: IntPolynomial | None = None
    witness: dict | None = None

    @property
    def free(self):
        return self.verdict == "free"

    def to_json(self):
        out = {
            "verdict": self.verdict,
            "method": self.method,
            "polynomial": self.polynomial.to_json(),
        }
        if self.symmetric_factor is not None:
            out["symmetric_factor"] = self.symmetric_factor.to_json()
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _frac_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _sqrt_bounds(q, bits):
    """Rational l <= sqrt(q) <= u with dyadic endpoints, q >= 0."""
    q = Fraction(q)
    assert q >= 0
    scale = 1 << (2 * bits)
    s = math.isqrt(q.numerator * scale // q.denominator)
    return Fraction(s, 1 << bits), Fraction(s + 2, 1 << bits)


def _dyadic(x, bits):
    """Nearest dyadic rational with denominator 2^bits to an mpmath float."""
    scaled = mpmath.nint(x * (1 << bits))
    return Fraction(int(scaled), 1 << bits)


def _abs2(re, im):
    return re * re + im * im


def _certified_enclosures(g, bits):
    """Per-root disks for a squarefree integer polynomial.

    Roots are approximated at the working precision, then each disk of
    radius deg*|g(w)/g'(w)| around an approximation provably contains a
    root; if the disks are pairwise disjoint they isolate all roots.
    Returns a list of (center, radius_sq_bound) or None if the working
    precision did not separate the roots.
    """
    d = g.degree
    dg = g.derivative()
    with mpmath.workprec(bits + 32):
        try:
            roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(g.coeffs)],
                                     maxsteps=200, extraprec=bits)
        except mpmath.libmp.NoConvergence:
            return None
        centers = [(_dyadic(mpmath.re(z), bits), _dyadic(mpmath.im(z), bits)) for z in roots]
    disks = []
    for (re, im) in centers:
        gr, gi = g.eval_complex_rational(re, im)
        dr, di = dg.eval_complex_rational(re, im)
        denom = _abs2(dr, di)
        if denom == 0:
            return None
        r2 = Fraction(d * d) * _abs2(gr, gi) / denom
        disks.append(((re, im), r2))
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            (ri, ii), r2i = disks[i]
            (rj, ij), r2j = disks[j]
            dist2 = _abs2(ri - rj, ii - ij)
            # (r_i + r_j)^2 <= 2(r_i^2 + r_j^2)
            if dist2 <= 2 * (r2i + r2j):
                return None
    return disks


def unit_root_free(p, budget_bits=None):
    """Decide whether p has a complex root of modulus exactly 1.

    Requires p nonzero with p(0) != 0.  Returns a UnitRootCertificate;
    raises IndeterminateError only if the enclosure refinement budget runs
    out (the verdict itself is decided exactly and is never guessed).
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.constant() == 0:
        raise ValueError("p(0) = 0: zero eigenvalue; caller must handle it separately")
    p = p.primitive()
    if p.degree == 0:
        return UnitRootCertificate("free", "gcd-trivial", p)
    g = poly_gcd(p, p.reversed_poly())
    if g.degree == 0:
        return UnitRootCertificate("free", "gcd-trivial", p)
    for d in cyclotomic_indices_up_to_degree(g.degree):
        phi = cyclotomic(d)
        if phi.degree <= g.degree and divides(phi, g):
            return UnitRootCertificate(
                "not-free", "cyclotomic-factor", p, symmetric_factor=g,
                witness={"cyclotomic_index": d, "factor": phi.to_json()},
            )
    g0 = squarefree_part(g)
    # no root at +-1 (those are cyclotomic), so g0 is palindromic of even degree
    if g0(1) == 0 or g0(-1) == 0 or not g0.is_palindromic() or g0.degree % 2:
        raise AssertionError("symmetric factor failed palindromic normalization")
    h = trace_polynomial(g0)
    on_circle = count_real_roots(h, Fraction(-2), Fraction(2))
    if on_circle > 0:
        lo, hi = isolate_one_real_root(h, Fraction(-2), Fraction(2))
        while lo <= -2 or hi >= 2:
            # sign change brackets need positive margin from +-2
            mid = (lo + hi) / 2
            if h(mid) == 0:
                mid = lo + (hi - lo) * Fraction(3, 7)
            if h(lo) * h(mid) < 0:
                hi = mid
            else:
                lo = mid
        return UnitRootCertificate(
            "not-free", "isolated-interval", p, symmetric_factor=g,
            witness={
                "trace_poly": h.to_json(),
                "trace_interval": [_frac_str(lo), _frac_str(hi)],
                "real_part_interval": [_frac_str(lo / 2), _frac_str(hi / 2)],
                "on_circle_pairs": on_circle,
            },
        )
    # off-circle everywhere; build per-root modulus enclosures
    budget = _budget_bits(budget_bits)
    bits = 64
    while bits <= budget:
        disks = _certified_enclosures(g0, bits)
        if disks is not None:
            enclosures = []
            margins = []
            for (re, im), r2 in disks:
                mod_lo, mod_hi = _sqrt_bounds(_abs2(re, im), bits)
                r_hi = _sqrt_bounds(r2, bits)[1]
                lo, hi = mod_lo - r_hi, mod_hi + r_hi
                if not (hi < 1 or lo > 1):
                    break
                margins.append(lo - 1 if lo > 1 else 1 - hi)
                enclosures.append({
                    "center": [_frac_str(re), _frac_str(im)],
                    "radius_upper": _frac_str(r_hi),
                    "modulus_interval": [_frac_str(lo), _frac_str(hi)],
                    "margin": _frac_str(margins[-1]),
                })
            if len(enclosures) == len(disks):
                return UnitRootCertificate(
                    "free", "isolated-interval", p, symmetric_factor=g,
                    witness={
                        "root_enclosures": enclosures,
                        "min_margin": _frac_str(min(margins)),
                    },
                )
        bits *= 2
    raise IndeterminateError(
        f"could not certify enclosures within {budget} bits "
        f"(ANOSOGRAPH_BUDGET_BITS raises the budget)"
    )


@dataclass
class ProductsCertificate:
    ok: bool
    r_max: int
    per_r: list  # (r, char poly of compound, UnitRootCertificate)

    def to_json(self):
        return {
            "ok": self.ok,
            "r_max": self.r_max,
            "per_r": [
                {"r": r, "char_poly": cp.to_json(), "certificate": cert.to_json()}
                for r, cp, cert in self.per_r
            ],
        }


def products_off_circle(a, r_max, budget_bits=None):
    """True iff every r-fold eigenvalue product of A avoids the unit circle,
    for 1 <= r <= r_max, certified via compound-matrix characteristic
    polynomials.  Zero products (singular compounds) are off-circle and are
    factored out before certification."""
    n = len(a)
    if not 1 <= r_max <= n:
        raise ValueError(f"r_max={r_max} outside 1..{n}")
    per_r = []
    ok = True
    for r in range(1, r_max + 1):
        comp = compound_matrix(a, r)
        cp = char_poly(comp)
        reduced = cp.shift_right(cp.trailing_zero_order())
        cert = unit_root_free(reduced, budget_bits=budget_bits)
        per_r.append((r, cp, cert))
        if not cert.free:
            ok = False
            break
    return ProductsCertificate(ok=ok, r_max=r_max, per_r=per_r)
