"""Binary forms in (s, t): determinants of pencils and gcds.

A binary form of degree d is stored as its coefficient list [c_0..c_d]
with c_i the coefficient of s^(d-i) t^i; equivalently c is the ascending
coefficient list of the dehomogenization q(u) = f(1, u).  The form is
recovered as s^d q(t/s), so nothing is lost: the s-multiplicity of f is
d - deg(q) and the t-multiplicity is the valuation of q at 0.
"""

from __future__ import annotations

from itertools import combinations

from .exactlin import DenseMatrix


def form_is_zero(coeffs) -> bool:
    return all(c == 0 for c in coeffs)


def _poly_degree(coeffs) -> int:
    for i in range(len(coeffs) - 1, -1, -1):
        if coeffs[i] != 0:
            return i
    return -1


def _poly_mod(field, a, b):
    """Remainder of a by b (ascending coefficient lists, b nonzero)."""
    a = list(a)
    db = _poly_degree(b)
    lead_inv = field.inv(b[db])
    for i in range(_poly_degree(a), db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        f = field.mul(c, lead_inv)
        for j in range(db + 1):
            a[i - db + j] = field.sub(a[i - db + j], field.mul(f, b[j]))
    return a[: max(db, _poly_degree(a) + 1)] or [field.zero()]


def _poly_gcd(field, a, b):
    """Monic univariate gcd by Euclid's algorithm."""
    a, b = list(a), list(b)
    while _poly_degree(b) >= 0:
        a, b = b, _poly_mod(field, a, b)
    da = _poly_degree(a)
    if da < 0:
        return [field.zero()]
    inv = field.inv(a[da])
    return [field.mul(inv, c) for c in a[: da + 1]]


def binary_gcd(field, f, g):
    """Gcd of two nonzero binary forms as (s_multiplicity, dehomogenized gcd)."""
    sf = (len(f) - 1) - _poly_degree(f)
    sg = (len(g) - 1) - _poly_degree(g)
    return min(sf, sg), _poly_gcd(field, f, g)


def gcd_is_constant(s_mult: int, q) -> bool:
    return s_mult == 0 and _poly_degree(q) == 0


def det_binary_pencil(field, rows_s, rows_t):
    """Determinant of s*A + t*B as a binary form of degree n.

    A and B are given as the n x n row lists rows_s, rows_t.  The form is
    recovered from n+1 numeric determinants by Lagrange interpolation of
    det(A + u B); the field must contain n+1 distinct elements.
    """
    n = len(rows_s)
    if n == 0:
        return [field.one()]
    samples = []
    u_vals = []
    u = field.zero()
    one = field.one()
    for _ in range(n + 1):
        u_vals.append(u)
        rows = [
            [field.add(a, field.mul(u, b)) for a, b in zip(ra, rb)]
            for ra, rb in zip(rows_s, rows_t)
        ]
        samples.append(_det(field, rows))
        u = field.add(u, one)
        if field.kind == "Fp" and u == field.zero() and len(u_vals) <= n:
            raise ValueError(f"field {field.name} too small to interpolate degree {n}")
    return _lagrange(field, u_vals, samples)


def _det(field, rows):
    """Determinant by fraction-producing Gaussian elimination (small sizes)."""
    n = len(rows)
    rows = [list(r) for r in rows]
    det = field.one()
    for c in range(n):
        piv = None
        for i in range(c, n):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            return field.zero()
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = field.neg(det)
        pval = rows[c][c]
        det = field.mul(det, pval)
        inv = field.inv(pval)
        for i in range(c + 1, n):
            f = rows[i][c]
            if f != 0:
                f = field.mul(f, inv)
                rows[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(rows[i], rows[c])]
    return det


def _lagrange(field, xs, ys):
    """Coefficients (ascending) of the interpolating polynomial."""
    n = len(xs)
    coeffs = [field.zero()] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (u - x_j) / (x_i - x_j)
        basis = [field.one()]
        denom = field.one()
        for j in range(n):
            if j == i:
                continue
            new = [field.zero()] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k + 1] = field.add(new[k + 1], c)
                new[k] = field.sub(new[k], field.mul(xs[j], c))
            basis = new
            denom = field.mul(denom, field.sub(xs[i], xs[j]))
        scale = field.mul(ys[i], field.inv(denom))
        for k, c in enumerate(basis):
            coeffs[k] = field.add(coeffs[k], field.mul(scale, c))
    return coeffs


def pencil_minor_gcd(field, mat_s: DenseMatrix, mat_t: DenseMatrix, size: int):
    """Gcd of the size x size minors of the pencil s*mat_s + t*mat_t.

    Returns one of
      ("constant", None)     no common root over the algebraic closure,
      ("form", coeffs)       all minors share the nonconstant gcd form,
      ("zero", None)         every minor vanishes identically.
    Minors are taken over row subsets (the matrices must have size columns).
    """
    nrows = mat_s.nrows
    if size == 0:
        return ("constant", None)
    acc = None  # (s_mult, dehomogenized poly)
    for rows in combinations(range(nrows), size):
        rows_s = [mat_s.data[i] for i in rows]
        rows_t = [mat_t.data[i] for i in rows]
        form = det_binary_pencil(field, rows_s, rows_t)
        if form_is_zero(form):
            continue
        if acc is None:
            deg = len(form) - 1
            acc = (deg - _poly_degree(form), form[: _poly_degree(form) + 1])
        else:
            s_mult, q = acc
            sf = (len(form) - 1) - _poly_degree(form)
            acc = (min(s_mult, sf), _poly_gcd(field, q, form))
        if gcd_is_constant(*acc):
            return ("constant", None)
    if acc is None:
        return ("zero", None)
    s_mult, q = acc
    # re-homogenize: gcd form = s^s_mult * (q homogenized to its own degree)
    coeffs = list(q) + [field.zero()] * s_mult
    return ("form", coeffs)
