"""Exact scalar arithmetic and dense exact linear algebra.

Two computable coefficient fields are supported: the rationals (stdlib
Fraction, always reduced with positive denominator) and prime fields F_p
(plain ints kept in [0, p)).  Rank and kernel computations are exact:
fraction-free Bareiss elimination over Q to control coefficient growth,
ordinary Gaussian elimination over F_p.

The module also provides monomial bases of the graded pieces of a
polynomial ring (graded-lex, variable 0 highest) and matrices of linear
forms together with the multiplication maps they induce on graded pieces.
Matrices are dense; the intended scale is a few thousand rows at most.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm

from .errors import MonadDecodeError, ShapeMismatchError

# ---------------------------------------------------------------------------
# fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for anything that survives trial division
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The field Q. Scalars are Fractions in lowest terms."""

    kind = "Q"
    name = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / Fraction(a)

    def parse(self, text: str) -> Fraction:
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MonadDecodeError(f"bad rational scalar {text!r}: {exc}") from exc

    def fmt(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a prime p. Scalars are ints in [0, p)."""

    kind = "Fp"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp:{p}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def parse(self, text: str) -> int:
        try:
            return self.coerce(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise MonadDecodeError(f"bad residue {text!r} mod {self.p}: {exc}") from exc

    def fmt(self, x) -> str:
        return str(x % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()

DEFAULT_PRIME = 32003


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str):
    """Inverse of field.name: "Q" or "Fp:<p>"."""
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        try:
            p = int(name[3:])
        except ValueError as exc:
            raise MonadDecodeError(f"bad field name {name!r}") from exc
        try:
            return PrimeField(p)
        except ValueError as exc:
            raise MonadDecodeError(str(exc)) from exc
    raise MonadDecodeError(f"unknown field {name!r} (expected 'Q' or 'Fp:<p>')")


# ---------------------------------------------------------------------------
# elimination kernels (destructive, list-of-lists)


def _bareiss_rank(rows: list[list[int]], ncols: int) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    Intermediate entries are exact minors of the input, so all divisions
    below are exact integer divisions.
    """
    nrows = len(rows)
    rank = 0
    col = 0
    prev = 1
    while col < ncols and rank < nrows:
        piv = None
        for i in range(rank, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        if piv != rank:
            rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pval = prow[col]
        for i in range(rank + 1, nrows):
            row = rows[i]
            f = row[col]
            if f:
                for j in range(col + 1, ncols):
                    row[j] = (pval * row[j] - f * prow[j]) // prev
                row[col] = 0
            elif prev != 1 or pval != 1:
                for j in range(col + 1, ncols):
                    row[j] = pval * row[j] // prev
        prev = pval
        rank += 1
        col += 1
    return rank


def _rank_mod_p(rows: list[list[int]], ncols: int, p: int) -> int:
    """Rank over F_p; entries must already be reduced mod p."""
    nrows = len(rows)
    rank = 0
    col = 0
    while col < ncols and rank < nrows:
        piv = None
        for i in range(rank, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        if piv != rank:
            rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = pow(prow[col], -1, p)
        for j in range(col, ncols):
            prow[j] = prow[j] * inv % p
        for i in range(rank + 1, nrows):
            f = rows[i][col]
            if f:
                row = rows[i]
                for j in range(col, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        col += 1
    return rank


def _rref(field, rows, ncols):
    """Reduced row echelon form in place; returns the pivot column list."""
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def _int_rows(data) -> list[list[int]]:
    """Clear denominators row by row and strip content; rank/kernel safe."""
    out = []
    for row in data:
        mult = lcm(*(x.denominator for x in row)) if row else 1
        ints = [int(x * mult) for x in row]
        g = 0
        for x in ints:
            g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


# ---------------------------------------------------------------------------
# matrices


class DenseMatrix:
    """Dense matrix over Q or F_p. Treated as immutable after construction."""

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field, nrows: int, ncols: int, data):
        if len(data) != nrows or any(len(r) != ncols for r in data):
            raise ShapeMismatchError(f"expected {nrows}x{ncols} data")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.data = data

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "DenseMatrix":
        z = field.zero()
        return cls(field, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n: int) -> "DenseMatrix":
        m = cls.zeros(field, n, n)
        one = field.one()
        for i in range(n):
            m.data[i][i] = one
        return m

    @classmethod
    def from_rows(cls, field, rows) -> "DenseMatrix":
        data = [[field.coerce(x) for x in row] for row in rows]
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        return cls(field, nrows, ncols, data)

    def copy_data(self):
        return [row[:] for row in self.data]

    def transpose(self) -> "DenseMatrix":
        data = [[self.data[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return DenseMatrix(self.field, self.ncols, self.nrows, data)

    def matmul(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.ncols != other.nrows:
            raise ShapeMismatchError(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        if self.field != other.field:
            raise ShapeMismatchError("matrix product across different fields")
        f = self.field
        bt = other.transpose().data
        out = []
        for row in self.data:
            out_row = []
            for col in bt:
                acc = f.zero()
                for a, b in zip(row, col):
                    if a != 0 and b != 0:
                        acc = f.add(acc, f.mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        return DenseMatrix(f, self.nrows, other.ncols, out)

    def hstack(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.nrows != other.nrows or self.field != other.field:
            raise ShapeMismatchError("hstack needs equal row counts and fields")
        data = [a + b for a, b in zip(self.data, other.data)]
        return DenseMatrix(self.field, self.nrows, self.ncols + other.ncols, data)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        if self.field.kind == "Fp":
            return _rank_mod_p(self.copy_data(), self.ncols, self.field.p)
        return _bareiss_rank(_int_rows(self.data), self.ncols)

    def right_kernel(self) -> "DenseMatrix":
        """Basis of {x : M x = 0}, returned as the columns of a matrix."""
        f = self.field
        if self.ncols == 0:
            return DenseMatrix(f, 0, 0, [])
        if self.nrows == 0:
            return DenseMatrix.identity(f, self.ncols)
        rows = self.copy_data()
        pivots = _rref(f, rows, self.ncols)
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        cols = []
        for fc in free:
            vec = [f.zero()] * self.ncols
            vec[fc] = f.one()
            for r, pc in enumerate(pivots):
                vec[pc] = f.neg(rows[r][fc])
            cols.append(vec)
        if f.kind == "Q":
            cols = [_primitive(vec) for vec in cols]
        data = [[col[i] for col in cols] for i in range(self.ncols)]
        return DenseMatrix(f, self.ncols, len(cols), data)

    def __eq__(self, other):
        return (
            isinstance(other, DenseMatrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.data == other.data
        )

    def __repr__(self):
        return f"DenseMatrix({self.nrows}x{self.ncols} over {self.field!r})"


def _primitive(vec):
    """Scale a rational vector to coprime integers with positive leading entry."""
    mult = lcm(*(x.denominator for x in vec)) if vec else 1
    ints = [int(x * mult) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return [Fraction(x) for x in ints]


def rank(m: DenseMatrix) -> int:
    return m.rank()


def kernel_basis(m: DenseMatrix) -> DenseMatrix:
    return m.right_kernel()


# ---------------------------------------------------------------------------
# monomial bases of graded pieces


@lru_cache(maxsize=None)
def monomial_exponents(m: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree d in m variables, graded-lex, var 0 highest."""
    if m < 1:
        raise ValueError("need at least one variable")
    if d < 0:
        return ()
    if m == 1:
        return ((d,),)
    out = []
    for e0 in range(d, -1, -1):
        for rest in monomial_exponents(m - 1, d - e0):
            out.append((e0,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(m: int, d: int) -> dict:
    return {e: i for i, e in enumerate(monomial_exponents(m, d))}


def monomial_count(m: int, d: int) -> int:
    return comb(d + m - 1, m - 1) if d >= 0 else 0


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered monomial basis of the degree-d piece in m variables."""

    m: int
    d: int
    exponents: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.exponents)


def monomial_basis(m: int, d: int) -> MonomialBasis:
    return MonomialBasis(m, d, monomial_exponents(m, d))


# ---------------------------------------------------------------------------
# matrices of linear forms


class LinearFormMatrix:
    """Matrix of homogeneous linear forms, one coefficient matrix per variable.

    Entry (i, j) is sum_t coeffs[t][i][j] * x_t.
    """

    __slots__ = ("field", "nrows", "ncols", "nvars", "coeffs")

    def __init__(self, field, nrows: int, ncols: int, nvars: int, coeffs):
        if len(coeffs) != nvars:
            raise ShapeMismatchError(f"expected {nvars} coefficient matrices")
        for c in coeffs:
            if c.nrows != nrows or c.ncols != ncols or c.field != field:
                raise ShapeMismatchError("coefficient matrices must share shape and field")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.nvars = nvars
        self.coeffs = tuple(coeffs)

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int, nvars: int) -> "LinearFormMatrix":
        return cls(field, nrows, ncols, nvars,
                   [DenseMatrix.zeros(field, nrows, ncols) for _ in range(nvars)])

    @classmethod
    def from_entry_forms(cls, field, nvars: int, entries) -> "LinearFormMatrix":
        """Build from entries[i][j] = coefficient vector of length nvars."""
        nrows = len(entries)
        ncols = len(entries[0]) if nrows else 0
        out = cls.zeros(field, nrows, ncols, nvars)
        for i, row in enumerate(entries):
            if len(row) != ncols:
                raise ShapeMismatchError("ragged entry rows")
            for j, form in enumerate(row):
                if len(form) != nvars:
                    raise ShapeMismatchError(f"entry ({i},{j}) has {len(form)} coefficients")
                for t, c in enumerate(form):
                    out.coeffs[t].data[i][j] = field.coerce(c)
        return out

    def entry_form(self, i: int, j: int):
        return [self.coeffs[t].data[i][j] for t in range(self.nvars)]

    def at(self, point) -> DenseMatrix:
        """Evaluate at a point: sum_t point[t] * coeffs[t]."""
        if len(point) != self.nvars:
            raise ShapeMismatchError(f"point needs {self.nvars} coordinates")
        f = self.field
        pt = [f.coerce(x) for x in point]
        data = [[f.zero()] * self.ncols for _ in range(self.nrows)]
        for t, c in enumerate(pt):
            if c == 0:
                continue
            block = self.coeffs[t].data
            for i in range(self.nrows):
                brow = block[i]
                drow = data[i]
                for j in range(self.ncols):
                    a = brow[j]
                    if a != 0:
                        drow[j] = f.add(drow[j], f.mul(c, a))
        return DenseMatrix(f, self.nrows, self.ncols, data)

    def transpose(self) -> "LinearFormMatrix":
        return LinearFormMatrix(self.field, self.ncols, self.nrows, self.nvars,
                                [c.transpose() for c in self.coeffs])

    def to_field(self, field) -> "LinearFormMatrix":
        mats = [
            DenseMatrix(field, self.nrows, self.ncols,
                        [[field.coerce(x) for x in row] for row in c.data])
            for c in self.coeffs
        ]
        return LinearFormMatrix(field, self.nrows, self.ncols, self.nvars, mats)

    def block_diag(self, other: "LinearFormMatrix") -> "LinearFormMatrix":
        if self.nvars != other.nvars or self.field != other.field:
            raise ShapeMismatchError("block sum needs matching variables and field")
        f = self.field
        nrows = self.nrows + other.nrows
        ncols = self.ncols + other.ncols
        out = LinearFormMatrix.zeros(f, nrows, ncols, self.nvars)
        for t in range(self.nvars):
            dst = out.coeffs[t].data
            for i, row in enumerate(self.coeffs[t].data):
                dst[i][: self.ncols] = row
            for i, row in enumerate(other.coeffs[t].data):
                dst[self.nrows + i][self.ncols:] = row
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, LinearFormMatrix)
            and self.field == other.field
            and (self.nrows, self.ncols, self.nvars) == (other.nrows, other.ncols, other.nvars)
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"LinearFormMatrix({self.nrows}x{self.ncols}, {self.nvars} vars, {self.field!r})"


def mult_map(L: LinearFormMatrix, d: int) -> DenseMatrix:
    """Matrix of U (x) S_d -> U' (x) S_{d+1}, (u (x) f) |-> L u f.

    Basis index of u_j (x) m_a is j*|S_d| + a, in monomial_basis order.
    Shape (nrows*|S_{d+1}|) x (ncols*|S_d|).
    """
    f = L.field
    m = L.nvars
    dom = monomial_exponents(m, d)
    cod = monomial_exponents(m, d + 1)
    cod_idx = monomial_index(m, d + 1)
    nrows = L.nrows * len(cod)
    ncols = L.ncols * len(dom)
    data = [[f.zero()] * ncols for _ in range(nrows)]
    ncod = len(cod)
    ndom = len(dom)
    for t in range(m):
        block = L.coeffs[t].data
        # target monomial index of x_t * m_a, computed once per (t, a)
        shifted = []
        for e in dom:
            e2 = list(e)
            e2[t] += 1
            shifted.append(cod_idx[tuple(e2)])
        for i in range(L.nrows):
            brow = block[i]
            for j in range(L.ncols):
                c = brow[j]
                if c == 0:
                    continue
                col_base = j * ndom
                row_base = i * ncod
                for a, b in enumerate(shifted):
                    r = data[row_base + b]
                    cidx = col_base + a
                    r[cidx] = f.add(r[cidx], c)
    return DenseMatrix(f, nrows, ncols, data)


def compose_check(B: LinearFormMatrix, A: LinearFormMatrix) -> bool:
    """True iff the product B*A vanishes identically as a matrix of quadrics.

    Checks B_t A_t = 0 for all t and B_s A_t + B_t A_s = 0 for s < t.
    """
    if B.ncols != A.nrows:
        raise ShapeMismatchError(f"composite needs {B.ncols} = {A.nrows}")
    if B.nvars != A.nvars or B.field != A.field:
        raise ShapeMismatchError("composite needs matching variables and field")
    m = B.nvars
    for t in range(m):
        if not B.coeffs[t].matmul(A.coeffs[t]).is_zero():
            return False
    f = B.field
    for s in range(m):
        for t in range(s + 1, m):
            st = B.coeffs[s].matmul(A.coeffs[t])
            ts = B.coeffs[t].matmul(A.coeffs[s])
            mixed = [
                [f.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(st.data, ts.data)
            ]
            if any(x != 0 for row in mixed for x in row):
                return False
    return True


# ---------------------------------------------------------------------------
# readable construction of linear forms

_AXIS_NAMES = {3: ("x", "y", "z"), 4: ("x", "y", "z", "w")}


def parse_linear_form(text: str, nvars: int):
    """Parse a linear form like "x - 2*w" or "3*x1" into coefficients.

    Accepts variable names x0..x{nvars-1}; the aliases x,y,z(,w) are
    available for 3 or 4 variables. Constant terms other than 0 are refused.
    """
    names = {f"x{i}": i for i in range(nvars)}
    for i, alias in enumerate(_AXIS_NAMES.get(nvars, ())):
        names[alias] = i
    coeffs = [Fraction(0)] * nvars
    cleaned = text.replace(" ", "")
    if cleaned in ("", "0"):
        return coeffs
    # split into signed terms
    terms = []
    cur = ""
    for ch in cleaned:
        if ch in "+-" and cur:
            terms.append(cur)
            cur = ch if ch == "-" else ""
        else:
            cur += ch if ch != "+" else ""
    terms.append(cur)
    for term in terms:
        sign = Fraction(1)
        body = term
        while body.startswith("-"):
            sign = -sign
            body = body[1:]
        if "*" in body:
            c_text, var = body.split("*", 1)
            coeff = sign * Fraction(c_text)
        else:
            var = body
            coeff = sign
        if var not in names:
            raise ValueError(f"unknown variable {var!r} in linear form {text!r}")
        coeffs[names[var]] += coeff
    return coeffs


def forms_matrix(field, nvars: int, rows) -> LinearFormMatrix:
    """Build a LinearFormMatrix from string entries, e.g. [["-y","x","z","w"]]."""
    entries = [[parse_linear_form(e, nvars) for e in row] for row in rows]
    return LinearFormMatrix.from_entry_forms(field, nvars, entries)
