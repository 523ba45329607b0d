"""Special monads on projective space and their basic calculus.

A special monad is a three-term complex

    O(-1)^v --alpha--> O^w --beta--> O(1)^v'

on P^n (n = 2 or 3) whose left map is injective as a sheaf map and whose
right map is surjective at every point.  The middle cohomology is a
coherent sheaf; everything this package computes is a function of the
dimension triple (v, w, v') and the two matrices of linear forms.

This module owns the data model: construction and validation, Chern
invariants, the built-in example monads, direct sums, duals, a seeded
random generator (sample-and-verify) and the JSON wire format.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import exactlin
from ._seeds import rng_for
from .errors import (
    MonadDecodeError,
    MonadLabError,
    NotLocallyFreeError,
    NotRepresentableError,
    RetryExhaustedError,
    ShapeMismatchError,
)
from .exactlin import (
    QQ,
    DenseMatrix,
    LinearFormMatrix,
    PrimeField,
    forms_matrix,
)

COEFF_BOUND = 9          # generator coefficient box [-9, 9]
GENERATOR_RETRIES = 200

EXAMPLE_NAMES = ("torsion-free", "reflexive", "locally-free")


class SpecialMonad:
    """A special monad; immutable apart from a cached classification."""

    __slots__ = ("ambient_n", "v", "w", "v_prime", "alpha", "beta", "field",
                 "classification")

    def __init__(self, ambient_n: int, alpha: LinearFormMatrix, beta: LinearFormMatrix):
        if ambient_n not in (2, 3):
            raise ShapeMismatchError(f"ambient dimension must be 2 or 3, got {ambient_n}")
        nvars = ambient_n + 1
        if alpha.nvars != nvars or beta.nvars != nvars:
            raise ShapeMismatchError("maps must use one linear form per homogeneous coordinate")
        if alpha.field != beta.field:
            raise ShapeMismatchError("alpha and beta live over different fields")
        if beta.ncols != alpha.nrows:
            raise ShapeMismatchError(
                f"middle dimension mismatch: beta has {beta.ncols} columns, "
                f"alpha has {alpha.nrows} rows"
            )
        self.ambient_n = ambient_n
        self.alpha = alpha
        self.beta = beta
        self.field = alpha.field
        self.v = alpha.ncols
        self.w = alpha.nrows
        self.v_prime = beta.nrows
        self.classification = None

    def dims(self) -> tuple[int, int, int]:
        return (self.v, self.w, self.v_prime)

    @property
    def monad_id(self) -> str:
        return hashlib.sha256(encode(self)).hexdigest()[:12]

    def __eq__(self, other):
        return (
            isinstance(other, SpecialMonad)
            and self.ambient_n == other.ambient_n
            and self.field == other.field
            and self.alpha == other.alpha
            and self.beta == other.beta
        )

    def __repr__(self):
        return (f"SpecialMonad(P{self.ambient_n}, v={self.v}, w={self.w}, "
                f"v'={self.v_prime}, {self.field!r})")


def special_monad_exists(v: int, w: int, v_prime: int) -> bool:
    """Existence criterion (Floystad) for dimensions of a special monad on P3.

    Implemented verbatim, including its asymmetry in v and v'.
    """
    if min(v, w, v_prime) < 0:
        raise ValueError("dimensions must be non-negative")
    return (w >= 2 * v_prime + 2 and w >= v + v_prime) or (w >= v + v_prime + 3)


# ---------------------------------------------------------------------------
# built-in examples


def example_monad(name: str) -> SpecialMonad:
    """One of the three built-in monads on P3, by regularity class.

    Names: "torsion-free", "reflexive", "locally-free".  All three have
    (c1, c2, c3) = (0, 1, 0); they differ in where the left map degenerates
    (a line, a point, nowhere).
    """
    if name == "torsion-free":
        alpha = forms_matrix(QQ, 4, [["x"], ["y"], ["0"], ["0"]])
        beta = forms_matrix(QQ, 4, [["-y", "x", "z", "w"]])
    elif name == "reflexive":
        alpha = forms_matrix(QQ, 4, [["x"], ["y"], ["0"], ["0"], ["z"]])
        beta = forms_matrix(QQ, 4, [["-y", "x", "z", "w", "0"]])
    elif name == "locally-free":
        alpha = forms_matrix(QQ, 4, [["x"], ["y"], ["-w"], ["z"]])
        beta = forms_matrix(QQ, 4, [["-y", "x", "z", "w"]])
    else:
        raise ValueError(f"unknown example {name!r}; expected one of {EXAMPLE_NAMES}")
    return SpecialMonad(3, alpha, beta)


def trivial_monad(w: int, ambient_n: int = 3, field=QQ) -> SpecialMonad:
    """The monad (0, w, 0) with empty maps; its cohomology is O^w."""
    if w < 0:
        raise ValueError("w must be non-negative")
    nvars = ambient_n + 1
    alpha = LinearFormMatrix.zeros(field, w, 0, nvars)
    beta = LinearFormMatrix.zeros(field, 0, w, nvars)
    return SpecialMonad(ambient_n, alpha, beta)


# ---------------------------------------------------------------------------
# Chern invariants


@dataclass(frozen=True)
class ChernData:
    """Rank and Chern data of the cohomology sheaf, determined by (v, w, v')."""

    rank: int
    c1: int
    ch2: Fraction
    c2: int
    ch3: Fraction | None = None   # None on P2
    c3: int | None = None

    def to_json_obj(self):
        return {
            "rank": self.rank,
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "ch2": QQ.fmt(self.ch2),
            "ch3": None if self.ch3 is None else QQ.fmt(self.ch3),
        }


def invariants(M: SpecialMonad) -> ChernData:
    """Chern data from ch(E) = w - v*ch(O(-1)) - v'*ch(O(1))."""
    v, w, vp = M.dims()
    r = w - v - vp
    if r < 0:
        raise MonadLabError(f"negative rank {r}: dims ({v}, {w}, {vp}) are not a monad's")
    c1 = v - vp
    ch2 = Fraction(-(v + vp), 2)
    c2_frac = Fraction(c1 * c1, 2) - ch2
    assert c2_frac.denominator == 1
    c2 = int(c2_frac)
    if M.ambient_n == 2:
        return ChernData(rank=r, c1=c1, ch2=ch2, c2=c2)
    ch3 = Fraction(v - vp, 6)
    c3_frac = (6 * ch3 - c1 ** 3 + 3 * c1 * c2) / 3
    assert c3_frac.denominator == 1
    return ChernData(rank=r, c1=c1, ch2=ch2, c2=c2, ch3=ch3, c3=int(c3_frac))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationBudget:
    """Sampling effort for the Monte-Carlo parts of validate()."""

    qq_samples: int = 24
    enum_primes: tuple[int, ...] = (5, 7)
    fp_prime: int = exactlin.DEFAULT_PRIME
    fp_samples: int = 400
    alpha_samples: int = 40
    seed: int = 0


@dataclass
class CheckResult:
    name: str
    passed: bool
    confidence: str            # "exact" or "monte_carlo"
    detail: str = ""
    witness: list[str] | None = None

    def to_json_obj(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "confidence": self.confidence,
            "detail": self.detail,
            "witness": self.witness,
        }


@dataclass
class ValidationReport:
    composition: CheckResult
    beta_surjective: CheckResult
    alpha_injective: CheckResult
    rank_zero: bool
    notes: list[str] = dc_field(default_factory=list)

    @property
    def overall(self) -> bool:
        return (self.composition.passed and self.beta_surjective.passed
                and self.alpha_injective.passed)

    def to_json_obj(self):
        return {
            "overall": self.overall,
            "checks": [c.to_json_obj() for c in
                       (self.composition, self.beta_surjective, self.alpha_injective)],
            "rank_zero": self.rank_zero,
            "notes": self.notes,
        }


def _fmt_point(field, point) -> list[str]:
    return [field.fmt(x) for x in point]


def _random_point(rng, field, nvars: int):
    while True:
        if field.kind == "Fp":
            pt = [rng.randrange(field.p) for _ in range(nvars)]
        else:
            pt = [Fraction(rng.randint(-COEFF_BOUND, COEFF_BOUND)) for _ in range(nvars)]
        if any(x != 0 for x in pt):
            return pt


def _projective_points(field, nvars: int):
    """All points of P^{nvars-1} over a prime field, one representative each."""
    p = field.p
    for lead in range(nvars):
        tail = nvars - lead - 1
        for rest in itertools.product(range(p), repeat=tail):
            yield [0] * lead + [1] + list(rest)


def _check_beta_surjective(M: SpecialMonad, budget: ValidationBudget) -> CheckResult:
    vp = M.v_prime
    n = M.ambient_n
    name = "beta_surjective"
    if vp == 0:
        return CheckResult(name, True, "exact", "no conditions (v' = 0)")
    if vp == 1:
        # single row of w linear forms: the common zero locus is the kernel
        # of the w x (n+1) coefficient matrix, so emptiness is a rank condition
        coeff = DenseMatrix.from_rows(
            M.field, [M.beta.entry_form(0, j) for j in range(M.w)]
        )
        r = coeff.rank()
        if r == n + 1:
            return CheckResult(name, True, "exact",
                               f"coefficient rank {r} = n+1, no common zero")
        wit = [coeff.right_kernel().data[i][0] for i in range(n + 1)]
        return CheckResult(name, False, "exact",
                           f"coefficient rank {r} < {n + 1}: common zero locus "
                           f"of dimension {n - r}",
                           witness=_fmt_point(M.field, wit))

    # v' >= 2: decide by sampling; full enumeration over small prime fields,
    # random points over a large one, random rational points.
    checked = 0
    for q in budget.enum_primes:
        try:
            Mq = to_prime_field(M, q) if M.field == QQ else (M if M.field.kind == "Fp" and M.field.p == q else None)
        except MonadLabError:
            continue
        if Mq is None:
            continue
        for pt in _projective_points(Mq.field, n + 1):
            checked += 1
            if Mq.beta.at(pt).rank() < vp:
                res = _confirm_beta_failure(M, pt, q)
                if res is not None:
                    return res
    rng = rng_for("validate-beta", budget.seed, M.w, M.v_prime)
    if M.field == QQ:
        try:
            Mp = to_prime_field(M, budget.fp_prime)
        except MonadLabError:
            Mp = None
        if Mp is not None:
            for _ in range(budget.fp_samples):
                pt = _random_point(rng, Mp.field, n + 1)
                checked += 1
                if Mp.beta.at(pt).rank() < vp:
                    res = _confirm_beta_failure(M, pt, budget.fp_prime)
                    if res is not None:
                        return res
        for _ in range(budget.qq_samples):
            pt = _random_point(rng, QQ, n + 1)
            checked += 1
            if M.beta.at(pt).rank() < vp:
                return CheckResult("beta_surjective", False, "exact",
                                   "rank drop at a rational point",
                                   witness=_fmt_point(QQ, pt))
    else:
        for _ in range(budget.fp_samples):
            pt = _random_point(rng, M.field, n + 1)
            checked += 1
            if M.beta.at(pt).rank() < vp:
                return CheckResult("beta_surjective", False, "exact",
                                   "rank drop at a rational point",
                                   witness=_fmt_point(M.field, pt))
    return CheckResult("beta_surjective", True, "monte_carlo",
                       f"no rank drop at {checked} sampled/enumerated points")


def _confirm_beta_failure(M: SpecialMonad, pt, q: int) -> CheckResult | None:
    """A rank drop over F_q proves nothing over Q; recheck the integer lift."""
    if M.field.kind == "Fp":
        return CheckResult("beta_surjective", False, "exact",
                           f"rank drop at a point over {M.field.name}",
                           witness=_fmt_point(M.field, pt))
    lift = [Fraction(int(x)) for x in pt]
    if M.beta.at(lift).rank() < M.v_prime:
        return CheckResult("beta_surjective", False, "exact",
                           "rank drop at a rational point",
                           witness=_fmt_point(QQ, lift))
    return None  # mod-q artifact; keep scanning


def _check_alpha_injective(M: SpecialMonad, budget: ValidationBudget) -> CheckResult:
    v = M.v
    n = M.ambient_n
    name = "alpha_injective"
    if v == 0:
        return CheckResult(name, True, "exact", "empty left map")
    rng = rng_for("validate-alpha", budget.seed, M.w, M.v)
    for _ in range(budget.alpha_samples):
        pt = _random_point(rng, M.field, n + 1)
        if M.alpha.at(pt).rank() == v:
            return CheckResult(name, True, "exact",
                               "full column rank at a sampled point",
                               witness=_fmt_point(M.field, pt))
    # Sampling failed: decide exactly.  Every v x v minor has degree <= v in
    # each variable, so vanishing on the grid {0..v}^(n+1) forces it to vanish
    # identically (grids larger than the per-variable degree detect nonzero
    # polynomials over any field with enough elements).
    if M.field.kind == "Fp" and M.field.p <= v:
        return CheckResult(name, False, "monte_carlo",
                           f"no full-rank point in {budget.alpha_samples} samples; "
                           f"field too small for the deterministic grid")
    for pt in itertools.product(range(v + 1), repeat=n + 1):
        if not any(pt):
            continue
        if M.alpha.at([M.field.coerce(x) for x in pt]).rank() == v:
            return CheckResult(name, True, "exact",
                               "full column rank at a grid point",
                               witness=[M.field.fmt(M.field.coerce(x)) for x in pt])
    return CheckResult(name, False, "exact",
                       "all maximal minors vanish identically "
                       f"(grid {v + 1}^{n + 1} exhausted)")


def validate(M: SpecialMonad, budget: ValidationBudget | None = None) -> ValidationReport:
    """Check the three monad conditions and report per-condition confidence.

    Composition and (for v' <= 1) pointwise surjectivity of the right map are
    exact; for v' >= 2 surjectivity is sampled and reported as monte_carlo.
    Generic injectivity of the left map is always decided exactly: a witness
    point certifies it, and the fallback grid evaluation refutes it.
    """
    budget = budget or ValidationBudget()
    comp_ok = exactlin.compose_check(M.beta, M.alpha)
    composition = CheckResult("composition_zero", comp_ok, "exact",
                              "" if comp_ok else "beta*alpha has a nonzero quadric entry")
    beta_check = _check_beta_surjective(M, budget)
    alpha_check = _check_alpha_injective(M, budget)
    rank_zero = (M.w == M.v + M.v_prime)
    notes = []
    if rank_zero:
        notes.append("rank-0 monad: cohomology sheaf has rank 0")
    return ValidationReport(composition, beta_check, alpha_check, rank_zero, notes)


# ---------------------------------------------------------------------------
# constructions


def direct_sum(M1: SpecialMonad, M2: SpecialMonad) -> SpecialMonad:
    """Block-diagonal sum; dimensions add and Chern characters add."""
    if M1.ambient_n != M2.ambient_n:
        raise ShapeMismatchError("direct sum needs a common ambient space")
    if M1.field != M2.field:
        raise ShapeMismatchError("direct sum needs a common field")
    return SpecialMonad(M1.ambient_n,
                        M1.alpha.block_diag(M2.alpha),
                        M1.beta.block_diag(M2.beta))


def dualize(M: SpecialMonad, classification=None) -> SpecialMonad:
    """The dual monad (v', w, v) with maps (beta^T, alpha^T).

    Only valid when the cohomology sheaf is locally free; the left-map
    degeneracy classification is consulted (and computed if absent).
    """
    cls = classification or M.classification
    if cls is None:
        from . import pointwise
        cls = pointwise.classify(M)
    if cls.level != "locally_free":
        raise NotLocallyFreeError(
            f"dual monad requires a locally-free sheaf; classification is {cls.level}"
        )
    return SpecialMonad(M.ambient_n, M.beta.transpose(), M.alpha.transpose())


def to_prime_field(M: SpecialMonad, p: int) -> SpecialMonad:
    """Reduce a monad mod p; refuses when a denominator vanishes mod p."""
    fp = PrimeField(p)
    if M.field == fp:
        return M
    if M.field.kind == "Fp":
        raise MonadLabError(f"cannot move a monad from {M.field.name} to Fp:{p}")
    try:
        return SpecialMonad(M.ambient_n, M.alpha.to_field(fp), M.beta.to_field(fp))
    except ZeroDivisionError as exc:
        raise MonadLabError(f"cannot reduce monad mod {p}: {exc}") from exc


def _random_forms(field, nrows: int, ncols: int, nvars: int, rng) -> LinearFormMatrix:
    out = LinearFormMatrix.zeros(field, nrows, ncols, nvars)
    for t in range(nvars):
        for i in range(nrows):
            for j in range(ncols):
                out.coeffs[t].data[i][j] = field.coerce(
                    rng.randint(-COEFF_BOUND, COEFF_BOUND))
    return out


def random_monad(v: int, w: int, v_prime: int, seed: int = 0, field=QQ,
                 ambient_n: int = 3, retries: int = GENERATOR_RETRIES) -> SpecialMonad:
    """Seeded random monad with the given dimensions.

    Draws one map with small random integer coefficients and the other
    from the solution space of the (linear) vanishing-composite
    constraint, then retries until validate() passes.  The drawn side is
    the one with the fewer constraints: the left map when v <= v', the
    right map otherwise (for v > v' a generic left map admits no nonzero
    right map at all).  Deterministic in (seed, dims, field).
    """
    if min(v, w, v_prime) < 0:
        raise ValueError("dimensions must be non-negative")
    if v == 0 and v_prime == 0:
        return trivial_monad(w, ambient_n, field)
    if not special_monad_exists(v, w, v_prime):
        raise NotRepresentableError(
            f"no special monad with (v, w, v') = ({v}, {w}, {v_prime})"
        )
    nvars = ambient_n + 1
    budget = ValidationBudget(seed=seed)
    for attempt in range(retries):
        rng = rng_for("random-monad", seed, v, w, v_prime, field.name, attempt)
        if v_prime == 0 or v <= v_prime:
            alpha = _random_forms(field, w, v, nvars, rng)
            beta = _solve_beta(alpha, v_prime, rng)
        else:
            beta = _random_forms(field, v_prime, w, nvars, rng)
            # solve beta * alpha = 0 for alpha via the transposed system
            alpha_t = _solve_beta(beta.transpose(), v, rng)
            alpha = None if alpha_t is None else alpha_t.transpose()
        if beta is None or alpha is None:
            continue
        M = SpecialMonad(ambient_n, alpha, beta)
        if validate(M, budget).overall:
            return M
    raise RetryExhaustedError(
        f"no valid monad with dims ({v}, {w}, {v_prime}) after {retries} draws"
    )


def _solve_beta(alpha: LinearFormMatrix, v_prime: int, rng) -> LinearFormMatrix | None:
    """Random beta with beta*alpha = 0; None when the solution space is trivial."""
    field = alpha.field
    w = alpha.nrows
    v = alpha.ncols
    nvars = alpha.nvars
    if v_prime == 0:
        return LinearFormMatrix.zeros(field, 0, w, nvars)
    # Unknowns: one row of beta, laid out as u[t*w + l] = coefficient of x_t
    # in entry l.  Row j of the constraints: coefficient of x_a x_b in
    # (beta alpha)[_, j] must vanish.
    nunk = nvars * w
    rows = []
    for j in range(v):
        for a in range(nvars):
            for b in range(a, nvars):
                row = [field.zero()] * nunk
                for l in range(w):
                    row[a * w + l] = field.add(row[a * w + l], alpha.coeffs[b].data[l][j])
                    if a != b:
                        row[b * w + l] = field.add(row[b * w + l], alpha.coeffs[a].data[l][j])
                rows.append(row)
    constraints = DenseMatrix(field, len(rows), nunk, rows)
    kern = constraints.right_kernel()
    if kern.ncols == 0:
        return None
    beta = LinearFormMatrix.zeros(field, v_prime, w, nvars)
    for i in range(v_prime):
        for _ in range(8):
            combo = [field.zero()] * nunk
            for c in range(kern.ncols):
                coeff = field.coerce(rng.randint(-2, 2))
                if coeff == 0:
                    continue
                for r in range(nunk):
                    x = kern.data[r][c]
                    if x != 0:
                        combo[r] = field.add(combo[r], field.mul(coeff, x))
            if any(x != 0 for x in combo):
                break
        for t in range(nvars):
            for l in range(w):
                beta.coeffs[t].data[i][l] = combo[t * w + l]
    return beta


# ---------------------------------------------------------------------------
# serialization (JSON wire format)


def _coeff_matrices_obj(L: LinearFormMatrix):
    field = L.field
    return [[[field.fmt(x) for x in row] for row in c.data] for c in L.coeffs]


def encode(M: SpecialMonad) -> bytes:
    """Canonical JSON bytes; decode(encode(M)) == M and encoding is stable."""
    obj = {
        "ambient_n": M.ambient_n,
        "field": M.field.name,
        "v": M.v,
        "w": M.w,
        "v_prime": M.v_prime,
        "alpha": _coeff_matrices_obj(M.alpha),
        "beta": _coeff_matrices_obj(M.beta),
    }
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("utf-8")


def _require(cond: bool, message: str, position: str):
    if not cond:
        raise MonadDecodeError(message, position=position)


def _parse_map(obj, field, nvars: int, nrows: int, ncols: int, key: str) -> LinearFormMatrix:
    _require(isinstance(obj, list) and len(obj) == nvars,
             f"expected {nvars} coefficient matrices", key)
    mats = []
    for t, mat in enumerate(obj):
        _require(isinstance(mat, list) and len(mat) == nrows,
                 f"expected {nrows} rows", f"{key}[{t}]")
        rows = []
        for i, row in enumerate(mat):
            _require(isinstance(row, list) and len(row) == ncols,
                     f"expected {ncols} entries, got "
                     f"{len(row) if isinstance(row, list) else type(row).__name__}",
                     f"{key}[{t}][{i}]")
            parsed = []
            for j, cell in enumerate(row):
                _require(isinstance(cell, str), "scalar entries must be strings",
                         f"{key}[{t}][{i}][{j}]")
                try:
                    parsed.append(field.parse(cell))
                except MonadDecodeError as exc:
                    raise MonadDecodeError(str(exc), position=f"{key}[{t}][{i}][{j}]") from exc
            rows.append(parsed)
        mats.append(DenseMatrix(field, nrows, ncols, rows))
    return LinearFormMatrix(field, nrows, ncols, nvars, mats)


def decode(data: bytes | str) -> SpecialMonad:
    """Parse the JSON wire format, with position diagnostics on bad input."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MonadDecodeError(f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MonadDecodeError(f"invalid JSON: {exc.msg}",
                               position=f"line {exc.lineno} column {exc.colno}") from exc
    _require(isinstance(obj, dict), "top level must be an object", "$")
    for key in ("ambient_n", "field", "v", "w", "v_prime", "alpha", "beta"):
        _require(key in obj, f"missing key {key!r}", "$")
    n = obj["ambient_n"]
    _require(n in (2, 3), "ambient_n must be 2 or 3", "ambient_n")
    _require(isinstance(obj["field"], str), "field must be a string", "field")
    field = exactlin.field_from_name(obj["field"])
    dims = {}
    for key in ("v", "w", "v_prime"):
        _require(isinstance(obj[key], int) and obj[key] >= 0,
                 f"{key} must be a non-negative integer", key)
        dims[key] = obj[key]
    alpha = _parse_map(obj["alpha"], field, n + 1, dims["w"], dims["v"], "alpha")
    beta = _parse_map(obj["beta"], field, n + 1, dims["v_prime"], dims["w"], "beta")
    return SpecialMonad(n, alpha, beta)
