"""Exact twist cohomology of the cohomology sheaf of a special monad.

Let E be the middle cohomology of O(-1)^v -> O^w -> O(1)^v' on P^n and
write S_d for the degree-d piece of the coordinate ring.  Splitting the
monad into the two short exact sequences through K = ker(beta) and using
that line bundles on P^n have no middle cohomology, every h^p(E(k)) is a
rank computation on four multiplication maps:

    a_k : V (x) S_{k-1} -> W (x) S_k        (sections of the left map)
    b_k : W (x) S_k     -> V'(x) S_{k+1}    (sections of the right map)

together with their transposes in the dual degrees j = -k-n-1 (the top
cohomology of O(d) is dual to S_{-d-n-1}).  On P3:

    h^0 = dim ker b_k - rank a_k
    h^1 = v'|S_{k+1}| - rank b_k
    h^2 = v|S_{j+1}| - rank a*_j              j = -k-4
    h^3 = (w|S_j| - rank a*_j) - rank b*_{j-1}

and on P2 the two middle contributions combine into h^1, with j = -k-3.
The Euler characteristic identity and the dimension identities
h^1(E(-1)) = v', h^2(E(-3)) = v are asserted on every call; a failure
signals an engine defect, never a property of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import MonadLabError
from .exactlin import compose_check, monomial_count, mult_map
from .monad import SpecialMonad, dualize, invariants

DEFAULT_WINDOW = (-6, 2)


def chi_line_bundle(n: int, d: int) -> int:
    """Euler characteristic of O(d) on P^n, as a polynomial in d."""
    if n == 3:
        return (d + 1) * (d + 2) * (d + 3) // 6
    if n == 2:
        return (d + 1) * (d + 2) // 2
    raise ValueError(f"unsupported ambient dimension {n}")


def twist_cohomology(M: SpecialMonad, k: int) -> tuple[int, ...]:
    """(h^0, ..., h^n) of E(k); exact.  Expects a validated monad.

    The composite is re-checked here because the rank formulas silently
    assume it vanishes; the other two monad conditions stay the caller's
    responsibility (see validate).
    """
    if not compose_check(M.beta, M.alpha):
        raise MonadLabError("composite does not vanish; not a monad")
    n = M.ambient_n
    m = n + 1
    v, w, vp = M.dims()
    S = lambda d: monomial_count(m, d)

    rank_a = mult_map(M.alpha, k - 1).rank()
    rank_b = mult_map(M.beta, k).rank()
    h0 = (w * S(k) - rank_b) - rank_a

    if n == 3:
        j = -k - 4
        rank_at = mult_map(M.alpha.transpose(), j).rank()
        rank_bt = mult_map(M.beta.transpose(), j - 1).rank()
        h1 = vp * S(k + 1) - rank_b
        h2 = v * S(j + 1) - rank_at
        h3 = (w * S(j) - rank_at) - rank_bt
        out = (h0, h1, h2, h3)
    else:
        j = -k - 3
        rank_at = mult_map(M.alpha.transpose(), j).rank()
        rank_bt = mult_map(M.beta.transpose(), j - 1).rank()
        h1 = (vp * S(k + 1) - rank_b) + (v * S(j + 1) - rank_at)
        h2 = (w * S(j) - rank_at) - rank_bt
        out = (h0, h1, h2)

    if any(h < 0 for h in out):
        raise MonadLabError(f"negative cohomology dimension at twist {k}: {out}")
    euler = sum((-1) ** p * h for p, h in enumerate(out))
    expected = (w * chi_line_bundle(n, k) - v * chi_line_bundle(n, k - 1)
                - vp * chi_line_bundle(n, k + 1))
    if euler != expected:
        raise MonadLabError(
            f"Euler characteristic mismatch at twist {k}: got {euler}, "
            f"expected {expected}")
    if k == -1 and out[1] != vp:
        raise MonadLabError(f"h^1(E(-1)) = {out[1]} != v' = {vp}")
    if n == 3 and k == -3 and out[2] != v:
        raise MonadLabError(f"h^2(E(-3)) = {out[2]} != v = {v}")
    return out


@dataclass
class CohomologyTable:
    """h^p(E(k)) over a twist window; rows indexed by p, columns by k."""

    ambient_n: int
    k_min: int
    k_max: int
    rows: list[list[int]]

    def entry(self, p: int, k: int) -> int:
        if not (self.k_min <= k <= self.k_max and 0 <= p <= self.ambient_n):
            raise KeyError(f"(p, k) = ({p}, {k}) outside the table")
        return self.rows[p][k - self.k_min]

    def column(self, k: int) -> tuple[int, ...]:
        return tuple(self.rows[p][k - self.k_min] for p in range(self.ambient_n + 1))

    def euler(self, k: int) -> int:
        return sum((-1) ** p * h for p, h in enumerate(self.column(k)))

    def add(self, other: "CohomologyTable") -> "CohomologyTable":
        if (self.ambient_n, self.k_min, self.k_max) != (other.ambient_n, other.k_min, other.k_max):
            raise ValueError("tables must share ambient space and window")
        rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        return CohomologyTable(self.ambient_n, self.k_min, self.k_max, rows)

    def to_json_obj(self):
        return {
            "ambient_n": self.ambient_n,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "h": self.rows,
        }

    def to_csv(self) -> str:
        header = "p," + ",".join(str(k) for k in range(self.k_min, self.k_max + 1))
        lines = [header]
        for p, row in enumerate(self.rows):
            lines.append(f"{p}," + ",".join(str(h) for h in row))
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        ks = list(range(self.k_min, self.k_max + 1))
        lines = ["| p\\k | " + " | ".join(str(k) for k in ks) + " |",
                 "|" + "---|" * (len(ks) + 1)]
        for p, row in enumerate(self.rows):
            lines.append(f"| {p} | " + " | ".join(str(h) for h in row) + " |")
        return "\n".join(lines) + "\n"


def cohomology_table(M: SpecialMonad, k_min: int, k_max: int) -> CohomologyTable:
    """Exact table of twist cohomology on [k_min, k_max]."""
    if k_min > k_max:
        raise ValueError("empty twist window")
    cols = [twist_cohomology(M, k) for k in range(k_min, k_max + 1)]
    rows = [[col[p] for col in cols] for p in range(M.ambient_n + 1)]
    return CohomologyTable(M.ambient_n, k_min, k_max, rows)


# ---------------------------------------------------------------------------
# admissibility


def _vanishing_demanded(n: int, p: int, k: int) -> bool:
    """Whether h^p(E(k)) = 0 is part of the admissibility pattern.

    On P3: h^0 for k <= -1, h^1 for k <= -2, h^2 for k >= -2, h^3 for
    k >= -3.  On P2 the pattern is the instanton-sheaf one: h^0 for
    k <= -1 and h^2 for k >= -2, with no condition on h^1 (the kernel
    sequence forces h^1(E(-2)) = v for every monad on P2, so the
    mechanical analogue of the P3 pattern is unsatisfiable).
    """
    if n == 2:
        if p == 0:
            return k <= -1
        if p == 2:
            return k >= -2
        return False
    if p <= 1:
        return p + k <= -1
    return p + k >= 0


@dataclass
class AdmissibilityReport:
    ambient_n: int
    k_min: int
    k_max: int
    violations: list[tuple[int, int]]   # (p, k) with nonzero h where 0 demanded

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json_obj(self):
        return {
            "window": [self.k_min, self.k_max],
            "violations": [list(v) for v in self.violations],
            "passed": self.passed,
        }


def admissibility_violations(table: CohomologyTable) -> list[tuple[int, int]]:
    """(p, k) entries of a table that break the admissibility vanishing pattern."""
    out = []
    for p in range(table.ambient_n + 1):
        for k in range(table.k_min, table.k_max + 1):
            if _vanishing_demanded(table.ambient_n, p, k) and table.entry(p, k) != 0:
                out.append((p, k))
    return out


def admissibility_check(M: SpecialMonad, window: tuple[int, int] = DEFAULT_WINDOW) -> AdmissibilityReport:
    """Check the admissibility vanishing pattern on a finite twist window.

    The window must cover [-6, 2]; the monad construction guarantees the
    pattern beyond any finite window, and the report states the window.
    """
    k_min, k_max = window
    if k_min > -6 or k_max < 2:
        raise ValueError(f"window [{k_min}, {k_max}] must cover [-6, 2]")
    table = cohomology_table(M, k_min, k_max)
    return AdmissibilityReport(M.ambient_n, k_min, k_max, admissibility_violations(table))


# ---------------------------------------------------------------------------
# stability


@dataclass
class StabilityReport:
    rank: int
    h0: int
    h0_dual: int | None
    semistable: str                 # "yes" | "inconclusive"
    stable: str                     # "yes" | "no" | "inconclusive"
    criterion: str
    notes: list[str] = dc_field(default_factory=list)

    def to_json_obj(self):
        return {
            "rank": self.rank,
            "h0": self.h0,
            "h0_dual": self.h0_dual,
            "semistable": self.semistable,
            "stable": self.stable,
            "criterion": self.criterion,
            "notes": self.notes,
        }


def stability_report(M: SpecialMonad, classification) -> StabilityReport:
    """Slope-stability verdicts from global-section vanishing.

    Rank 2 torsion-free and rank 3 reflexive sheaves with c1 = 0 are
    semistable; stability is equivalent to the vanishing of H^0(E) (and of
    H^0(E*) in rank 3).  Outside those hypotheses the verdicts stay
    inconclusive and the section counts are simply reported.
    """
    inv = invariants(M)
    h0 = twist_cohomology(M, 0)[0]
    notes: list[str] = []
    h0_dual = None
    level = classification.level if classification is not None else None

    applicable = (M.ambient_n == 3 and inv.c1 == 0)
    if not applicable:
        notes.append("criteria cover c1 = 0 sheaves on P3 only")
        return StabilityReport(inv.rank, h0, None, "inconclusive", "inconclusive",
                               "none", notes)

    if inv.rank == 2 and level in ("torsion_free", "reflexive", "locally_free"):
        stable = "yes" if h0 == 0 else "no"
        return StabilityReport(inv.rank, h0, None, "yes", stable,
                               "rank 2 torsion-free: semistable; stable iff h0 = 0",
                               notes)
    if inv.rank == 3 and level in ("reflexive", "locally_free"):
        criterion = "rank 3 reflexive: semistable; stable iff h0 = h0(dual) = 0"
        if h0 != 0:
            return StabilityReport(inv.rank, h0, None, "yes", "no", criterion, notes)
        if level == "locally_free":
            dual = dualize(M, classification)
            h0_dual = twist_cohomology(dual, 0)[0]
            stable = "yes" if h0_dual == 0 else "no"
            return StabilityReport(inv.rank, h0, h0_dual, "yes", stable, criterion, notes)
        notes.append("dual sections not computable for a non-locally-free sheaf")
        return StabilityReport(inv.rank, h0, None, "yes", "inconclusive", criterion, notes)

    notes.append("no criterion applies at this rank/regularity")
    return StabilityReport(inv.rank, h0, None, "inconclusive", "inconclusive",
                           "none", notes)


# ---------------------------------------------------------------------------
# dual vanishing


@dataclass
class DualVanishingReport:
    k_min: int
    k_max: int
    values: dict[int, int]          # k -> h^0(E*(k))
    violations: list[int]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json_obj(self):
        return {
            "window": [self.k_min, self.k_max],
            "h0_dual": {str(k): v for k, v in sorted(self.values.items())},
            "violations": self.violations,
            "passed": self.passed,
        }


def dual_vanishing_check(M: SpecialMonad, classification=None,
                         window: tuple[int, int] = (-5, -1)) -> DualVanishingReport:
    """Verify h^0(E*(k)) = 0 on the window via the dual monad.

    Raises NotLocallyFree when the sheaf cannot be dualized.
    """
    dual = dualize(M, classification)   # raises NotLocallyFreeError if refused
    k_min, k_max = window
    values = {k: twist_cohomology(dual, k)[0] for k in range(k_min, k_max + 1)}
    violations = [k for k, h in sorted(values.items()) if h != 0]
    return DualVanishingReport(k_min, k_max, values, violations)
