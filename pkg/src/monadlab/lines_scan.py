"""Randomized exploration of the lines in projective space.

Jumping loci over Q have measure zero, so the only way to see them at
desk scale is to sample lines over finite fields and count.  Everything
here is seeded: line i of a scan is drawn from hash(seed, i), so serial
and parallel runs agree and reports are byte-identical across machines.

"Certified" is reserved for exact positive witnesses over Q (a trivial
splitting computed in exact arithmetic); every negative or statistical
statement carries its (prime, samples, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from . import pointwise
from ._seeds import rng_for
from .errors import MonadLabError, NotLocallyFreeError
from .exactlin import QQ, PrimeField
from .monad import COEFF_BOUND, SpecialMonad, invariants, to_prime_field
from .pencil import Line, jump_size_rank2, line_status, restrict, splitting_type

MAX_SAMPLES = 10 ** 6
WITNESS_CAP = 32


def sample_line(seed: int, index: int, field, ambient_n: int = 3) -> Line:
    """Deterministic random line: entries from hash(seed, index), rank 2."""
    rng = rng_for("line", seed, index, field.name)
    nvars = ambient_n + 1
    while True:
        if field.kind == "Fp":
            rows = [[rng.randrange(field.p) for _ in range(nvars)] for _ in range(2)]
        else:
            rows = [[rng.randint(-COEFF_BOUND, COEFF_BOUND) for _ in range(nvars)]
                    for _ in range(2)]
        try:
            return Line.from_points(field, rows[0], rows[1])
        except MonadLabError:
            continue


def _require_locally_free(M: SpecialMonad, classification):
    cls = classification or M.classification or pointwise.classify(M)
    if cls.level != "locally_free":
        raise NotLocallyFreeError(
            f"line scans require a locally-free sheaf; classification is {cls.level}")
    return cls


def _check_samples(samples: int):
    if samples > MAX_SAMPLES:
        raise ValueError(f"sample count {samples} exceeds the cap {MAX_SAMPLES}")
    if samples < 1:
        raise ValueError("need at least one sample")


def _line_splitting(M_scan: SpecialMonad, line: Line, rank2_c1_0: bool):
    """(status, splitting parts or None) for one line."""
    pc = restrict(M_scan, line)
    if not line_status(pc).clean:
        return ("degenerate", None)
    if rank2_c1_0:
        a = jump_size_rank2(pc)
        return ("clean", (a, -a))
    return ("clean", splitting_type(pc).parts)


@dataclass
class LineOutcome:
    index: int
    line: Line
    status: str                      # "clean" | "degenerate"
    splitting: tuple[int, ...] | None

    @property
    def jumping(self) -> bool | None:
        if self.splitting is None:
            return None
        return any(a != 0 for a in self.splitting)

    def to_json_obj(self):
        return {
            "index": self.index,
            "line": self.line.to_json_obj(),
            "status": self.status,
            "splitting": None if self.splitting is None else list(self.splitting),
            "jumping": self.jumping,
        }


@dataclass
class ScanReport:
    monad_id: str
    field_name: str
    prime: int | None
    samples: int
    seed: int
    jumping: int
    degenerate: int
    spectrum: dict[tuple[int, ...], int]
    witnesses: list[Line]
    outcomes: list[LineOutcome] = dc_field(default_factory=list)

    @property
    def fraction(self) -> float:
        return self.jumping / self.samples

    def to_json_obj(self, include_lines: bool = False):
        obj = {
            "monad_id": self.monad_id,
            "field": self.field_name,
            "prime": self.prime,
            "samples": self.samples,
            "seed": self.seed,
            "jumping": self.jumping,
            "degenerate": self.degenerate,
            "fraction": f"{self.fraction:.6f}",
            "spectrum": {str(list(k)): c for k, c in sorted(self.spectrum.items())},
            "witnesses": [l.to_json_obj() for l in self.witnesses],
        }
        if include_lines:
            obj["lines"] = [o.to_json_obj() for o in self.outcomes]
        return obj


def jumping_scan(M: SpecialMonad, prime: int, samples: int, seed: int = 0,
                 classification=None, keep_lines: bool = False) -> ScanReport:
    """Splitting statistics over `samples` random lines mod a prime.

    A line is jumping when its splitting is non-trivial; lines where the
    left map degenerates are counted separately.  Requires a locally-free
    sheaf with c1 = 0.
    """
    _require_locally_free(M, classification)
    inv = invariants(M)
    if inv.c1 != 0:
        raise ValueError("jumping scans are defined for c1 = 0 sheaves")
    _check_samples(samples)
    field = PrimeField(prime)
    M_scan = to_prime_field(M, prime) if M.field == QQ else M
    if M_scan.field != field:
        raise MonadLabError(f"monad lives over {M.field.name}, cannot scan mod {prime}")
    fast = inv.rank == 2
    jumping = 0
    degenerate = 0
    spectrum: dict[tuple[int, ...], int] = {}
    witnesses: list[Line] = []
    outcomes: list[LineOutcome] = []
    for i in range(samples):
        line = sample_line(seed, i, field, M.ambient_n)
        status, parts = _line_splitting(M_scan, line, fast)
        if status == "degenerate":
            degenerate += 1
        else:
            spectrum[parts] = spectrum.get(parts, 0) + 1
            if any(a != 0 for a in parts):
                jumping += 1
                if len(witnesses) < WITNESS_CAP:
                    witnesses.append(line)
        if keep_lines:
            outcomes.append(LineOutcome(i, line, status, parts))
    return ScanReport(M.monad_id, field.name, prime, samples, seed,
                      jumping, degenerate, spectrum, witnesses, outcomes)


# ---------------------------------------------------------------------------
# trivial splitting type


@dataclass
class TrivialSplittingReport:
    monad_id: str
    field_name: str
    samples: int
    seed: int
    certified: bool
    witness: Line | None
    spectrum: dict[tuple[int, ...], int]
    degenerate: int
    note: str = ""

    def to_json_obj(self):
        return {
            "monad_id": self.monad_id,
            "field": self.field_name,
            "samples": self.samples,
            "seed": self.seed,
            "certified": self.certified,
            "witness": None if self.witness is None else self.witness.to_json_obj(),
            "spectrum": {str(list(k)): c for k, c in sorted(self.spectrum.items())},
            "degenerate": self.degenerate,
            "note": self.note,
        }


def trivial_splitting_test(M: SpecialMonad, samples: int = 10, seed: int = 0) -> TrivialSplittingReport:
    """Look for one line with trivial splitting, in the monad's own field.

    Over Q the first trivial witness is an exact certificate.  Rank 0
    (trivial sheaf summand counting) still works: the empty splitting is
    trivial.  Without a witness the observed spectrum is reported.
    """
    _check_samples(samples)
    spectrum: dict[tuple[int, ...], int] = {}
    degenerate = 0
    for i in range(samples):
        line = sample_line(seed, i, M.field, M.ambient_n)
        status, parts = _line_splitting(M, line, False)
        if status == "degenerate":
            degenerate += 1
            continue
        spectrum[parts] = spectrum.get(parts, 0) + 1
        if all(a == 0 for a in parts):
            exact = M.field == QQ
            return TrivialSplittingReport(
                M.monad_id, M.field.name, samples, seed, exact, line,
                spectrum, degenerate,
                "trivial splitting type certified" if exact
                else "trivial splitting observed (finite field; not a certificate)")
    return TrivialSplittingReport(
        M.monad_id, M.field.name, samples, seed, False, None, spectrum, degenerate,
        "no trivial line found; observed spectrum reported")


# ---------------------------------------------------------------------------
# codimension evidence


@dataclass
class CodimEvidenceReport:
    monad_id: str
    rows: list[dict]                 # per-prime: prime, samples, jumping, fraction
    exponent: float | None
    exponent_stderr: float | None
    tolerance: float
    verdict: str

    def to_json_obj(self):
        return {
            "monad_id": self.monad_id,
            "per_prime": [
                {**row, "fraction": f"{row['fraction']:.6f}"} for row in self.rows
            ],
            "exponent": None if self.exponent is None else f"{self.exponent:.4f}",
            "exponent_stderr": (None if self.exponent_stderr is None
                                else f"{self.exponent_stderr:.4f}"),
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }

    def to_csv(self) -> str:
        lines = ["prime,samples,jumping,fraction"]
        for row in self.rows:
            lines.append(f"{row['prime']},{row['samples']},{row['jumping']},"
                         f"{row['fraction']:.6f}")
        return "\n".join(lines) + "\n"


def codim_evidence(M: SpecialMonad, primes, samples: int, seed: int = 0,
                   classification=None, tolerance: float = 0.5) -> CodimEvidenceReport:
    """Fit the jumping fraction to c/p^e across primes; e near 1 supports
    a pure codimension-1 jumping locus.

    Requires rank 2, locally free, c1 = 0 (the codimension statement is a
    rank-2 theorem; for higher rank the scanner reports data only).  The
    exponent is the least-squares slope of -log(fraction) against log(p);
    its standard error propagates the binomial noise of the counts.
    """
    cls = _require_locally_free(M, classification)
    inv = invariants(M)
    if inv.rank != 2 or inv.c1 != 0:
        raise ValueError("codimension evidence is defined for rank 2, c1 = 0")
    primes = list(primes)
    if len(primes) < 2:
        raise ValueError("need at least two primes to estimate an exponent")
    rows = []
    for p in primes:
        rep = jumping_scan(M, p, samples, seed, cls)
        rows.append({"prime": p, "samples": rep.samples, "jumping": rep.jumping,
                     "fraction": rep.fraction})
    if all(r["jumping"] == 0 for r in rows):
        return CodimEvidenceReport(M.monad_id, rows, None, None, tolerance,
                                   "empty jumping locus (no jumping lines found)")
    if any(r["jumping"] == 0 for r in rows):
        return CodimEvidenceReport(M.monad_id, rows, None, None, tolerance,
                                   "inconclusive (zero count at some primes)")
    xs = [math.log(r["prime"]) for r in rows]
    ys = [math.log(r["fraction"]) for r in rows]
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    sxx = sum((x - xbar) ** 2 for x in xs)
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sxx
    exponent = -slope
    # binomial noise of each log-fraction, propagated through the slope
    var = 0.0
    for r, x in zip(rows, xs):
        f = r["fraction"]
        sigma2 = (1 - f) / (f * r["samples"])
        var += ((x - xbar) / sxx) ** 2 * sigma2
    stderr = math.sqrt(var)
    if abs(exponent - 1.0) <= tolerance:
        verdict = "consistent with codimension 1"
    else:
        verdict = "not consistent with codimension 1"
    return CodimEvidenceReport(M.monad_id, rows, exponent, stderr, tolerance, verdict)


# ---------------------------------------------------------------------------
# uniformity


@dataclass
class UniformityReport:
    monad_id: str
    field_name: str
    samples: int
    seed: int
    refuted: bool
    witness: Line | None
    spectrum: dict[tuple[int, ...], int]
    degenerate: int
    notes: list[str]

    def to_json_obj(self):
        return {
            "monad_id": self.monad_id,
            "field": self.field_name,
            "samples": self.samples,
            "seed": self.seed,
            "refuted": self.refuted,
            "witness": None if self.witness is None else self.witness.to_json_obj(),
            "spectrum": {str(list(k)): c for k, c in sorted(self.spectrum.items())},
            "degenerate": self.degenerate,
            "notes": self.notes,
        }


def uniformity_evidence(M: SpecialMonad, samples: int = 50, seed: int = 0,
                        extra_lines=(), classification=None) -> UniformityReport:
    """Sample splittings; equal splittings everywhere never certify
    uniformity, but a second splitting refutes it with a witness.

    For a rank 2, c1 = 0 sheaf whose sampled splittings are all trivial, a
    nonzero c2 is flagged: a uniform such sheaf would be trivial, so
    jumping lines must exist even if sampling missed them.
    """
    cls = _require_locally_free(M, classification)
    inv = invariants(M)
    _check_samples(samples)
    spectrum: dict[tuple[int, ...], int] = {}
    degenerate = 0
    first_parts = None
    witness = None
    lines = list(extra_lines) + [sample_line(seed, i, M.field, M.ambient_n)
                                 for i in range(samples)]
    for line in lines:
        status, parts = _line_splitting(M, line, False)
        if status == "degenerate":
            degenerate += 1
            continue
        spectrum[parts] = spectrum.get(parts, 0) + 1
        if first_parts is None:
            first_parts = parts
        elif parts != first_parts and witness is None:
            witness = line
    refuted = witness is not None
    notes = []
    if not refuted:
        notes.append("uniformity not refuted (sampling never certifies it)")
        if (inv.rank == 2 and inv.c1 == 0 and inv.c2 != 0
                and first_parts is not None and all(a == 0 for a in first_parts)):
            notes.append(
                "tension: a uniform rank 2 sheaf with trivial splitting would be "
                f"trivial, but c2 = {inv.c2} != 0; jumping lines exist and were missed")
    return UniformityReport(M.monad_id, M.field.name, samples, seed, refuted,
                            witness, spectrum, degenerate, notes)
