"""Star and convex transform order decisions for two-component systems.

Everything here analyses the gap function

    V(x; a, b) = survival_Y(x) - survival_X(a*x + b)

for systems X (rates ``lam``) and Y (rates ``theta``).  The star order
X <= Y holds iff for every a > 0 the gap with b = 0 changes sign at most
once and only in the order "-,+"; the convex order holds iff for all a, b
the gap changes sign at most twice and a double change is "+,-,+".  Any
certified pattern containing a "+" immediately followed by "-" therefore
refutes the star order, and three or more changes (or a "-,+,-") refute
the convex order.

For two-component systems whose hazard vectors are ordered by
majorization there is an analytic certificate for the star order, while
the convex order genuinely fails when both systems are strictly
heterogeneous: inside the parameter strip theta_1/lam_2 < a <
theta_1/lam_1 a shift b close to 0 produces the forbidden "+,-,+,-"
variation.  ``violation_search`` constructs such a witness; since
dV/da = x * density_X(a*x + b) > 0, the gap is increasing in a and the
search can walk a downward from the top of the strip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .expsum import ExpSum, ScanOptions, SignPattern, sign_pattern
from .systems import HazardVector, density, inverse_survival, majorizes, survival


class Status(Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"


class RegionLabel(Enum):
    FAV1 = "FAV1"  # a >= 1: gap is nonnegative outright
    FAV2 = "FAV2"  # theta1/lam1 <= a < 1: pattern "+" or "+,-,+"
    FAV3 = "FAV3"  # 0 < a <= theta1/lam2: pattern "+,-"
    VIOLATING_STRIP = "VIOLATING_STRIP"  # theta1/lam2 < a < theta1/lam1


# Analytic certificate tags.
CERT_MAJORIZATION = "majorization"  # majorized hazards imply the star order
CERT_HOMOGENEOUS = "homogeneous-base"  # equal-rate base system ages fastest
CERT_IDENTICAL = "identical-rates"  # same distribution, identity transform


class ViolationSearchError(RuntimeError):
    """Counterexample construction failed; carries the attempted (x0, b0) pairs."""

    def __init__(self, message: str, attempts: tuple[tuple[float, float], ...]):
        super().__init__(message)
        self.attempts = attempts


@dataclass(frozen=True)
class Witness:
    """Concrete (a, b) and the certified sign pattern that refutes an order."""

    a: float
    b: float
    pattern: SignPattern


@dataclass(frozen=True)
class OrderVerdict:
    status: Status
    certificate: str | None
    witness: Witness | None = None
    detail: str = ""
    evidence: tuple[tuple[float, SignPattern], ...] = ()

    def __post_init__(self):
        if self.status is Status.FAILS and self.witness is None:
            raise ValueError("a FAILS verdict must carry a witness")


@dataclass(frozen=True)
class CounterexampleReport:
    """A constructed convex-order violation for a majorized, strictly
    heterogeneous pair: the violating (a, b), the parameter strip it lies
    in, the certified "+,-,+,-" pattern, and the b0/x0 seeds used."""

    a: float
    b: float
    strip: tuple[float, float]
    pattern: SignPattern
    b0_used: float
    x0_seed: float

    def __post_init__(self):
        a_lo, a_hi = self.strip
        if not (a_lo < self.a < a_hi):
            raise ValueError("violating a must lie strictly inside the strip")
        if len(self.pattern.regions) < 4 or self.pattern.regions[0].sign != "+":
            raise ValueError("pattern must have >= 4 regions starting with '+'")

    def concavity_window(self) -> tuple[float, float]:
        """Argument interval of the transform certain to contain concavity.

        The second and fourth sign regions map to points where the
        composed transform lies below the comparison line and the third
        to a point above it, so the transform is non-convex between the
        images a*x + b of the second and fourth representatives.
        """
        r = self.pattern.regions
        return (self.a * r[1].x + self.b, self.a * r[3].x + self.b)


@dataclass(frozen=True)
class SignMap:
    """Grid of signs of the gap function over (x, a) at fixed b; sign 0
    marks cells whose magnitude is below the sign floor (uncertain)."""

    a_values: tuple[float, ...]
    x_values: tuple[float, ...]
    signs: tuple[tuple[int, ...], ...]  # signs[i][j] at (a_values[i], x_values[j])
    b: float


@dataclass(frozen=True)
class OrderOptions:
    scan: ScanOptions = field(default_factory=ScanOptions)
    a_points: int = 64
    b_factors: tuple[float, ...] = (0.0, 0.01, 0.05, 0.25, 1.0)
    allow_numerical_holds: bool = False
    search_max_halvings: int = 40
    search_a_steps: int = 12


def survival_gap(
    lam: HazardVector, theta: HazardVector, a: float, b: float = 0.0
) -> ExpSum:
    """V(x) = survival_theta(x) - survival_lam(a*x + b) as an ExpSum."""
    return survival(theta) - survival(lam).shift_scale(a, b)


def _star_violation(p: SignPattern) -> bool:
    # Any "+" immediately followed by "-" breaks "at most one change, in
    # the order '-,+'"; alternation makes this equivalent to the criterion.
    signs = p.signs()
    return any(s0 == "+" and s1 == "-" for s0, s1 in zip(signs, signs[1:]))


def _convex_violation(p: SignPattern) -> bool:
    # Allowed: <= 1 change in any order, or exactly two in the order "+,-,+".
    if p.n_changes >= 3:
        return True
    return p.n_changes == 2 and p.regions[0].sign == "-"


def _a_grid(lam: HazardVector, theta: HazardVector, n_points: int) -> list[float]:
    """Logarithmic a-grid covering all analytic breakpoints.

    The case boundaries sit at rate ratios (theta1/lam_n, theta1/lam_1, 1),
    so those are always included exactly.
    """
    t1 = theta.rates[0]
    lo = t1 / (2.0 * lam.rates[-1])
    grid = set(np.geomspace(min(lo, 1.0), max(2.0, 2.0 * lo), n_points).tolist())
    grid.update((t1 / lam.rates[-1], t1 / lam.rates[0], 1.0))
    return sorted(grid)


def star_check(
    lam: HazardVector, theta: HazardVector, opts: OrderOptions | None = None
) -> OrderVerdict:
    """Decide the star transform order between two 2-component systems.

    If lam majorizes-below theta the order holds with an analytic
    certificate; representative gap patterns for each regime of a are
    still scanned and attached as evidence.  Otherwise a logarithmic
    a-grid is scanned for a certified pattern with a "+,-" change, which
    refutes the order; with nothing found the verdict stays numerical
    (INCONCLUSIVE unless numerical holds are explicitly allowed).
    """
    opts = opts or OrderOptions()
    if lam.n != 2 or theta.n != 2:
        raise ValueError("star_check handles n=2 systems; use star_check_n otherwise")

    if majorizes(lam, theta):
        t1, l1 = theta.rates[0], lam.rates[0]
        probes = sorted({0.5 * t1 / l1, t1 / l1, 0.5 * (t1 / l1 + 1.0), 1.0})
        evidence = []
        for a in probes:
            p = sign_pattern(survival_gap(lam, theta, a), opts.scan)
            evidence.append((a, p))
            if p.certified and _star_violation(p):
                raise RuntimeError(
                    f"spot check at a={a} contradicts the analytic certificate; "
                    "this is a numerical defect"
                )
        return OrderVerdict(
            Status.HOLDS,
            CERT_MAJORIZATION,
            detail="majorized hazard vectors; gap patterns spot-checked",
            evidence=tuple(evidence),
        )

    scanned = []
    all_complete = True
    for a in _a_grid(lam, theta, opts.a_points):
        p = sign_pattern(survival_gap(lam, theta, a), opts.scan)
        scanned.append((a, p))
        all_complete = all_complete and p.complete
        if p.certified and _star_violation(p):
            return OrderVerdict(
                Status.FAILS,
                None,
                witness=Witness(a, 0.0, p),
                detail=f"gap pattern '{p.text()}' at a={a:.6g} has a '+,-' change",
            )
    if opts.allow_numerical_holds and all_complete:
        return OrderVerdict(
            Status.HOLDS,
            None,
            detail="no violating pattern on the a-grid (numerical, not analytic)",
            evidence=tuple(scanned[:8]),
        )
    return OrderVerdict(
        Status.INCONCLUSIVE,
        None,
        detail="no violating pattern on the a-grid; grids alone cannot certify HOLDS",
        evidence=tuple(scanned[:8]),
    )


def region_classify(
    a: float, b: float, lam: HazardVector, theta: HazardVector
) -> RegionLabel:
    """Classify the shift/scale parameters against the analytic case map.

    Requires a majorized, non-identical pair.  Boundaries belong to the
    favorable side; only the open strip between theta1/lam2 and
    theta1/lam1 can host convex-order violations.
    """
    if not (a > 0.0):
        raise ValueError("a must be positive")
    if b < 0.0:
        raise ValueError("b must be nonnegative")
    if not majorizes(lam, theta):
        raise ValueError("region classification assumes majorized hazard vectors")
    if lam.close_to(theta):
        raise ValueError("degenerate: identical rate vectors admit no classification")
    t1 = theta.rates[0]
    a_lo = t1 / lam.rates[-1]
    a_hi = t1 / lam.rates[0]
    if a >= 1.0:
        return RegionLabel.FAV1
    if a >= a_hi:
        return RegionLabel.FAV2
    if a <= a_lo:
        return RegionLabel.FAV3
    return RegionLabel.VIOLATING_STRIP


def dVda(lam: HazardVector, x: float, a: float, b: float = 0.0) -> float:
    """Partial derivative of the gap in a: x * density_lam(a*x + b).

    Strictly positive for x > 0, which makes the gap increasing in a and
    justifies the downward a-scan of the violation search.
    """
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if not (a > 0.0):
        raise ValueError("a must be positive")
    if b < 0.0:
        raise ValueError("b must be nonnegative")
    if x == 0.0:
        return 0.0
    return x * density(lam).eval(a * x + b)


def violation_search(
    lam: HazardVector, theta: HazardVector, opts: OrderOptions | None = None
) -> CounterexampleReport:
    """Construct a certified convex-order violation inside the strip.

    Strategy: (i) seed x0 = 1/(theta1+theta2) and derive the shift budget
    from the strict gap survival_X^{-1}(survival_Y(x0)) - a_hi*x0 > 0,
    halving b until the gap at the top of the strip certifies "+,-,+";
    (ii) with that b0 fixed, walk a downward from a_hi through
    geometrically growing offsets until the full "+,-,+,-" certifies (the
    gap is increasing in a, so the fourth region grows as a falls);
    (iii) re-verify every region witness by direct evaluation.
    """
    opts = opts or OrderOptions()
    if lam.n != 2 or theta.n != 2:
        raise ValueError("violation_search handles n=2 systems only")
    if not majorizes(lam, theta):
        raise ValueError("violation_search requires majorized hazard vectors")
    if lam.close_to(theta):
        raise ValueError("identical rate vectors: nothing to violate")
    l1, l2 = lam.rates
    t1, t2 = theta.rates
    a_lo, a_hi = t1 / l2, t1 / l1
    if not a_lo < a_hi:
        raise ValueError(
            f"degenerate strip ({a_lo:.6g}, {a_hi:.6g}): homogeneous base rates "
            "admit no convex-order violation"
        )

    surv_x = survival(lam)
    surv_y = survival(theta)
    x0 = 1.0 / (t1 + t2)
    slack = inverse_survival(surv_x, surv_y.eval(x0)) - a_hi * x0
    if slack <= 0.0:
        raise ViolationSearchError(
            "no positive shift budget at the seed point", ((x0, 0.0),)
        )

    attempts: list[tuple[float, float]] = []
    b0 = None
    top_pattern = None
    b = 0.5 * slack
    for _ in range(opts.search_max_halvings):
        attempts.append((x0, b))
        p = sign_pattern(surv_y - surv_x.shift_scale(a_hi, b), opts.scan)
        if p.certified and p.signs() == ("+", "-", "+"):
            b0, top_pattern = b, p
            break
        b *= 0.5
    if b0 is None:
        raise ViolationSearchError(
            f"no shift produced a certified '+,-,+' at a={a_hi:.6g}; "
            f"attempted (x0, b0) pairs: {attempts}",
            tuple(attempts),
        )

    width = a_hi - a_lo
    hit = None
    for k in range(opts.search_a_steps, 0, -1):  # a walks downward from a_hi
        a = a_hi - width / (2.0**k)
        p = sign_pattern(surv_y - surv_x.shift_scale(a, b0), opts.scan)
        if p.certified and p.signs() == ("+", "-", "+", "-"):
            hit = (a, p)
            break
    if hit is None:
        # Fallback sweep: the violating sub-window can be narrow.
        for a in np.linspace(a_hi - width / 2.0**opts.search_a_steps, a_lo, 64)[1:]:
            p = sign_pattern(surv_y - surv_x.shift_scale(float(a), b0), opts.scan)
            if p.certified and p.signs() == ("+", "-", "+", "-"):
                hit = (float(a), p)
                break
    if hit is None:
        raise ViolationSearchError(
            f"'+,-,+' certified at the strip top (b0={b0:.6g}) but no a in the strip "
            "certified '+,-,+,-'",
            tuple(attempts),
        )

    a, pattern = hit
    gap = surv_y - surv_x.shift_scale(a, b0)
    for region in pattern.regions:
        value = gap.eval(region.x)
        if (value > 0) != (region.sign == "+") or abs(value) <= opts.scan.sign_floor:
            raise ViolationSearchError(
                f"witness re-verification failed at x={region.x}", tuple(attempts)
            )
    return CounterexampleReport(
        a=a, b=b0, strip=(a_lo, a_hi), pattern=pattern, b0_used=b0, x0_seed=x0
    )


def convex_check(
    lam: HazardVector, theta: HazardVector, opts: OrderOptions | None = None
) -> OrderVerdict:
    """Decide the convex transform order between two 2-component systems.

    The star order is established first; when it holds only b >= 0 needs
    scanning.  A homogeneous base system yields an analytic HOLDS (the
    parameter strip is empty and every regime is favorable).  A majorized,
    strictly heterogeneous pair admits a constructed violation, so the
    verdict is FAILS with the search's witness.  Everything else stays
    numerical: a certified violating pattern on the (a, b) grid gives
    FAILS, otherwise INCONCLUSIVE (grids cannot certify HOLDS unless
    explicitly allowed).
    """
    opts = opts or OrderOptions()
    if lam.n != 2 or theta.n != 2:
        raise ValueError("convex_check supports n=2 systems only")

    if lam.close_to(theta):
        return OrderVerdict(
            Status.HOLDS,
            CERT_IDENTICAL,
            detail="identical rate vectors: the composed transform is the identity",
        )

    star = star_check(lam, theta, opts)

    if majorizes(lam, theta):
        a_lo = theta.rates[0] / lam.rates[-1]
        a_hi = theta.rates[0] / lam.rates[0]
        if not a_lo < a_hi:  # homogeneous base: strip is empty
            b_ref = 0.1 / (theta.rates[0] + theta.rates[-1])
            evidence = []
            for a in (1.25, 0.5 * (a_hi + 1.0), 0.5 * a_lo):
                p = sign_pattern(survival_gap(lam, theta, a, b_ref), opts.scan)
                evidence.append((a, p))
                if p.certified and _convex_violation(p):
                    raise RuntimeError(
                        f"favorable-case spot check at a={a} found a violation; "
                        "this is a numerical defect"
                    )
            return OrderVerdict(
                Status.HOLDS,
                CERT_HOMOGENEOUS,
                detail="empty violating strip: every shift/scale regime is favorable",
                evidence=tuple(evidence),
            )
        try:
            report = violation_search(lam, theta, opts)
        except ViolationSearchError as exc:
            return OrderVerdict(
                Status.INCONCLUSIVE,
                None,
                detail=(
                    f"suspect region: strip a in ({a_lo:.6g}, {a_hi:.6g}) "
                    f"unresolved ({exc})"
                ),
            )
        return OrderVerdict(
            Status.FAILS,
            None,
            witness=Witness(report.a, report.b, report.pattern),
            detail=(
                f"certified '{report.pattern.text()}' inside the strip "
                f"({a_lo:.6g}, {a_hi:.6g})"
            ),
        )

    # Not majorized: numerical (a, b) sweep with nonnegative shifts only.
    b_scale = 1.0 / (theta.rates[0] + theta.rates[-1])
    all_complete = True
    for a in _a_grid(lam, theta, opts.a_points):
        for factor in opts.b_factors:
            p = sign_pattern(survival_gap(lam, theta, a, factor * b_scale), opts.scan)
            all_complete = all_complete and p.complete
            if p.certified and _convex_violation(p):
                return OrderVerdict(
                    Status.FAILS,
                    None,
                    witness=Witness(a, factor * b_scale, p),
                    detail=f"pattern '{p.text()}' violates the two-change criterion",
                )
    if star.status is Status.HOLDS and opts.allow_numerical_holds and all_complete:
        return OrderVerdict(
            Status.HOLDS,
            None,
            detail="no violation on the (a, b) grid (numerical, not analytic)",
        )
    return OrderVerdict(
        Status.INCONCLUSIVE,
        None,
        detail="no violation found on the (a, b) grid; grids cannot certify HOLDS",
    )


def convex_check_at(
    lam: HazardVector,
    theta: HazardVector,
    a: float,
    b: float,
    opts: OrderOptions | None = None,
) -> OrderVerdict:
    """Single-point convex-order check at explicit shift/scale parameters.

    A certified violating pattern refutes the order (FAILS); an allowed
    pattern at one point proves nothing, so the verdict is INCONCLUSIVE
    with the pattern attached.
    """
    opts = opts or OrderOptions()
    if lam.n != 2 or theta.n != 2:
        raise ValueError("convex_check_at supports n=2 systems only")
    p = sign_pattern(survival_gap(lam, theta, a, b), opts.scan)
    if p.certified and _convex_violation(p):
        return OrderVerdict(
            Status.FAILS,
            None,
            witness=Witness(a, b, p),
            detail=f"certified pattern '{p.text()}' at (a={a:.6g}, b={b:.6g})",
        )
    return OrderVerdict(
        Status.INCONCLUSIVE,
        None,
        detail=f"pattern '{p.text()}' at (a={a:.6g}, b={b:.6g}) shows no violation",
        evidence=((a, p),),
    )


def sign_map(
    lam: HazardVector,
    theta: HazardVector,
    b: float,
    a_range: tuple[float, float],
    x_range: tuple[float, float],
    resolution: int | tuple[int, int],
    opts: OrderOptions | None = None,
) -> SignMap:
    """Matrix of gap signs over (x, a) at fixed b, for CSV emission.

    The rows a = theta1/lam2 and a = theta1/lam1 (the strip boundaries)
    are always included exactly.  Cells whose |gap| is below the sign
    floor or the rounding bound carry sign 0 (uncertain).
    """
    opts = opts or OrderOptions()
    na, nx = (resolution, resolution) if isinstance(resolution, int) else resolution
    if na < 2 or nx < 2:
        raise ValueError("resolution must be at least 2x2")
    a_min, a_max = a_range
    if not (0.0 < a_min < a_max):
        raise ValueError("a_range must satisfy 0 < a_min < a_max")
    x_min, x_max = x_range
    if not (0.0 <= x_min < x_max):
        raise ValueError("x_range must satisfy 0 <= x_min < x_max")

    t1 = theta.rates[0]
    a_vals = sorted(
        set(np.linspace(a_min, a_max, na).tolist())
        | {t1 / lam.rates[-1], t1 / lam.rates[0]}
    )
    x_vals = np.linspace(x_min, x_max, nx)
    floor = opts.scan.sign_floor
    rows = []
    for a in a_vals:
        gap = survival_gap(lam, theta, a, b)
        if gap.is_zero:
            rows.append((0,) * nx)
            continue
        vals = gap.eval_many(x_vals)
        noise = np.maximum(floor, 16.0 * 2.220446049250313e-16 * gap.abs_scale(x_vals))
        signs = np.where(np.abs(vals) <= noise, 0, np.sign(vals)).astype(int)
        rows.append(tuple(int(s) for s in signs))
    return SignMap(
        a_values=tuple(a_vals),
        x_values=tuple(float(x) for x in x_vals),
        signs=tuple(rows),
        b=b,
    )


def star_check_n(
    lam: HazardVector, theta: HazardVector, opts: OrderOptions | None = None
) -> OrderVerdict:
    """Exploratory star-order scan for systems with any equal n >= 2.

    No analytic certificate exists beyond n=2, so this never returns an
    analytic HOLDS: either a certified violating pattern is found (FAILS)
    or the scan is reported as consistent with the conjectured ordering
    (INCONCLUSIVE).  A failed majorization precondition is noted but the
    scan still runs.
    """
    opts = opts or OrderOptions()
    if lam.n != theta.n:
        raise ValueError(f"length mismatch: {lam.n} vs {theta.n}")
    if lam.n > 20:
        raise ValueError("n capped at 20 (inclusion-exclusion term count)")
    notes = []
    if not majorizes(lam, theta):
        notes.append("majorization precondition fails; scanning anyway")
    for a in _a_grid(lam, theta, opts.a_points):
        p = sign_pattern(survival_gap(lam, theta, a), opts.scan)
        if p.certified and _star_violation(p):
            return OrderVerdict(
                Status.FAILS,
                None,
                witness=Witness(a, 0.0, p),
                detail="; ".join(
                    [f"violating pattern '{p.text()}' at a={a:.6g}"] + notes
                ),
            )
    notes.insert(0, "no violating pattern found: consistent with the conjectured ordering")
    return OrderVerdict(Status.INCONCLUSIVE, None, detail="; ".join(notes))
