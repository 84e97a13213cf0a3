"""Right-porosity quantities and three-valued porosity verdicts at 0.

Everything here is a finite-depth decision procedure.  Quantifiers over
infinite objects ("for every K", "for sufficiently large n", limsup) become
tail-window trend tests with verdicts in {holds, fails, inconclusive};
silent booleans would lie about asymptotics, so the third value is load
bearing and surfaces all the way to the CLI exit code.

The two decision routes for sequence-porosity are deliberately independent:

* the k-grid route scans a finite set of multipliers k > 1 and asks whether
  the first point of E above k*tau_n recedes without bound (score
  ``K*(t, k) = next_above(E, k*t) / t``), uniformly in n;
* the gap-witness route picks, for every n, the best gap whose left endpoint
  stays within a bounded factor of tau_n and asks whether those gap ratios
  blow up.

They must never disagree holds-against-fails; the test suite enforces it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .logvalue import DEFAULT_PREC, LogValue, Magnitude, ZERO, rational_str
from .scaleset import (
    DepthLimitedError,
    Gap,
    OutsideWindowError,
    ScaleSet,
    gaps,
    linear_difference,
    next_above,
    next_at_or_below,
    next_strictly_above,
)
from . import windows

__all__ = [
    "PosSeq",
    "PorosityParams",
    "PorosityVerdict",
    "WitnessGaps",
    "RightPorosity",
    "BEYOND_WINDOW",
    "HOLDS",
    "FAILS",
    "INCONCLUSIVE",
    "lambda0h",
    "right_porosity",
    "is_strongly_porous",
    "almost_decreasing_tail",
    "weak_equiv",
    "kK_empty",
    "K_star",
    "k_grid",
    "tau_strong_porosity",
    "gap_witness_route",
    "porous_subsequence_search",
    "w_porosity",
    "completely_strong_porosity",
    "default_pool",
    "enumeration_sequence",
]

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"


class _BeyondWindow:
    """Marker: the probed gap extends past the truncation window."""

    __slots__ = ()

    def __repr__(self):
        return "beyond-window"


BEYOND_WINDOW = _BeyondWindow()

#: Score entries ordered with BEYOND_WINDOW as +infinity.
Score = Union[LogValue, _BeyondWindow]


def _score_key(score: Score):
    if isinstance(score, _BeyondWindow):
        return (1, None)
    return (0, score)


def _score_keys(scores: Sequence[Score]):
    return [_score_key(s) for s in scores]


@dataclass(frozen=True)
class PosSeq:
    """A truncated sequence of strictly positive reals, indexed from 1."""

    terms: tuple[LogValue, ...]
    source_indices: Optional[tuple[int, ...]] = None
    label: str = ""

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty sequence")
        if not all(isinstance(t, LogValue) for t in self.terms):
            raise ValueError("sequence terms must be positive LogValues")
        if self.source_indices is not None and len(self.source_indices) != len(self.terms):
            raise ValueError("source_indices must align with terms")

    def __len__(self):
        return len(self.terms)

    def restrict(self, positions: Sequence[int], label: str = "") -> "PosSeq":
        """Subsequence at 0-based positions (keeping 1-based source tracking)."""
        src = self.source_indices or tuple(range(1, len(self.terms) + 1))
        return PosSeq(
            terms=tuple(self.terms[i] for i in positions),
            source_indices=tuple(src[i] for i in positions),
            label=label or f"{self.label}|restricted",
        )


@dataclass(frozen=True)
class WitnessGaps:
    """A machine-checkable porosity certificate.

    ``gaps`` align index-by-index with the sequence the verdict is about;
    ``constants`` is the squeeze pair (c1, c2) with c1*a_n < tau_n < c2*a_n
    on the tail; ``k`` is the multiplier when the k-grid route produced it.
    """

    gaps: tuple[Gap, ...]
    constants: Optional[tuple[Fraction, Fraction]] = None
    k: Optional[Fraction] = None


@dataclass
class PorosityVerdict:
    status: str
    witness: Optional[WitnessGaps] = None
    counterexample: Optional[tuple[int, ...]] = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (HOLDS, FAILS, INCONCLUSIVE):
            raise ValueError(f"unknown verdict status {self.status!r}")
        if self.status == HOLDS and self.witness is None:
            raise ValueError("holds requires a witness")
        if self.status == FAILS and self.counterexample is None:
            raise ValueError("fails requires a counterexample")


@dataclass(frozen=True)
class PorosityParams:
    """Tunables for the finite-depth decision procedures.

    ``r_min_log2`` is the divergence threshold (scores above 2**r_min_log2
    count as unbounded-at-depth).  ``m_fail`` is the number of recurring
    bounded-score tail hits that certify a refutation, ``m_hold``/``m_sub``
    the minimum run lengths for confirmations.  ``k_cap_log2`` caps the
    uniform k-grid; ``band_log2`` caps per-point multiplier searches (the
    uniform squeeze bound available to subsequence certificates);
    ``bad_bound_log2`` is the bad-set uniform score bound.
    """

    prec: int = DEFAULT_PREC
    window_fraction: Fraction = Fraction(1, 2)
    r_min_log2: int = 16
    m_fail: int = 3
    m_sub: int = 8
    m_hold: int = 4
    bad_bound_log2: int = 8
    k_cap_log2: int = 8
    band_log2: int = 64
    eps: Fraction = Fraction(1, 1024)
    grid_term_limit: int = 48
    chain_limit: int = 40

    @property
    def r_min(self) -> LogValue:
        return LogValue.from_log2(self.r_min_log2)

    @property
    def bad_bound(self) -> LogValue:
        return LogValue.from_log2(self.bad_bound_log2)

    def window(self, n: int) -> int:
        f = self.window_fraction
        return max(1, int(-(-n * f.numerator // f.denominator)))


# ---------------------------------------------------------------------------
# lambda(E, 0, h) and the right-porosity ratio
# ---------------------------------------------------------------------------


def _empty_interval_candidates(e: ScaleSet, h: LogValue, prec: int):
    """All resolved maximal empty subintervals of (0, h): (length, lo, hi).

    lo is None for the interval anchored at 0.  Raises DepthLimitedError when
    the unresolved region below the truncation floor could dominate.
    """
    candidates: list[tuple[LogValue, Optional[LogValue], LogValue]] = []
    for gap in gaps(e).gaps:
        if not gap.a < h:
            continue
        hi = gap.b if gap.b < h else h
        if gap.a < hi:
            candidates.append((linear_difference(hi, gap.a, prec), gap.a, hi))
    floor = e.min_point if e.min_point < h else h
    if e.resolved_below_min:
        candidates.append((floor, None, floor))
    else:
        best = max((c[0] for c in candidates), default=None)
        if best is None or floor > best:
            raise DepthLimitedError(
                "inconclusive at this depth: the unresolved region below the "
                "truncation floor could contain the largest empty subinterval"
            )
    return candidates


def lambda0h(e: ScaleSet, h: LogValue, prec: int = DEFAULT_PREC) -> Magnitude:
    """Length of the largest open subinterval of (0, h) free of points of E.

    Returns ZERO when no positive-length empty interval exists.  Raises
    OutsideWindowError for h above the window top and DepthLimitedError when
    the answer could hide below the truncation floor.
    """
    if h > e.window_top:
        raise OutsideWindowError("h is outside the truncation window")
    candidates = _empty_interval_candidates(e, h, prec)
    if not candidates:
        return ZERO
    return max(c[0] for c in candidates)


def _best_interval(e: ScaleSet, h: LogValue, prec: int):
    candidates = _empty_interval_candidates(e, h, prec)
    if not candidates:
        return None
    return max(candidates, key=lambda c: c[0])


@dataclass(frozen=True)
class RightPorosity:
    """Window estimate of limsup_{h->0+} lambda(E,0,h)/h."""

    sup: Fraction
    trend: str
    samples: tuple[tuple[LogValue, Fraction], ...]  # (h, lambda/h), h decreasing
    skipped: int


def right_porosity(
    e: ScaleSet,
    window_fraction: Fraction = Fraction(1, 2),
    prec: int = DEFAULT_PREC,
) -> RightPorosity:
    """Evaluate lambda/h at every tail-window scale of E.

    Scales are the points of E (gap right-endpoints included among them) in
    the tail window, largest first.  Scales whose largest empty subinterval
    is unresolved at this depth are skipped; if fewer than half the window
    resolves, the whole estimate is refused (DepthLimitedError).
    """
    if e.depth < 8 and not e.resolved_below_min:
        raise DepthLimitedError("window too short: depth below 8")
    w = max(1, -(-e.depth * window_fraction.numerator // window_fraction.denominator))
    hs = e.tail_points(w)
    samples: list[tuple[LogValue, Fraction]] = []
    skipped = 0
    for h in hs:
        try:
            lam = lambda0h(e, h, prec)
        except DepthLimitedError:
            skipped += 1
            continue
        if lam is ZERO or not isinstance(lam, LogValue):
            ratio = Fraction(0)
        else:
            ratio = lam.div(h).approx_fraction(prec)
            if ratio > 1:
                ratio = Fraction(1)
        samples.append((h, ratio))
    if len(samples) < max(2, len(hs) // 2):
        raise DepthLimitedError(
            f"only {len(samples)} of {len(hs)} tail scales resolved at this depth"
        )
    ratios = [r for _, r in samples]
    return RightPorosity(
        sup=max(ratios),
        trend=windows.sup_trend(ratios),
        samples=tuple(samples),
        skipped=skipped,
    )


def is_strongly_porous(
    e: ScaleSet,
    tol: Fraction = Fraction(1, 1 << 20),
    window_fraction: Fraction = Fraction(1, 2),
    prec: int = DEFAULT_PREC,
) -> PorosityVerdict:
    """Is the window estimate of the porosity ratio pinned at 1?

    holds: supremum >= 1 - tol with a non-decreasing trend.  fails: supremum
    bounded away from 1 with a non-increasing trend.  Everything else,
    including too-shallow sets, is inconclusive.
    """
    try:
        rp = right_porosity(e, window_fraction, prec)
    except DepthLimitedError as exc:
        return PorosityVerdict(INCONCLUSIVE, diagnostics={"reason": str(exc)})
    diag = {
        "sup": rp.sup,
        "trend": rp.trend,
        "skipped": rp.skipped,
        "samples": [(h.log2_fraction(prec), r) for h, r in rp.samples],
    }
    if rp.sup >= 1 - tol and rp.trend != windows.DECREASING:
        best_h = max(rp.samples, key=lambda s: s[1])[0]
        best = _best_interval(e, best_h, prec)
        lo = best[1] if best[1] is not None else None
        gap_list = (Gap(lo, best[2]),) if lo is not None else ()
        return PorosityVerdict(
            HOLDS,
            witness=WitnessGaps(gaps=gap_list, constants=(1 - tol, Fraction(1))),
            diagnostics=diag,
        )
    if rp.sup < 1 - tol and rp.trend != windows.INCREASING:
        return PorosityVerdict(
            FAILS,
            counterexample=tuple(range(len(rp.samples))),
            diagnostics=diag,
        )
    return PorosityVerdict(INCONCLUSIVE, diagnostics=diag)


# ---------------------------------------------------------------------------
# sequences in E and weak equivalence
# ---------------------------------------------------------------------------


def almost_decreasing_tail(s: PosSeq) -> Optional[int]:
    """Smallest 1-based N with s non-increasing from N on; None if the last
    two terms already violate it."""
    terms = s.terms
    last_violation = None
    for i in range(len(terms) - 1):
        if terms[i] < terms[i + 1]:
            last_violation = i
    if last_violation is None:
        return 1
    if last_violation == len(terms) - 2:
        return None
    return last_violation + 2


def weak_equiv(
    a: PosSeq,
    g: PosSeq,
    window: Optional[int] = None,
    eps: Fraction = Fraction(1, 1024),
    prec: int = DEFAULT_PREC,
) -> PorosityVerdict:
    """Squeeze test: are there constants with c1*a_n < g_n < c2*a_n?

    holds with the tightest cushioned pair over the tail window; fails when
    the ratio drifts strictly monotonically across the window halves (the
    finite-depth unbounded-trend marker).
    """
    if len(a) != len(g):
        raise ValueError("sequences must have equal lengths")
    ratios = [gn.div(an) for an, gn in zip(a.terms, g.terms)]
    w = window or max(2, len(ratios) // 2)
    tail = ratios[len(ratios) - min(w, len(ratios)) :]
    if windows.strictly_separated_up(tail) or windows.strictly_separated_down(tail):
        worst = max(range(len(ratios)), key=lambda i: abs(ratios[i].log2_fraction(64)))
        return PorosityVerdict(
            FAILS,
            counterexample=(worst + 1,),
            diagnostics={"reason": "ratio drifts monotonically across window halves"},
        )
    rmin, rmax = min(tail), max(tail)
    try:
        c1 = rmin.approx_fraction(prec) * (1 - eps)
        c2 = rmax.approx_fraction(prec) * (1 + eps)
    except OverflowError:
        return PorosityVerdict(
            INCONCLUSIVE,
            diagnostics={"reason": "ratio magnitude beyond linear representation"},
        )
    if c1 <= 0:
        return PorosityVerdict(
            INCONCLUSIVE,
            diagnostics={"reason": "ratio underflows the linear representation"},
        )
    # The pair must actually squeeze the tail, strictly.
    for an, gn in zip(a.terms[-len(tail) :], g.terms[-len(tail) :]):
        if not (an.times_rational(c1) < gn < an.times_rational(c2)):
            return PorosityVerdict(
                INCONCLUSIVE,
                diagnostics={"reason": "cushioned constants fail to squeeze strictly"},
            )
    return PorosityVerdict(
        HOLDS,
        witness=WitnessGaps(gaps=(), constants=(c1, c2)),
        diagnostics={"ratio_min_log2": rmin.log2_fraction(64), "ratio_max_log2": rmax.log2_fraction(64)},
    )


# ---------------------------------------------------------------------------
# K* scores
# ---------------------------------------------------------------------------


def kK_empty(
    e: ScaleSet,
    tau: PosSeq,
    k: Fraction,
    K: Fraction,
    n1: int = 1,
) -> bool:
    """Is (k*tau_n, K*tau_n) free of points of E for every n >= n1?

    Decided through next_above: the first point of E at or above k*tau_n must
    not fall below K*tau_n.
    """
    k, K = Fraction(k), Fraction(K)
    if not 1 < k < K:
        raise ValueError("need 1 < k < K")
    if not 1 <= n1 <= len(tau):
        raise ValueError("n1 out of range")
    for t in tau.terms[n1 - 1 :]:
        s = t.times_rational(k)
        if s > e.window_top:
            raise OutsideWindowError("k*tau_n is outside the truncation window")
        nxt = next_above(e, s)
        if nxt is None:
            continue
        if nxt < t.times_rational(K):
            return False
    return True


def K_star(e: ScaleSet, t: LogValue, k: Fraction) -> Score:
    """next_above(E, k*t) / t — how far the set recedes above k*t.

    Returns BEYOND_WINDOW when no point of E lies at or above k*t inside the
    window.  A point of E sitting exactly at k*t caps the score at k.
    """
    k = Fraction(k)
    if k <= 1:
        raise ValueError("k must exceed 1")
    if t not in e:
        raise ValueError("t must be a point of the set")
    s = t.times_rational(k)
    if s > e.window_top:
        return BEYOND_WINDOW
    nxt = next_above(e, s)
    if nxt is None:
        return BEYOND_WINDOW
    return nxt.div(t)


def _ratio_fraction(ratio: LogValue, prec: int = 64) -> Optional[Fraction]:
    rf = ratio.as_fraction()
    if rf is None:
        try:
            rf = ratio.approx_fraction(prec)
        except OverflowError:
            return None
    return rf if rf > 1 else None


def _neighbor_ratios(e: ScaleSet, t: LogValue, cap: Fraction, limit: int) -> list[Fraction]:
    """Ratios u/t for the chain of E-points above t within factor cap."""
    out: list[Fraction] = []
    u = next_strictly_above(e, t)
    steps = 0
    while u is not None and steps < limit:
        rf = _ratio_fraction(u.div(t))
        if rf is None or rf > cap:
            break
        out.append(rf)
        u = next_strictly_above(e, u)
        steps += 1
    return out


def k_grid(
    e: ScaleSet,
    terms: Sequence[LogValue],
    params: PorosityParams,
    cap_log2: Optional[int] = None,
) -> list[Fraction]:
    """The finite multiplier grid: powers of two up to the cap plus the
    neighbor-point ratios observed near the tail terms (and their +1 / x2
    bumps, which bracket any squeeze constant the data can support)."""
    cap_log2 = cap_log2 if cap_log2 is not None else params.k_cap_log2
    cap = Fraction(1 << cap_log2)
    ks: set[Fraction] = {Fraction(1 << j) for j in range(1, cap_log2 + 1)}
    for t in terms[-params.grid_term_limit :]:
        for rf in _neighbor_ratios(e, t, cap, params.chain_limit):
            ks.add(rf)
            if rf + 1 <= cap:
                ks.add(rf + 1)
            if 2 * rf <= cap:
                ks.add(2 * rf)
    return sorted(k for k in ks if k > 1)


def _score_row(e: ScaleSet, terms: Sequence[LogValue], k: Fraction) -> list[tuple[int, Score]]:
    """(index, score) per term; terms whose probe leaves the window upward
    are omitted (nothing can be said about them)."""
    row = []
    for i, t in enumerate(terms):
        if t.times_rational(k) > e.window_top:
            continue
        row.append((i, K_star(e, t, k)))
    return row


def _divergent(score: Score, r_min: LogValue) -> bool:
    return isinstance(score, _BeyondWindow) or score > r_min


def _bounded(score: Score, r_min: LogValue) -> bool:
    return not isinstance(score, _BeyondWindow) and score <= r_min


def _holds_for_scores(
    entries: Sequence[tuple[int, Score]],
    tail_start: int,
    total: int,
    params: PorosityParams,
) -> Optional[int]:
    """If the scores diverge uniformly from some cut on, return that cut
    (the 0-based index N1); otherwise None.

    Divergence means: every score from N1 on exceeds the threshold, the run
    is long enough to mean something, and the run still grows across its
    halves (a huge but constant score is not divergence).
    """
    tail = [(i, s) for i, s in entries if i >= tail_start]
    if not tail:
        return None
    r_min = params.r_min
    bounded_idx = [i for i, s in tail if not _divergent(s, r_min)]
    n1 = (max(bounded_idx) + 1) if bounded_idx else tail_start
    run = [(i, s) for i, s in tail if i >= n1]
    need = max(params.m_hold, -(-(total - tail_start) // 4))
    if len(run) < need:
        return None
    keys = _score_keys([s for _, s in run])
    if not windows.strictly_separated_up(keys):
        return None
    return n1


def _bounded_for_scores(
    entries: Sequence[tuple[int, Score]],
    tail_start: int,
    total: int,
    params: PorosityParams,
) -> Optional[list[int]]:
    """If bounded scores recur through the tail, return their indices.

    Requires at least m_fail bounded hits, at least one of them in the
    trailing half of the index range (so the boundedness is not an artifact
    of the head), and a non-increasing hit-score trend.
    """
    r_min = params.r_min
    hits = [(i, s) for i, s in entries if i >= tail_start and _bounded(s, r_min)]
    if len(hits) < params.m_fail:
        return None
    half = tail_start + (total - tail_start) // 2
    if not any(i >= half for i, _ in hits):
        return None
    keys = _score_keys([s for _, s in hits])
    first, second = windows.halves(keys)
    if first and second and max(second) > max(first):
        return None
    return [i for i, _ in hits]


def _validate_tail_sequence(e: ScaleSet, tau: PosSeq) -> int:
    """Check tau is usable as an almost-decreasing null sequence in E;
    return the 0-based index where the non-increasing tail starts."""
    if len(tau) < 4:
        raise ValueError("sequence too short: at least 4 terms required")
    n = almost_decreasing_tail(tau)
    if n is None:
        raise ValueError("sequence is not almost decreasing at this depth")
    for i, t in enumerate(tau.terms):
        if t not in e:
            raise ValueError(f"term {i + 1} is not a point of the set")
    if not tau.terms[-1] < tau.terms[n - 1]:
        raise ValueError("sequence shows no decay toward 0 in its tail")
    return n - 1


def _lemma_witness(
    e: ScaleSet,
    tau: PosSeq,
    k: Fraction,
    n1: int,
    params: PorosityParams,
) -> tuple[WitnessGaps, dict]:
    """Build and validate the gap-sequence certificate behind a k-grid holds:
    a_n = last point of E at or below k*tau_n, b_n = first point above.

    By construction tau_n <= a_n < k*tau_n, so the squeeze constants are
    automatic; validation records the divergence of b_n/a_n.
    """
    gap_list: list[Gap] = []
    ratios: list[Score] = []
    for t in tau.terms[n1:]:
        s = t.times_rational(k)
        a = next_at_or_below(e, s)
        assert a is not None and a >= t
        b = next_above(e, s) if s <= e.window_top else None
        if b is None or b == a:
            b = next_strictly_above(e, a)
        if b is None:
            gap_list.append(Gap(a, e.window_top.times2exp(1)))
            ratios.append(BEYOND_WINDOW)
        else:
            gap_list.append(Gap(a, b))
            ratios.append(b.div(a))
    eps = params.eps
    c1 = Fraction(1, 1) / k * (1 - eps)
    c2 = 1 + eps
    squeeze_ok = all(
        a.a.times_rational(c1) < t < a.a.times_rational(c2)
        for t, a in zip(tau.terms[n1:], gap_list)
    )
    keys = _score_keys(ratios)
    diag = {
        "witness_k": k,
        "witness_squeeze_ok": squeeze_ok,
        "witness_ratio_growth": windows.strictly_separated_up(keys)
        or windows.nondecreasing_across_halves(keys),
        "witness_left_endpoints_decrease": all(
            g2.a < g1.a or g2.a == g1.a for g1, g2 in zip(gap_list, gap_list[1:])
        ),
    }
    return WitnessGaps(gaps=tuple(gap_list), constants=(c1, c2), k=k), diag


def _scores_table(
    terms: Sequence[LogValue],
    best_k: dict[int, Fraction],
    best_score: dict[int, Score],
    prec: int,
) -> list[dict]:
    rows = []
    for i, t in enumerate(terms):
        k = best_k.get(i)
        s = best_score.get(i)
        rows.append(
            {
                "n": i + 1,
                "log2_tau_n": rational_str(t.log2_fraction(prec)),
                "best_k": rational_str(k) if k is not None else "",
                "log2_K_star": (
                    "beyond-window"
                    if isinstance(s, _BeyondWindow)
                    else rational_str(s.log2_fraction(prec))
                    if s is not None
                    else ""
                ),
            }
        )
    return rows


def tau_strong_porosity(
    e: ScaleSet,
    tau: PosSeq,
    params: PorosityParams = PorosityParams(),
) -> PorosityVerdict:
    """Decide sequence-porosity of E along tau via the k-grid route.

    holds: some grid multiplier k makes the score K*(tau_n, k) diverge for
    all n past a cut; the verdict then carries the constructed gap-sequence
    certificate (left endpoints squeezed against tau, gap ratios divergent).
    fails: every grid multiplier is defeated by recurring bounded scores —
    the recorded counterexample indices are the forced-gap positions.
    """
    n0 = _validate_tail_sequence(e, tau)
    grid = k_grid(e, tau.terms, params)
    total = len(tau.terms)
    rows = {k: _score_row(e, tau.terms, k) for k in grid}

    best_k: dict[int, Fraction] = {}
    best_score: dict[int, Score] = {}
    for k in grid:
        for i, s in rows[k]:
            if i not in best_score or _score_key(s) > _score_key(best_score[i]):
                best_score[i], best_k[i] = s, k

    for k in grid:
        n1 = _holds_for_scores(rows[k], n0, total, params)
        if n1 is not None:
            witness, diag = _lemma_witness(e, tau, k, n1, params)
            diag.update(
                {
                    "route": "k-grid",
                    "k": k,
                    "n1": n1 + 1,
                    "grid_size": len(grid),
                    "scores": _scores_table(tau.terms, best_k, best_score, params.prec),
                }
            )
            if not (diag["witness_squeeze_ok"] and diag["witness_ratio_growth"]):
                diag["reason"] = "grid divergence found but certificate failed validation"
                return PorosityVerdict(INCONCLUSIVE, diagnostics=diag)
            return PorosityVerdict(HOLDS, witness=witness, diagnostics=diag)

    refutations: dict[Fraction, list[int]] = {}
    for k in grid:
        hits = _bounded_for_scores(rows[k], n0, total, params)
        if hits is None:
            refutations = {}
            break
        refutations[k] = hits
    if refutations:
        rep_k = max(refutations, key=lambda k: (len(refutations[k]), -k))
        counter = tuple(i + 1 for i in refutations[rep_k])
        diag = {
            "route": "k-grid",
            "representative_k": rep_k,
            "bounded_hits_per_k": {rational_str(k): len(v) for k, v in refutations.items()},
            "scores": _scores_table(tau.terms, best_k, best_score, params.prec),
        }
        return PorosityVerdict(FAILS, counterexample=counter, diagnostics=diag)

    return PorosityVerdict(
        INCONCLUSIVE,
        diagnostics={
            "route": "k-grid",
            "reason": "no grid multiplier certifies divergence or recurring boundedness",
            "scores": _scores_table(tau.terms, best_k, best_score, params.prec),
        },
    )


def gap_witness_route(
    e: ScaleSet,
    tau: PosSeq,
    params: PorosityParams = PorosityParams(),
) -> PorosityVerdict:
    """The independent certificate route: per term, the best gap whose left
    endpoint stays within the squeeze cap of tau_n; porosity iff those gap
    ratios blow up along the tail."""
    n0 = _validate_tail_sequence(e, tau)
    cap = Fraction(1 << params.k_cap_log2)
    total = len(tau.terms)
    entries: list[tuple[int, Score]] = []
    chosen: dict[int, Gap] = {}
    for i, t in enumerate(tau.terms):
        best: Optional[Score] = None
        best_gap: Optional[Gap] = None
        anchors = [t] + [
            t.times_rational(r) for r in _neighbor_ratios(e, t, cap, params.chain_limit)
        ]
        for a in anchors:
            if a not in e:
                continue
            b = next_strictly_above(e, a)
            score: Score = BEYOND_WINDOW if b is None else b.div(a)
            if best is None or _score_key(score) > _score_key(best):
                best = score
                best_gap = Gap(a, b) if b is not None else Gap(a, e.window_top.times2exp(1))
        if best is not None:
            entries.append((i, best))
            if best_gap is not None:
                chosen[i] = best_gap
    n1 = _holds_for_scores(entries, n0, total, params)
    if n1 is not None:
        gap_list = tuple(chosen[i] for i, _ in entries if i >= n1 and i in chosen)
        c2 = cap * (1 + params.eps)
        c1 = Fraction(1) / c2
        return PorosityVerdict(
            HOLDS,
            witness=WitnessGaps(gaps=gap_list, constants=(c1, c2)),
            diagnostics={"route": "gap-witness", "n1": n1 + 1},
        )
    hits = _bounded_for_scores(entries, n0, total, params)
    if hits is not None:
        return PorosityVerdict(
            FAILS,
            counterexample=tuple(i + 1 for i in hits),
            diagnostics={"route": "gap-witness"},
        )
    return PorosityVerdict(
        INCONCLUSIVE,
        diagnostics={"route": "gap-witness", "reason": "best-gap scores neither diverge nor recur bounded"},
    )


# ---------------------------------------------------------------------------
# subsequence search, w-porosity, complete porosity
# ---------------------------------------------------------------------------


def _ratio_score(score: Score, k: Fraction) -> Score:
    if isinstance(score, _BeyondWindow):
        return score
    return score.times_rational(Fraction(1) / k)


def porous_subsequence_search(
    e: ScaleSet,
    tau: PosSeq,
    params: PorosityParams = PorosityParams(),
) -> PorosityVerdict:
    """Find a subsequence of tau along which E is sequence-porous.

    For each multiplier in the extended grid, collect the tau-indices whose
    normalized score K*/k clears the divergence threshold; the largest such
    index set that itself passes the sequence-porosity decision is the
    witness subsequence.
    """
    n0 = _validate_tail_sequence(e, tau)
    grid = k_grid(e, tau.terms, params, cap_log2=params.band_log2)
    r_min = params.r_min
    index_sets: dict[Fraction, list[int]] = {}
    for k in grid:
        idx = [
            i
            for i, s in _score_row(e, tau.terms, k)
            if i >= n0 and _divergent(_ratio_score(s, k), r_min)
        ]
        if idx:
            index_sets[k] = idx
    ranked = sorted(index_sets.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    for k, idx in ranked[:8]:
        if len(idx) < params.m_sub:
            break
        sub = tau.restrict(idx, label=f"{tau.label}|k={rational_str(k)}")
        try:
            sub_verdict = tau_strong_porosity(e, sub, params)
        except ValueError:
            continue
        if sub_verdict.status == HOLDS:
            diag = {
                "subsequence": tuple(i + 1 for i in idx),
                "subsequence_source": sub.source_indices,
                "k": k,
                "inner": sub_verdict.diagnostics,
            }
            return PorosityVerdict(HOLDS, witness=sub_verdict.witness, diagnostics=diag)
    if all(len(idx) < params.m_sub for idx in index_sets.values()) or not index_sets:
        return PorosityVerdict(
            FAILS,
            counterexample=tuple(range(1, len(tau) + 1)),
            diagnostics={"reason": "every multiplier's high-score index set is finite at depth"},
        )
    return PorosityVerdict(
        INCONCLUSIVE,
        diagnostics={"reason": "large high-score index sets exist but none certifies porosity"},
    )


def _point_score(e: ScaleSet, t: LogValue, params: PorosityParams) -> tuple[Score, Optional[Fraction]]:
    """Best normalized score max_k K*(t,k)/k with k at most 2**band_log2,
    over the powers of two and the data-driven neighbor candidates."""
    band = Fraction(1) << params.band_log2
    candidates: set[Fraction] = {Fraction(2)}
    for j in range(1, params.band_log2 + 1):
        candidates.add(Fraction(1 << j))
    for rf in _neighbor_ratios(e, t, band, params.chain_limit):
        if 2 * rf <= band:
            candidates.add(2 * rf)
        if rf + 1 <= band:
            candidates.add(rf + 1)
    best: Optional[Score] = None
    best_k: Optional[Fraction] = None
    for k in sorted(candidates):
        if t.times_rational(k) > e.window_top:
            continue
        s = _ratio_score(K_star(e, t, k), k)
        if best is None or _score_key(s) > _score_key(best):
            best, best_k = s, k
    if best is None:
        return BEYOND_WINDOW, None
    return best, best_k


def w_porosity(
    e: ScaleSet,
    params: PorosityParams = PorosityParams(),
) -> PorosityVerdict:
    """Dual search deciding whether every null sequence in E admits a porous
    subsequence.

    Refutation: a recurring set of tail points whose best normalized score
    stays uniformly small is a counterexample sequence outright — all of its
    subsequences inherit the bounded scores.  Confirmation: if every tail
    point clears the divergence threshold at some multiplier within the
    uniform band, any sequence's own terms supply the porous subsequence
    (the band is the uniform squeeze constant).  The space between the two
    certificates is reported as inconclusive.
    """
    if not e.contains_zero:
        return PorosityVerdict(
            HOLDS,
            witness=WitnessGaps(gaps=()),
            diagnostics={"reason": "vacuous: 0 is not a member of the set"},
        )
    if e.floor_resolved:
        return PorosityVerdict(
            HOLDS,
            witness=WitnessGaps(gaps=(Gap(a=None, b=e.min_point),) if False else ()),
            diagnostics={"reason": "0 is an isolated member: nothing below the resolved floor"},
        )
    w = params.window(e.depth)
    tail = e.tail_points(w)
    scored: list[tuple[LogValue, Score, Optional[Fraction]]] = []
    for t in tail:
        s, k = _point_score(e, t, params)
        scored.append((t, s, k))
    bad = [
        (i, t, s)
        for i, (t, s, _) in enumerate(scored)
        if not isinstance(s, _BeyondWindow) and s <= params.bad_bound
    ]
    diag_scores = [
        {
            "n": i + 1,
            "log2_tau_n": rational_str(t.log2_fraction(params.prec)),
            "best_k": rational_str(k) if k is not None else "",
            "log2_K_star": (
                "beyond-window"
                if isinstance(s, _BeyondWindow)
                else rational_str(s.log2_fraction(params.prec))
            ),
        }
        for i, (t, s, k) in enumerate(scored)
    ]
    if len(bad) >= params.m_fail:
        keys = _score_keys([s for _, _, s in bad])
        first, second = windows.halves(keys)
        if not (first and second) or max(second) <= max(first):
            return PorosityVerdict(
                FAILS,
                counterexample=tuple(i + 1 for i, _, _ in bad),
                diagnostics={
                    "reason": "recurring tail points with uniformly bounded normalized scores",
                    "bad_points_log2": [rational_str(t.log2_fraction(params.prec)) for _, t, _ in bad],
                    "scores": diag_scores,
                },
            )
    divergent = [
        _divergent(s, params.r_min) for _, s, _ in scored
    ]
    if all(divergent) and scored:
        gap_listv = []
        for t, s, k in scored:
            if k is None:
                continue
            a = next_at_or_below(e, t.times_rational(k))
            b = next_above(e, t.times_rational(k)) if t.times_rational(k) <= e.window_top else None
            if a is not None and b is not None and a < b:
                gap_list v = None  # placeholder
        witness = WitnessGaps(
            gaps=(),
            constants=(Fraction(1, 1 << params.band_log2), Fraction(1 << params.band_log2)),
        )
        return PorosityVerdict(
            HOLDS,
            witness=witness,
            diagnostics={
                "reason": "every tail point clears the divergence threshold within the band",
                "scores": diag_scores,
            },
        )
    return PorosityVerdict(
        INCONCLUSIVE,
        diagnostics={
            "reason": "neither a recurring bad set nor full tail divergence at this depth",
            "divergent_count": sum(divergent),
            "tail_size": len(scored),
            "scores": diag_scores,
        },
    )


def enumeration_sequence(e: ScaleSet, label: str = "enumeration") -> PosSeq:
    """The decreasing enumeration of the set's points as a sequence."""
    return PosSeq(terms=e.points, label=label)


def default_pool(e: ScaleSet, params: PorosityParams = PorosityParams()) -> list[PosSeq]:
    """Enumeration plus every arithmetic-progression subsequence with step
    at most 4 (all offsets), long enough to be judged."""
    base = enumeration_sequence(e)
    pool = [base]
    for step in range(2, 5):
        for offset in range(step):
            idx = list(range(offset, len(base.terms), step))
            if len(idx) >= max(8, 2 * params.m_sub // 2):
                pool.append(base.restrict(idx, label=f"enumeration[{offset}::{step}]"))
    return pool


def completely_strong_porosity(
    e: ScaleSet,
    pool: Optional[Sequence[PosSeq]] = None,
    params: PorosityParams = PorosityParams(),
) -> PorosityVerdict:
    """Is E sequence-porous along every null sequence it contains?

    fails on the first pool member the sequence decision rejects (the pool
    defaults to the decreasing enumeration and its small-step arithmetic
    subsequences); holds when every pool member passes and every tail point
    clears the divergence threshold within the uniform grid cap; otherwise
    inconclusive.
    """
    members = list(pool) if pool is not None else default_pool(e, params)
    verdicts = []
    for seq in members:
        try:
            v = tau_strong_porosity(e, seq, params)
        except ValueError as exc:
            verdicts.append((seq.label, INCONCLUSIVE, str(exc)))
            continue
        verdicts.append((seq.label, v.status, None))
        if v.status == FAILS:
            return PorosityVerdict(
                FAILS,
                counterexample=v.counterexample,
                diagnostics={
                    "failing_sequence": seq.label,
                    "inner": v.diagnostics,
                    "pool": [(lbl, st) for lbl, st, _ in verdicts],
                },
            )
    if any(st != HOLDS for _, st, _ in verdicts):
        return PorosityVerdict(
            INCONCLUSIVE,
            diagnostics={"reason": "pool contains unresolved members", "pool": [(l, s) for l, s, _ in verdicts]},
        )
    # Per-point criterion with the uniform cap: every tail point must diverge
    # at a multiplier small enough to serve every sequence simultaneously.
    strict = PorosityParams(
        prec=params.prec,
        window_fraction=params.window_fraction,
        r_min_log2=params.r_min_log2,
        m_fail=params.m_fail,
        m_sub=params.m_sub,
        m_hold=params.m_hold,
        bad_bound_log2=params.bad_bound_log2,
        k_cap_log2=params.k_cap_log2,
        band_log2=params.k_cap_log2,
        eps=params.eps,
        grid_term_limit=params.grid_term_limit,
        chain_limit=params.chain_limit,
    )
    w = params.window(e.depth)
    tail = e.tail_points(w)
    per_point = [_point_score(e, t, strict)[0] for t in tail]
    if all(_divergent(s, params.r_min) for s in per_point):
        return PorosityVerdict(
            HOLDS,
            witness=WitnessGaps(
                gaps=(),
                constants=(Fraction(1, 1 << params.k_cap_log2), Fraction(1 << params.k_cap_log2)),
            ),
            diagnostics={"pool": [(l, s) for l, s, _ in verdicts], "per_point_divergent": len(per_point)},
        )
    return PorosityVerdict(
        INCONCLUSIVE,
        diagnostics={
            "reason": "pool members pass but some tail point lacks uniform divergence",
            "pool": [(l, s) for l, s, _ in verdicts],
        },
    )
