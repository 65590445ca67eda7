"""Inequality classifiers and machine-checkable reduction certificates.

The three checkers decide, from integer inequalities alone, whether a
threefold class L3(d; m_1..m_r) with base points on the distinguished
anticanonical curve is non-special (sufficient condition, tri-state),
base point free (iff), or very ample (iff).  ``build_certificate`` replays
the inductive argument behind each verdict as an explicit chain of
restriction and residual steps whose per-step predicates are verified
numerically, so a verdict can be audited step by step.

Point-count thresholds are implemented exactly as stated: the 4d bound is
enforced from r >= 8 for base-point-freeness but from r >= 9 for the other
two checks.  The sweep machinery probes this asymmetry empirically instead
of second-guessing it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .divclass import (
    PlaneClass,
    ReductionLog,
    ThreefoldClass,
    cremona_reduce,
    edim3,
    format_class,
    k_int,
    quadric_to_plane,
    residual,
    restrict_to_quadric,
    restricted_plane_class,
    vdim3,
)

SCHEMA_VERSION = 1


class Mode(Enum):
    """Where the base points live.

    ON_ANTICANONICAL: general points on the anticanonical curve cut on a
    smooth quadric by a second quadric.  All three checkers apply with the
    stated iff/sufficiency strength, and the finite-field oracle verifies
    the same geometry.

    GENERAL_POSITION: general points of P^3.  The same inequalities remain
    sufficient but the 4d bounds are no longer necessary, so boolean
    verdicts are labeled sufficient-only.
    """

    ON_ANTICANONICAL = "on-anticanonical"
    GENERAL_POSITION = "general-position"


class Verdict(Enum):
    YES = "yes"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Condition:
    """One evaluated inequality, kept as evidence for reports."""

    name: str
    text: str
    holds: bool
    enforced: bool = True

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "text": self.text,
            "holds": self.holds,
            "enforced": self.enforced,
        }


def _norm(c: ThreefoldClass, drop_zeros: bool) -> ThreefoldClass:
    s = c.sorted_desc()
    if drop_zeros and 0 in s.mults:
        warnings.warn(
            "zero multiplicities dropped before applying point-count "
            "thresholds; pass drop_zeros=False to keep them",
            stacklevel=3,
        )
        return s.normalized()
    return s


def _padded_tops(mults: tuple[int, ...], k: int) -> list[int]:
    ms = list(mults) + [0] * k
    return ms[:k]


def check_nonspecial(c: ThreefoldClass, drop_zeros: bool = True) -> tuple[Verdict, list[Condition]]:
    """Sufficient non-speciality test; Yes or Unknown, never a refusal.

    Yes when 2d >= m1+m2+m3+m4, d >= m1+m2-1, and (r <= 8 or 4d >= sum m_i).
    Anything else (including negative multiplicities, which the inequalities
    do not cover) is Unknown.
    """
    s = _norm(c, drop_zeros)
    d, ms, r = s.d, s.mults, s.r
    if any(m < 0 for m in ms):
        return Verdict.UNKNOWN, [
            Condition("domain", "negative multiplicity outside the test's domain", False)
        ]
    m1, m2, m3, m4 = _padded_tops(ms, 4)
    total = sum(ms)
    conds = [
        Condition(
            "hypothesis",
            f"2d={2 * d} >= m1+m2+m3+m4={m1 + m2 + m3 + m4}",
            2 * d >= m1 + m2 + m3 + m4,
        ),
        Condition("c1", f"d={d} >= m1+m2-1={m1 + m2 - 1}", d >= m1 + m2 - 1),
        Condition(
            "c2",
            f"4d={4 * d} >= sum(m)={total}" + ("" if r >= 9 else f" [not enforced, r={r} <= 8]"),
            4 * d >= total,
            enforced=r >= 9,
        ),
    ]
    ok = all(cond.holds for cond in conds if cond.enforced)
    return (Verdict.YES if ok else Verdict.UNKNOWN), conds


def check_bpf(c: ThreefoldClass, drop_zeros: bool = True) -> tuple[bool, list[Condition]]:
    """Base-point-freeness test: m_r >= 0, d >= m1+m2, and 4d >= sum(m)+2
    once r >= 8.  An iff in on-anticanonical mode."""
    s = _norm(c, drop_zeros)
    d, ms, r = s.d, s.mults, s.r
    m1, m2 = _padded_tops(ms, 2)
    mr = ms[-1] if ms else 0
    total = sum(ms)
    conds = [
        Condition("c1", f"m_r={mr} >= 0", mr >= 0),
        Condition("c2", f"d={d} >= m1+m2={m1 + m2}", d >= m1 + m2),
        Condition(
            "c3",
            f"4d={4 * d} >= sum(m)+2={total + 2}" + ("" if r >= 8 else f" [not enforced, r={r} < 8]"),
            4 * d >= total + 2,
            enforced=r >= 8,
        ),
    ]
    ok = all(cond.holds for cond in conds if cond.enforced)
    return ok, conds


def check_very_ample(c: ThreefoldClass, drop_zeros: bool = True) -> tuple[bool, list[Condition]]:
    """Very-ampleness test: m_r > 0, d >= m1+m2+1 (d >= m1+1 when r = 1,
    d >= 1 when r = 0), and 4d >= sum(m)+3 once r >= 9.  An iff in
    on-anticanonical mode."""
    s = _norm(c, drop_zeros)
    d, ms, r = s.d, s.mults, s.r
    m1, m2 = _padded_tops(ms, 2)
    mr = ms[-1] if ms else 1
    total = sum(ms)
    if r == 0:
        deg_cond = Condition("c2", f"d={d} >= 1", d >= 1)
    elif r == 1:
        deg_cond = Condition("c2", f"d={d} >= m1+1={m1 + 1}", d >= m1 + 1)
    else:
        deg_cond = Condition("c2", f"d={d} >= m1+m2+1={m1 + m2 + 1}", d >= m1 + m2 + 1)
    conds = [
        Condition("c1", f"m_r={mr} > 0", mr > 0),
        deg_cond,
        Condition(
            "c3",
            f"4d={4 * d} >= sum(m)+3={total + 3}" + ("" if r >= 9 else f" [not enforced, r={r} < 9]"),
            4 * d >= total + 3,
            enforced=r >= 9,
        ),
    ]
    ok = all(cond.holds for cond in conds if cond.enforced)
    return ok, conds


# ---------------------------------------------------------------------------
# classification record


@dataclass(frozen=True)
class Classification:
    clazz: ThreefoldClass
    mode: Mode
    vdim: int
    edim: int
    nonspecial: Verdict
    nonspecial_conditions: tuple[Condition, ...]
    bpf: bool
    bpf_conditions: tuple[Condition, ...]
    very_ample: bool
    very_ample_conditions: tuple[Condition, ...]

    @property
    def sufficiency_only(self) -> bool:
        return self.mode is Mode.GENERAL_POSITION

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "class": format_class(self.clazz),
            "mode": self.mode.value,
            "vdim": self.vdim,
            "edim": self.edim,
            "nonspecial": self.nonspecial.value,
            "nonspecial_conditions": [c.to_dict() for c in self.nonspecial_conditions],
            "bpf": self.bpf,
            "bpf_conditions": [c.to_dict() for c in self.bpf_conditions],
            "very_ample": self.very_ample,
            "very_ample_conditions": [c.to_dict() for c in self.very_ample_conditions],
            "verdict_strength": "sufficient-only" if self.sufficiency_only else "iff (bpf, very_ample); sufficient (nonspecial)",
        }


def classify(c: ThreefoldClass, mode: Mode = Mode.ON_ANTICANONICAL,
             drop_zeros: bool = True) -> Classification:
    ns, ns_conds = check_nonspecial(c, drop_zeros)
    bp, bp_conds = check_bpf(c, drop_zeros)
    va, va_conds = check_very_ample(c, drop_zeros)
    return Classification(
        clazz=c,
        mode=mode,
        vdim=vdim3(c),
        edim=edim3(c),
        nonspecial=ns,
        nonspecial_conditions=tuple(ns_conds),
        bpf=bp,
        bpf_conditions=tuple(bp_conds),
        very_ample=va,
        very_ample_conditions=tuple(va_conds),
    )


# ---------------------------------------------------------------------------
# surface predicates


class Goal(Enum):
    NONSPECIAL = "nonspecial"
    BPF = "bpf"
    VERY_AMPLE = "very-ample"


# K-intersection thresholds for the plane-class predicates: a standard class
# is non-special when c.K <= 0, base point free when c.K <= -2, very ample
# when c.(-K) >= 3.
_K_THRESHOLD = {Goal.NONSPECIAL: 0, Goal.BPF: -2, Goal.VERY_AMPLE: -3}


@dataclass(frozen=True)
class SurfaceCheck:
    clazz: PlaneClass
    goal: Goal
    reduction: ReductionLog
    k: int
    threshold: int
    ok: bool

    def to_dict(self) -> dict:
        return {
            "class": format_class(self.clazz),
            "goal": self.goal.value,
            "standard": self.reduction.standard,
            "reduction_steps": len(self.reduction.steps),
            "reduced": format_class(self.reduction.result),
            "k_intersection": self.k,
            "k_threshold": self.threshold,
            "ok": self.ok,
        }


def surface_predicate(c: PlaneClass, goal: Goal) -> SurfaceCheck:
    """Plane-class predicate: Cremona-reducible to standard form plus a
    K-intersection bound.  The pairing is computed on the input class, which
    is safe because the quadratic moves preserve it."""
    log = cremona_reduce(c)
    k = k_int(c)
    thr = _K_THRESHOLD[goal]
    ok = log.standard and k <= thr
    return SurfaceCheck(c, goal, log, k, thr, ok)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class CertStep:
    """One restriction/residual step of the induction.

    ``clazz`` is the (normalized) class the step starts from, ``plane`` the
    plane model of its trace on the quadric, ``surface`` the predicate that
    must hold for the trace, ``residual_raw`` the literal residual class and
    ``next_class`` its normalized form passed to the next step.
    ``ns_residual`` records the non-speciality sub-check of the residual
    where the induction needs it.  ``clamped`` marks the very-ampleness
    branch that zeroes the exhausted last multiplicity.
    """

    index: int
    clazz: ThreefoldClass
    plane: PlaneClass
    surface: SurfaceCheck
    residual_raw: ThreefoldClass
    next_class: ThreefoldClass
    ns_residual: Optional[Verdict] = None
    clamped: bool = False

    @property
    def passed(self) -> bool:
        if not self.surface.ok:
            return False
        if self.ns_residual is not None and self.ns_residual is not Verdict.YES:
            return False
        return True

    def to_dict(self) -> dict:
        out = {
            "index": self.index,
            "class": format_class(self.clazz),
            "restricted_plane": format_class(self.plane),
            "surface": self.surface.to_dict(),
            "residual": format_class(self.residual_raw),
            "next": format_class(self.next_class),
            "passed": self.passed,
            "clamped": self.clamped,
        }
        if self.ns_residual is not None:
            out["ns_residual"] = self.ns_residual.value
        return out


@dataclass(frozen=True)
class AugmentedCheck:
    """Top-level very-ampleness bookkeeping: the class with one multiplicity
    bumped must stay base point free."""

    index: int
    clazz: ThreefoldClass
    bpf: bool

    def to_dict(self) -> dict:
        return {"index": self.index, "class": format_class(self.clazz), "bpf": self.bpf}


@dataclass(frozen=True)
class Terminal:
    clazz: ThreefoldClass
    rule: str
    checks: tuple[Condition, ...] = ()
    ok: bool = True

    def to_dict(self) -> dict:
        return {
            "class": format_class(self.clazz),
            "rule": self.rule,
            "checks": [c.to_dict() for c in self.checks],
            "ok": self.ok,
        }


@dataclass(frozen=True)
class Certificate:
    goal: Goal
    clazz: ThreefoldClass
    steps: tuple[CertStep, ...]
    terminal: Terminal
    augmented: tuple[AugmentedCheck, ...] = ()
    failed_at: Optional[int] = None

    @property
    def ok(self) -> bool:
        return (
            self.failed_at is None
            and self.terminal.ok
            and all(s.passed for s in self.steps)
            and all(a.bpf for a in self.augmented)
        )

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "goal": self.goal.value,
            "class": format_class(self.clazz),
            "ok": self.ok,
            "failed_at": self.failed_at,
            "steps": [s.to_dict() for s in self.steps],
            "augmented_bpf_checks": [a.to_dict() for a in self.augmented],
            "terminal": self.terminal.to_dict(),
        }


_MAX_STEPS = 64


def _bump(c: ThreefoldClass, i: int) -> ThreefoldClass:
    ms = list(c.mults)
    ms[i] += 1
    return ThreefoldClass(c.d, tuple(ms))


def _positive_count(c: ThreefoldClass) -> int:
    return sum(1 for m in c.mults if m > 0)


def _make_step(idx: int, cur: ThreefoldClass, goal: Goal, clamped: bool,
               with_ns: bool) -> CertStep:
    plane = restricted_plane_class(cur)
    surface = surface_predicate(plane, goal)
    res_raw = residual(cur, effective=clamped)
    nxt = res_raw.normalized()
    ns_v: Optional[Verdict] = None
    if with_ns:
        ns_v, _ = check_nonspecial(nxt)
    return CertStep(idx, cur, plane, surface, res_raw, nxt, ns_v, clamped)


def build_certificate(c: ThreefoldClass, goal: Goal) -> Certificate:
    """Replay the inductive argument for the requested property.

    The chain restricts to the quadric, checks the plane-model predicate of
    the trace, passes to the residual, and repeats until the terminal rule.
    Non-speciality descends until at most 8 points remain; base-point-
    freeness repeats the smallest multiplicity's worth of steps and closes
    by induction on fewer points; very ampleness walks the smallest
    multiplicity down to its final clamped step and additionally records
    that every class with one multiplicity bumped stays base point free.
    If the verdict's inequalities fail, the chain is still built and the
    first failing step is reported, which is the useful diagnostic.
    """
    start = c.normalized()
    if goal is Goal.NONSPECIAL:
        return _certificate_ns(start)
    if goal is Goal.BPF:
        return _certificate_bpf(start)
    return _certificate_va(start)


def _certificate_ns(start: ThreefoldClass) -> Certificate:
    steps: list[CertStep] = []
    cur = start
    while _positive_count(cur) >= 9 and len(steps) < _MAX_STEPS:
        step = _make_step(len(steps) + 1, cur, Goal.NONSPECIAL, clamped=False, with_ns=False)
        steps.append(step)
        if not step.passed:
            return Certificate(Goal.NONSPECIAL, start, tuple(steps),
                               Terminal(step.next_class, "aborted: failing step", (), False),
                               failed_at=step.index)
        cur = step.next_class
    if _positive_count(cur) >= 9:
        return Certificate(Goal.NONSPECIAL, start, tuple(steps),
                           Terminal(cur, "aborted: step budget exhausted", (), False),
                           failed_at=len(steps))
    term = Terminal(cur, "at most 8 points: dimension count for general points of P^3")
    return Certificate(Goal.NONSPECIAL, start, tuple(steps), term)


def _certificate_bpf(start: ThreefoldClass) -> Certificate:
    r = start.r
    if r <= 8:
        term = Terminal(start, "at most 8 points: base case for general points of P^3")
        return Certificate(Goal.BPF, start, (), term)
    mr = min(start.mults)
    steps: list[CertStep] = []
    cur = start
    for _ in range(mr):
        if len(steps) >= _MAX_STEPS:
            break
        step = _make_step(len(steps) + 1, cur, Goal.BPF, clamped=False, with_ns=True)
        steps.append(step)
        if not step.passed:
            return Certificate(Goal.BPF, start, tuple(steps),
                               Terminal(step.next_class, "aborted: failing step", (), False),
                               failed_at=step.index)
        cur = step.next_class
    ok, conds = check_bpf(cur)
    term = Terminal(cur, "smallest multiplicity exhausted: induction on fewer points",
                    tuple(conds), ok)
    return Certificate(Goal.BPF, start, tuple(steps), term)


def _certificate_va(start: ThreefoldClass) -> Certificate:
    r = start.r
    if r <= 2:
        ok, conds = check_very_ample(start)
        term = Terminal(start, "at most 2 points: projection base case", tuple(conds), ok)
        return Certificate(Goal.VERY_AMPLE, start, (), term)

    augmented = tuple(
        AugmentedCheck(i, _bump(start, i), check_bpf(_bump(start, i))[0])
        for i in range(start.r)
    )

    steps: list[CertStep] = []
    cur = start
    failed_at: Optional[int] = None
    while len(steps) < _MAX_STEPS:
        mr_cur = min(cur.mults) if cur.mults else 0
        clamped = mr_cur == 1
        step = _make_step(len(steps) + 1, cur, Goal.VERY_AMPLE, clamped=clamped, with_ns=True)
        steps.append(step)
        if not step.passed:
            failed_at = step.index
            break
        cur = step.next_class
        if clamped:
            break
        if not cur.mults:
            break

    if failed_at is not None:
        cert = Certificate(Goal.VERY_AMPLE, start, tuple(steps),
                           Terminal(cur, "aborted: failing step", (), False),
                           augmented, failed_at)
        return cert

    # The clamped step also needs the residual to stay base point free.
    bpf_ok, bpf_conds = check_bpf(cur)
    va_ok, va_conds = check_very_ample(cur)
    checks = tuple(bpf_conds) + tuple(va_conds)
    term = Terminal(
        cur,
        "smallest multiplicity exhausted: residual base point free, "
        "induction on fewer points",
        checks,
        bpf_ok and va_ok,
    )
    return Certificate(Goal.VERY_AMPLE, start, tuple(steps), term, augmented)
