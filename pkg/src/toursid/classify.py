"""Local Sidorenko classification of oriented paths and cycles.

The path classifier follows the signed-count cascade: the wedge count
C(P3) decides immediately when nonzero; otherwise C(P5) vs -C(2P3) decides,
falling back to the first nonzero higher directed-path count.  The cycle
classifier runs the same cascade but gates each verdict on the
(length mod 4, flip parity) table; a parity mismatch yields Neither.

Verdicts are about hosts of the form J/2 + B with small spectral radius of
B.  For v(D) = 0 (mod 4) the cascade can be degenerate (C(P5) = -C(2P3));
without best_effort such inputs are rejected, with best_effort they come
back Unknown.

Rule strings are a stable output contract; the full vocabulary:

  paths:  impartial:single-edge, wedges:C(P3)>0, wedges:C(P3)<0,
          P5-2P3:case(i|ii|iii), 2P3:case(i|ii|iii),
          unknown:P5=-2P3, unknown:all-zero
  cycles: wedges-cycle:case(i|ii), wedges-cycle:cycle-parity,
          P5-2P3-cycle:case(i|ii|iii), P5-2P3-cycle:cycle-parity,
          2P3-cycle:case(i|ii|iii), 2P3-cycle:cycle-parity,
          unknown:P5=-2P3, unknown:all-zero
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import as_cycle, as_orientation
from .errors import InternalAssertionFailed, PreconditionViolated
from .signed import SignedCounts, cycle_counts, path_counts


class Verdict(str, enum.Enum):
    LTS = "LTS"
    LTAS = "LTAS"
    NEITHER = "Neither"
    IMPARTIAL = "Impartial"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    rule: str
    counts: SignedCounts
    preconditions_met: bool
    input_text: str
    v: int
    e: int
    flips: int | None = None  # cycles only

    def to_json_dict(self) -> dict:
        d = {
            "input": self.input_text,
            "v": self.v,
            "e": self.e,
            "counts": {
                "c_p3": self.counts.c_p3,
                "c_p5": self.counts.c_p5,
                "c_2p3": self.counts.c_2p3,
                "min_k": self.counts.min_k,
                "c_min_k": self.counts.c_min_k,
            },
            "verdict": self.verdict.value,
            "rule": self.rule,
        }
        if self.flips is not None:
            d["flips"] = self.flips
        return d


def _tail_direction(counts: SignedCounts) -> tuple[Verdict, str] | None:
    """Resolve the C(P3) = 0 cascade to a direction, or None if degenerate.

    Returns the verdict the counts point to, ignoring any cycle parity gate.
    """
    c5, c23 = counts.c_p5, counts.c_2p3
    k, ck = counts.min_k, counts.c_min_k
    if c5 == -c23:  # degenerate, includes the all-zero case
        return None
    if c5 > 0 and c5 > -c23:
        return (Verdict.LTS, "case(i)")
    if c5 < 0 and c5 < -c23:
        return (Verdict.LTAS, "case(ii)")
    if c5 == 0:
        # here c23 != 0 because c5 != -c23
        if c23 > 0 and (k is None or (-1) ** k * ck > 0):
            return (Verdict.LTS, "2p3(i)")
        if c23 < 0 and (k is None or (-1) ** k * ck < 0):
            return (Verdict.LTAS, "2p3(ii)")
        return (Verdict.NEITHER, "2p3(iii)")
    return (Verdict.NEITHER, "case(iii)")


def _rule_name(tag: str, cycle: bool) -> str:
    fam = "2P3" if tag.startswith("2p3") else "P5-2P3"
    case = tag.split("(")[1].rstrip(")")
    suffix = "-cycle" if cycle else ""
    return f"{fam}{suffix}:case({case})"


def classify_path(o, best_effort: bool = False) -> Classification:
    """Classify an oriented path as LTS / LTAS / Neither (Algorithm for paths).

    Requires v = e+1 != 0 (mod 4) unless best_effort; a single edge is
    Impartial.  Raises InternalAssertionFailed if a guaranteed inequality
    fails (would indicate a counting bug).
    """
    o = as_orientation(o)
    counts = path_counts(o)
    base = dict(counts=counts, input_text=str(o), v=o.v, e=o.e)
    if o.e == 1:
        return Classification(Verdict.IMPARTIAL, "impartial:single-edge",
                              preconditions_met=True, **base)
    pre_ok = o.v % 4 != 0
    if not pre_ok and not best_effort:
        raise PreconditionViolated(
            f"v = {o.v} is divisible by 4; rerun with best_effort for an Unknown-capable pass"
        )
    if counts.c_p3 > 0:
        return Classification(Verdict.LTAS, "wedges:C(P3)>0", preconditions_met=pre_ok, **base)
    if counts.c_p3 < 0:
        return Classification(Verdict.LTS, "wedges:C(P3)<0", preconditions_met=pre_ok, **base)
    if o.v % 4 == 2 and counts.c_p5 == -counts.c_2p3:
        raise InternalAssertionFailed(
            "C(P5) = -C(2P3) with v = 2 (mod 4); contradicts the parity lemma"
        )
    resolved = _tail_direction(counts)
    if resolved is None:
        rule = ("unknown:all-zero"
                if counts.c_p5 == 0 and counts.c_2p3 == 0 else "unknown:P5=-2P3")
        return Classification(Verdict.UNKNOWN, rule, preconditions_met=pre_ok, **base)
    verdict, tag = resolved
    return Classification(verdict, _rule_name(tag, cycle=False),
                          preconditions_met=pre_ok, **base)


def _parity_allows(verdict: Verdict, ell: int, t: int) -> bool:
    """Parity gate for cycle verdicts from the flip-count table."""
    if ell % 2 == 1:
        return True
    if verdict is Verdict.LTS:
        return (ell % 4 == 0 and t % 2 == 0) or (ell % 4 == 2 and t % 2 == 1)
    if verdict is Verdict.LTAS:
        return (ell % 4 == 0 and t % 2 == 1) or (ell % 4 == 2 and t % 2 == 0)
    return True


def classify_cycle(c, best_effort: bool = False) -> Classification:
    """Classify an oriented cycle (Algorithm for cycles).

    Requires length != 0 (mod 4) unless best_effort.  Neither verdicts caused
    by the flip-parity table carry a "cycle-parity" rule tag.
    """
    c = as_cycle(c)
    ell = c.length
    t = c.flips
    counts = cycle_counts(c)
    base = dict(counts=counts, input_text=str(c.orientation), v=ell, e=ell, flips=t)
    pre_ok = ell % 4 != 0
    if not pre_ok and not best_effort:
        raise PreconditionViolated(
            f"cycle length {ell} is divisible by 4; rerun with best_effort"
        )
    if ell % 2 == 1 and counts.c_p3 == 0:
        raise InternalAssertionFailed("C(P3) = 0 on an odd cycle; contradicts the parity lemma")
    if counts.c_p3 != 0:
        want = Verdict.LTS if counts.c_p3 < 0 else Verdict.LTAS
        if _parity_allows(want, ell, t):
            case = "i" if want is Verdict.LTS else "ii"
            return Classification(want, f"wedges-cycle:case({case})",
                                  preconditions_met=pre_ok, **base)
        return Classification(Verdict.NEITHER, "wedges-cycle:cycle-parity",
                              preconditions_met=pre_ok, **base)
    if ell % 4 == 2 and counts.c_p5 == -counts.c_2p3:
        raise InternalAssertionFailed(
            "C(P5) = -C(2P3) with length = 2 (mod 4); contradicts the parity lemma"
        )
    resolved = _tail_direction(counts)
    if resolved is None:
        rule = ("unknown:all-zero"
                if counts.c_p5 == 0 and counts.c_2p3 == 0 else "unknown:P5=-2P3")
        return Classification(Verdict.UNKNOWN, rule, preconditions_met=pre_ok, **base)
    verdict, tag = resolved
    fam = "2P3-cycle" if tag.startswith("2p3") else "P5-2P3-cycle"
    if verdict is Verdict.NEITHER:
        case = tag.split("(")[1].rstrip(")")
        return Classification(Verdict.NEITHER, f"{fam}:case({case})",
                              preconditions_met=pre_ok, **base)
    if _parity_allows(verdict, ell, t):
        case = tag.split("(")[1].rstrip(")")
        return Classification(verdict, f"{fam}:case({case})",
                              preconditions_met=pre_ok, **base)
    return Classification(Verdict.NEITHER, f"{fam}:cycle-parity",
                          preconditions_met=pre_ok, **base)
