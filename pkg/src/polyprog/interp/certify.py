"""Certificates: the full battery of checks placing a program in the
polynomial-time class (up to the sampling bound)."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..engine.semantics import CompletenessReport, OrthogonalityReport, check_completeness, check_orthogonal
from ..signature import COMPUTATION, CONSTRUCTOR, FUNCTION, STRUCTURE, Polygraph
from .checks import (
    CURRENT,
    DEFAULT_BOUND,
    HEAT,
    MAXHEAT,
    PROVED,
    Verdict,
    check_additive,
    check_cartesian,
    check_compatible,
    check_monotone,
    check_ranges,
    entry_degrees,
)
from .interpretation import Interpretation


@dataclass
class RuleVerdicts:
    current: Verdict
    heat: Verdict
    conservative: Verdict

    @property
    def ok(self) -> bool:
        return self.current.ok and self.heat.ok and self.conservative.ok

    def to_json(self) -> dict:
        return {"current": self.current.to_json(), "heat": self.heat.to_json(),
                "conservative": self.conservative.to_json()}


@dataclass
class Certificate:
    bound: int
    additive: Verdict
    gamma: int | None
    cartesian: Verdict
    degrees: dict
    ranges: dict
    monotone: dict
    rules: dict  # rule name -> RuleVerdicts
    completeness: CompletenessReport
    orthogonality: OrthogonalityReport
    kinds: dict = field(default_factory=dict)  # rule name -> kind

    @property
    def polynomial(self) -> bool:
        return all(isinstance(d, int) for row in self.degrees.values() for d in row.values())

    def failures(self) -> list[str]:
        out = []
        if not self.additive.ok:
            out.append(f"additive: {self.additive}")
        if not self.cartesian.ok:
            out.append(f"cartesian: {self.cartesian}")
        if not self.polynomial:
            out.append("polynomial: unbounded degree")
        for name, v in self.ranges.items():
            if not v.ok:
                out.append(f"range of {name}: {v}")
        for name, v in self.monotone.items():
            if not v.ok:
                out.append(f"monotone {name}: {v}")
        for name, rv in self.rules.items():
            for what in ("current", "heat", "conservative"):
                v = getattr(rv, what)
                if not v.ok:
                    out.append(f"{what} on {name}: {v}")
        if not self.completeness.ok:
            f, args = self.completeness.counterexamples[0]
            out.append(f"completeness: {f}({', '.join(map(str, args))}) is irreducible")
        if not self.orthogonality.ok:
            bad = [o for o in self.orthogonality.overlaps if not o.weak]
            if bad:
                out.append(f"orthogonality: {bad[0].first} and {bad[0].second} overlap on {bad[0].term}")
            for r in self.orthogonality.nonlinear:
                out.append(f"orthogonality: {r} is not left-linear")
        return out

    @property
    def ok(self) -> bool:
        return not self.failures()

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "bound": self.bound,
            "additive": self.additive.to_json(),
            "gamma": self.gamma,
            "cartesian": self.cartesian.to_json(),
            "polynomial": self.polynomial,
            "degrees": self.degrees,
            "ranges": {k: v.to_json() for k, v in sorted(self.ranges.items())},
            "monotone": {k: v.to_json() for k, v in sorted(self.monotone.items())},
            "rules": {k: dict(kind=self.kinds.get(k), **v.to_json()) for k, v in sorted(self.rules.items())},
            "completeness": self.completeness.to_json(),
            "orthogonality": self.orthogonality.to_json(),
            "failures": self.failures(),
        }


def check_entries_monotone(interp: Interpretation, B: int = DEFAULT_BOUND) -> dict:
    phi = interp.phi
    out = {}
    for cell in interp.polygraph.two_cells.values():
        if cell.kind == STRUCTURE:
            continue
        doms = [phi.domain(s) for s in cell.src]
        out[f"current {cell.name}"] = check_monotone(phi.expr(cell), doms, B)
        if cell.kind == FUNCTION:
            out[f"heat {cell.name}"] = check_monotone(interp.heat.expr(cell), doms, B)
    return out


def certify(P: Polygraph, interp: Interpretation, B: int = DEFAULT_BOUND, depth: int = 4,
            symbolic: bool = True) -> Certificate:
    """Run every check and collect the verdicts.

    Structure rules are covered without sampling when the interpretation is
    cartesian: heat is zero on both sides, and swap/copy currents make the
    largest-current heat agree.  Otherwise they are checked like the rest.
    """
    additive, gamma = check_additive(interp.phi)
    cartesian = check_cartesian(interp)
    rules = {}
    kinds = {}
    for r in P.three_cells:
        kinds[r.name] = r.kind
        cur = check_compatible(CURRENT, r, interp, False, B, symbolic)
        if r.kind == COMPUTATION:
            heat = check_compatible(HEAT, r, interp, True, B, symbolic)
            cons = check_compatible(MAXHEAT, r, interp, False, B, symbolic)
        elif cartesian.ok:
            heat = Verdict(PROVED, message="zero heat on both sides")
            cons = Verdict(PROVED, message="cartesian interpretation")
        else:
            heat = check_compatible(HEAT, r, interp, False, B, symbolic)
            cons = check_compatible(MAXHEAT, r, interp, False, B, symbolic)
        rules[r.name] = RuleVerdicts(cur, heat, cons)
    return Certificate(
        bound=B,
        additive=additive,
        gamma=gamma,
        cartesian=cartesian,
        degrees=entry_degrees(interp),
        ranges=check_ranges(interp, B),
        monotone=check_entries_monotone(interp, B),
        rules=rules,
        completeness=check_completeness(P, depth),
        orthogonality=check_orthogonal(P),
        kinds=kinds,
    )
