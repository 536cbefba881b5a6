"""The claim checklist: each claim recomputes one geometric statement exactly.

A claim returns a status ("pass", "fail" or "unknown") and witnesses, all
written as field literals, strata or saddle ids, so a report can be replayed
and compared.  "unknown" means a direction could not be certified
periodic within the budget; it is never read as a failure of the claim.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .catalog import HORIZONTAL, NAMES, VERTICAL, figure4_degeneration, make_named
from .cylinders import DecompositionError, classify_cylinder, cylinder_decomposition, golden_configuration
from .flow import DEFAULT_BUDGET
from .linalg import vec
from .qfield import PHI, format_literal
from .serialize import canonical_json
from .surface import central_symmetry, components, euler_genus, genus, stratum, verify_involution
from .surgery import collapse


class ClaimError(KeyError):
    pass


class _Unknown(Exception):
    """Raised inside a claim when a decomposition ran out of budget."""


@dataclass
class Report:
    claim: str
    anchor: str
    status: str
    witnesses: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self, timings: bool = False) -> dict:
        d = {"claim": self.claim, "anchor": self.anchor, "status": self.status, "witnesses": self.witnesses}
        if timings:
            d["elapsed_seconds"] = round(self.elapsed, 3)
        return d


@dataclass
class Claim:
    id: str
    anchor: str
    fn: Callable[[int], tuple[bool, dict]]


CLAIMS: dict[str, Claim] = {}


def claim(cid: str, anchor: str):
    def register(fn):
        CLAIMS[cid] = Claim(cid, anchor, fn)
        return fn

    return register


def _lit(x) -> str:
    return format_literal(x)


def _decompose(s, d, budget):
    dec = cylinder_decomposition(s, d, budget)
    if not dec.complete:
        raise _Unknown(f"direction {dec.direction} undecided within budget {budget}")
    return dec


# -- classical surfaces --------------------------------------------------------------------


@claim("torus-sanity", "unit square torus: genus one, one regular point, one horizontal cylinder")
def _torus(budget):
    t = make_named("torus")
    dec = _decompose(t.surface, HORIZONTAL, budget)
    cyls = [(c.circumference, c.height) for c in dec.cylinders]
    sig = stratum(t.surface)
    ok = genus(t.surface) == [1] and sig.orders == () and sig.marked == 1 and cyls == [(1, 1)]
    return ok, {"stratum": str(sig), "genus": genus(t.surface), "cylinders": [[_lit(a), _lit(b)] for a, b in cyls]}


def _stratum_claim(name, expected):
    def fn(budget):
        s = make_named(name).surface
        sig = str(stratum(s))
        return sig == expected and euler_genus(s) == genus(s), {"stratum": sig, "euler_genus": euler_genus(s)}

    return fn


claim("octagon-stratum", "regular octagon with opposite sides glued lies in H(2)")(_stratum_claim("octagon", "H(2)"))
claim("decagon-stratum", "regular decagon with opposite sides glued lies in H(1,1)")(_stratum_claim("decagon", "H(1,1)"))
claim("double-pentagon-stratum", "double regular pentagon lies in H(2)")(_stratum_claim("double_pentagon", "H(2)"))
claim("golden-l-stratum", "golden L lies in H(2)")(_stratum_claim("golden_L", "H(2)"))


@claim("decagon-weierstrass", "central symmetry of the decagon fixes 2g + 2 = 6 points")
def _decagon_weierstrass(budget):
    s = make_named("decagon").surface
    fixed = verify_involution(s, central_symmetry(s))
    kinds = sorted(f.kind for f in fixed)
    return len(fixed) == 6, {"fixed_points": len(fixed), "kinds": kinds}


# -- figure 1 ------------------------------------------------------------------------------


@claim("figure1-stratum", "figure1 lies in H(1,1) with the golden point marked")
def _figure1_stratum(budget):
    s = make_named("figure1").surface
    sig = stratum(s)
    return sig.orders == (1, 1) and sig.marked == 1 and len(components(s)) == 1, {"stratum": str(sig)}


@claim("figure1-classes", "figure1: four horizontal cylinders, A two simple cylinders, B golden with ratio phi")
def _figure1_classes(budget):
    t = make_named("figure1")
    dec = _decompose(t.surface, HORIZONTAL, budget)
    a = t.cylinder_class("A").locate(dec)
    b = t.cylinder_class("B").locate(dec)
    gw = golden_configuration(*b)
    r = b[0].circumference / b[1].circumference
    ok = (
        len(dec.cylinders) == 4
        and {c.id for c in a} | {c.id for c in b} == {c.id for c in dec.cylinders}
        and all(classify_cylinder(c) == "simple" for c in a)
        and gw.holds
        and (r == PHI or 1 / r == PHI)
    )
    return ok, {
        "cylinders": len(dec.cylinders),
        "A_kinds": [classify_cylinder(c) for c in a],
        "B_golden": gw.holds,
        "B_shared_saddle": gw.shared_saddle,
        "B_ratio": _lit(r),
    }


@claim("catalog-constraints", "every catalog surface satisfies its declared length equations")
def _constraints(budget):
    failing = []
    count = 0
    for name in NAMES:
        for text, ok in make_named(name).check_constraints():
            count += 1
            if not ok:
                failing.append(f"{name}: {text}")
    return not failing, {"checked": count, "failing": failing}


# -- the (1,1,1,7) representative ------------------------------------------------------------


@claim("locus1117-stratum", "locus_1117 is connected, in H(6), genus four")
def _locus_stratum(budget):
    s = make_named("locus_1117").surface
    sig = stratum(s)
    ok = str(sig) == "H(6)" and len(components(s)) == 1 and genus(s) == [4] == euler_genus(s)
    return ok, {"stratum": str(sig), "genus": genus(s)}


def _collapse_class(t, name, budget):
    cls = t.cylinder_class(name)
    dec = _decompose(t.surface, cls.direction, budget)
    return collapse(t.surface, cls.locate(dec), budget, dec)


@claim("locus1117-collapse-golden", "collapsing the golden class of locus_1117 leaves two genus one components")
def _locus_collapse_golden(budget):
    y = _collapse_class(make_named("locus_1117"), "C2", budget)
    g = genus(y)
    return g == [1, 1] == euler_genus(y), {"stratum": str(stratum(y)), "genus": g}


@claim("locus1117-collapse-simple", "collapsing the simple pair of locus_1117 gives a connected H(1,1) with one marked point")
def _locus_collapse_simple(budget):
    y = _collapse_class(make_named("locus_1117"), "C1", budget)
    sig = stratum(y)
    ok = len(components(y)) == 1 and genus(y) == [2] and sig.orders == (1, 1) and sig.marked == 1
    return ok, {"stratum": str(sig), "genus": genus(y)}


# -- figures 3 to 5 --------------------------------------------------------------------------


def _golden_contradiction(name):
    def fn(budget):
        t = make_named(name)
        cls = t.cylinder_class("red_white")
        dec = _decompose(t.surface, cls.direction, budget)
        pair = cls.locate(dec)
        gw = golden_configuration(*pair)
        eqs = t.check_constraints()
        ok = gw.holds and all(v for _, v in eqs)
        return ok, {
            "direction": [_lit(dec.direction.v.x), _lit(dec.direction.v.y)],
            "pair": [c.id for c in pair],
            "kinds": [classify_cylinder(c) for c in pair],
            "circumferences": [_lit(c.circumference) for c in pair],
            "shared_saddle": gw.shared_saddle,
            "equations": [text for text, _ in eqs],
        }

    return fn


claim("figure3a-golden-contradiction", "figure3a: the red/white pair is in the golden configuration")(
    _golden_contradiction("figure3a")
)
claim("figure3b-golden-contradiction", "figure3b: the red/white pair is in the golden configuration")(
    _golden_contradiction("figure3b")
)


@claim(
    "figure4a-degeneration",
    "figure4a with g = phi f: three vertical crossings collapse to a connected H(2) plus one non-Weierstrass marked point",
)
def _figure4(budget):
    t = make_named("figure4a")
    deg = figure4_degeneration(t, budget=budget)
    y = deg.result
    sig = stratum(y)
    wit = {
        "shear": _lit(deg.shear),
        "aligned_crossings": len(deg.aligned),
        "stratum": str(sig),
        "components": len(components(y)),
    }
    if len(components(y)) != 1 or sig.orders != (2,) or sig.marked != 1:
        return False, wit
    # the marked point must move under the hyperelliptic involution
    from .surface import find_involutions, involution_image_singularity

    invs = find_involutions(y)
    if not invs:
        raise _Unknown("no hyperelliptic involution found in this presentation")
    marked = next(sg.id for sg in y.singularities if sg.order == 0)
    image = involution_image_singularity(y, invs[0], marked)
    wit["marked_point_fixed"] = image == marked
    return image != marked, wit


@claim("figure5-disjoint-classes", "figure5 carries three pairwise disjoint cylinder classes")
def _figure5(budget):
    t = make_named("figure5")
    located = {}
    for cls in t.classes:
        dec = _decompose(t.surface, cls.direction, budget)
        located[cls.name] = [c.id for c in cls.locate(dec)]
    # C2 and C3 are parallel, hence disjoint; C1 is disjoint from both when
    # its cylinders survive collapsing them unchanged
    hdec = _decompose(t.surface, HORIZONTAL, budget)
    flat = t.cylinder_class("C2").locate(hdec) + t.cylinder_class("C3").locate(hdec)
    y = collapse(t.surface, flat, budget, hdec)
    vdec = _decompose(y, VERTICAL, budget)
    survived = True
    try:
        t.cylinder_class("C1").locate(vdec)
    except Exception:
        survived = False
    distinct = len({i for ids in (located["C2"], located["C3"]) for i in ids}) == 4
    return survived and distinct, {"classes": located, "C1_survives_collapse": survived}


# -- runner ----------------------------------------------------------------------------------


def claim_ids() -> list[str]:
    return sorted(CLAIMS)


def _run_one(cid: str, budget: int) -> Report:
    c = CLAIMS[cid]
    start = time.perf_counter()
    try:
        ok, wit = c.fn(budget)
        status = "pass" if ok else "fail"
    except (_Unknown, DecompositionError) as exc:
        status, wit = "unknown", {"reason": str(exc)}
    return Report(cid, c.anchor, status, wit, time.perf_counter() - start)


def run_checklist(selector="all", budget: int | None = None, jobs: int = 1) -> list[Report]:
    """Run the selected claims; reports come back sorted by claim id."""
    if selector == "all" or selector is None:
        ids = claim_ids()
    else:
        ids = sorted(set(selector))
        unknown = [i for i in ids if i not in CLAIMS]
        if unknown:
            raise ClaimError(f"unknown claim id(s): {', '.join(unknown)}")
    budget = DEFAULT_BUDGET if budget is None else budget
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(lambda i: _run_one(i, budget), ids))
    else:
        reports = [_run_one(i, budget) for i in ids]
    return sorted(reports, key=lambda r: r.claim)


def replay(report: Report, budget: int | None = None) -> bool:
    """Recompute a claim and compare status and witnesses."""
    again = run_checklist([report.claim], budget)[0]
    return again.status == report.status and again.witnesses == report.witnesses


def reports_to_text(reports: list[Report], timings: bool = False) -> str:
    return canonical_json({"reports": [r.to_dict(timings) for r in reports]})


def exit_status(reports: list[Report], strict: bool = False) -> int:
    bad = {"fail", "unknown"} if strict else {"fail"}
    return 1 if any(r.status in bad for r in reports) else 0
