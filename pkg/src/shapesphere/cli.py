"""``shapesphere`` command line.

Subcommands: classify, contour, flow-svg, prob, paper-check, special-points.
Exit codes: 0 success, 1 internal failure (or a failed paper-check row),
2 usage or domain error. Domain errors are reported as a JSON object
``{"error": {"type": ..., "message": ...}}`` on stdout.

JSON floats are shortest round-trip decimals (Python's ``repr``), field
order is fixed, and angles are radians with ``*_deg`` convenience fields.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys

import numpy as np

from . import euclid, figure, flow, measure, montecarlo, shapemap
from .euclid import DegenerateTriangleError, PlanarTriangle
from .quadrature import QuadratureError

SEED_ENV = "SHAPESPHERE_SEED"
CSV_HEADER = ("arc_id", "cluster", "hemisphere", "theta", "phi", "x", "y", "z")
PROB_METHODS = {
    "cap": measure.CAP,
    "region": measure.REGION,
    "paper-literal": measure.LITERAL,
    "mc": measure.MONTE_CARLO,
}

# paper-check reference values and tolerances
PAPER_OBTUSE = 0.75
PAPER_ACUTE = 0.25
PAPER_FERMAT_AREA = 0.5838
PAPER_FERMAT_OBTUSE = 0.1394
PAPER_FERMAT_ACUTE = 0.8606
OPEN_QUESTION = (
    "Open question (Fermat-obtuse probability): the printed area integral runs over X in [0, 1/2] "
    "with a single phi branch, while the region {apex angle >= 2pi/3} lies in X in [1/2, 1]; "
    "the literal value is reproduced for the record, the region quadrature is checked against Monte Carlo."
)


class UsageError(Exception):
    """Bad flag value or domain violation; exit code 2."""


# ---------------------------------------------------------------------------
# parsing helpers


def parse_angle(text: str) -> float:
    """Radians by default; a ``deg`` suffix means degrees (``rad`` is accepted too)."""
    s = text.strip().lower()
    scale = 1.0
    if s.endswith("deg"):
        s, scale = s[:-3], math.pi / 180.0
    elif s.endswith("rad"):
        s = s[:-3]
    try:
        value = float(s) * scale
    except ValueError:
        raise UsageError(f"cannot read angle {text!r}; use e.g. 120deg or 2.0944") from None
    if not math.isfinite(value):
        raise UsageError(f"angle must be finite, got {text!r}")
    return value


def parse_angle_list(text: str) -> list[float]:
    return [parse_angle(t) for t in text.split(",") if t.strip()]


def parse_point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"vertex must be x,y, got {text!r}")
    try:
        x, y = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"vertex must be x,y, got {text!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise UsageError(f"vertex coordinates must be finite, got {text!r}")
    return x, y


def parse_view(text: str) -> np.ndarray:
    """``x,y,z`` or the name of a catalogued shape such as ``E`` or ``U1``."""
    pts = shapemap.special_points()
    if text in pts:
        return shapemap.embed(pts[text])
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"view must be x,y,z or one of {', '.join(pts)}, got {text!r}")
    try:
        v = np.array([float(p) for p in parts])
    except ValueError:
        raise UsageError(f"view must be x,y,z, got {text!r}") from None
    if not np.all(np.isfinite(v)) or not np.any(v):
        raise UsageError("view axis must be a non-zero finite vector")
    return v / np.linalg.norm(v)


def triangle_from_sides(a: float, b: float, c: float) -> PlanarTriangle:
    """Triangle with |BC| = a, |CA| = b, |AB| = c; B at the origin, C on the x axis."""
    sides = (a, b, c)
    if not all(math.isfinite(s) and s > 0.0 for s in sides):
        raise UsageError("side lengths must be positive and finite")
    longest = max(sides)
    if 2.0 * longest > sum(sides) * (1.0 + 1e-12):
        raise UsageError(f"sides {a}, {b}, {c} violate the triangle inequality")
    x = (c * c + a * a - b * b) / (2.0 * a)
    y = math.sqrt(max(c * c - x * x, 0.0))
    return PlanarTriangle((x, y), (0.0, 0.0), (a, 0.0))


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


# ---------------------------------------------------------------------------
# records


def _f(x):
    x = float(x)
    return x if math.isfinite(x) else None


def shape_record(s: shapemap.ShapeCoords) -> dict:
    return {
        "cluster": s.cluster,
        "theta": _f(s.theta),
        "phi": _f(s.phi) if s.phi_defined else None,
        "theta_deg": _f(math.degrees(s.theta)),
        "phi_deg": _f(math.degrees(s.phi)) if s.phi_defined else None,
    }


def point_record(s: shapemap.ShapeCoords, label: str | None = None) -> dict:
    rec = {"label": label} if label is not None else {}
    rec.update(shape_record(s))
    rec["xyz"] = [_f(c) for c in shapemap.embed(s)]
    return rec


def _nearest_label(s: shapemap.ShapeCoords, tol: float = 1e-9) -> str | None:
    v = shapemap.embed(s)
    for name, p in shapemap.special_points().items():
        if np.linalg.norm(v - shapemap.embed(p)) < tol:
            return name
    return None


def classify_record(tri: PlanarTriangle, alpha: float | None = None) -> dict:
    kind = euclid.degeneracy(tri)
    if kind.kind in ("binary_collision", "triple_collision"):
        raise DegenerateTriangleError(f"angles undefined: {kind.kind}", kind.kind, kind.pair)
    angles = euclid.vertex_angles(tri)
    top = euclid.max_angle(angles)
    rec = {
        "vertices": [[_f(c) for c in tri.vertex(lab)] for lab in euclid.LABELS],
        "degeneracy": kind.kind,
        "angles": {lab: _f(angles[lab]) for lab in euclid.LABELS},
        "angles_deg": {lab: _f(math.degrees(angles[lab])) for lab in euclid.LABELS},
        "alpha_max": _f(top.value),
        "alpha_max_deg": _f(math.degrees(top.value)),
        "alpha_max_vertices": list(top.vertices),
        "equilateral": len(top.vertices) == 3,
        "right": euclid.classify_alpha(angles, math.pi / 2).value,
        "fermat": euclid.classify_fermat(angles).value,
    }
    if alpha is not None:
        rec["alpha"] = _f(alpha)
        rec["alpha_deg"] = _f(math.degrees(alpha))
        rec["alpha_class"] = euclid.classify_alpha(angles, alpha).value
    if kind.kind == "nondegenerate":
        fp = euclid.fermat_point(tri)
        rec["fermat_point"] = {
            "point": [_f(fp.point[0]), _f(fp.point[1])],
            "total_distance": _f(fp.total_distance),
            "location": fp.location,
            "vertex": fp.vertex,
        }
    else:
        rec["fermat_point"] = None
    rec["shape"] = {str(k): shape_record(shapemap.shape_coords(tri, k)) for k in shapemap.CLUSTERS}
    return rec


def contour_record(c: flow.MaxAngleContour) -> dict:
    arcs = []
    limits = {n: shapemap.embed(p) for n, p in shapemap.special_points().items() if n.startswith("B")}
    for i, arc in enumerate(c.arcs):
        ends = []
        if c.excluded_limit_points and not arc.closed:
            xyz = arc.xyz
            for end in (xyz[0], xyz[-1]):
                ends.append(min(limits, key=lambda n: float(np.linalg.norm(end - limits[n]))))
        arcs.append({
            "arc_id": i,
            "cluster": arc.cluster,
            "hemisphere": arc.hemisphere,
            "closed": arc.closed,
            "limit_endpoints": ends,
            "n": len(arc),
            "theta": [_f(t) for t in arc.theta],
            "phi": [_f(p) for p in arc.phi],
        })
    stationary = flow.stationary_points(c) if c.arcs else None
    return {
        "alpha": _f(c.alpha),
        "alpha_deg": _f(math.degrees(c.alpha)),
        "regime": c.regime,
        "arcs": arcs,
        "cusps": [point_record(p) for p in c.cusps],
        "excluded_limit_points": [point_record(p, _nearest_label(p)) for p in c.excluded_limit_points],
        "intersections": [point_record(p, _nearest_label(p)) for p in c.intersections],
        "stationary_points": [point_record(p) for p in stationary.points],
        "stationary_degenerate": stationary.degenerate,
    }


def contour_csv(c: flow.MaxAngleContour) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for i, arc in enumerate(c.arcs):
        for t, p, v in zip(arc.theta, arc.phi, arc.xyz):
            w.writerow([i, arc.cluster, arc.hemisphere, repr(float(t)), repr(float(p))] + [repr(float(x)) for x in v])
    return buf.getvalue()


def dumps(obj, indent=2) -> str:
    return json.dumps(obj, indent=indent, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> str:
    if (args.vertices is None) == (args.sides is None):
        raise UsageError("give exactly one of --vertices or --sides")
    if args.vertices is not None:
        tri = PlanarTriangle(*(parse_point(v) for v in args.vertices))
    else:
        tri = triangle_from_sides(*args.sides)
    alpha = parse_angle(args.alpha) if args.alpha is not None else None
    if alpha is not None and not (math.pi / 3 - euclid.ANGLE_TOL <= alpha <= math.pi + euclid.ANGLE_TOL):
        raise UsageError(f"alpha must lie in [60deg, 180deg], got {args.alpha}")
    return dumps(classify_record(tri, alpha))


def _contour(args) -> flow.MaxAngleContour:
    alpha = parse_angle(args.alpha)
    if not (math.pi / 3 - euclid.ANGLE_TOL <= alpha <= math.pi + euclid.ANGLE_TOL):
        raise UsageError(f"contour needs alpha in [60deg, 180deg], got {args.alpha}")
    if args.resolution < 2:
        raise UsageError("resolution must be at least 2")
    return flow.assemble_max_angle_contour(alpha, args.resolution)


def cmd_contour(args) -> str:
    c = _contour(args)
    if args.format == "csv":
        return contour_csv(c)
    if args.format == "svg":
        return figure.render([c], parse_view(args.view), args.width, args.height)
    # polylines are long; keep them on one line
    return dumps(contour_record(c), indent=None)


def cmd_flow_svg(args) -> str:
    if args.alpha is None:
        alphas = [math.radians(d) for d in figure.DEFAULT_ALPHAS_DEG]
    else:
        alphas = parse_angle_list(args.alpha)
    for a in alphas:
        if not (math.pi / 3 - euclid.ANGLE_TOL <= a <= math.pi + euclid.ANGLE_TOL):
            raise UsageError(f"every alpha must lie in [60deg, 180deg], got {a}")
    if args.width <= 0 or args.height <= 0:
        raise UsageError("width and height must be positive")
    return figure.flow_figure(alphas, parse_view(args.view), args.width, args.height, args.resolution)


def _mc_config(args, n=None) -> montecarlo.McConfig:
    try:
        return montecarlo.McConfig(n=n or args.n, seed=_seed(args), workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_prob(args) -> str:
    alpha = parse_angle(args.alpha)
    method = PROB_METHODS[args.method]
    cfg = _mc_config(args) if method == measure.MONTE_CARLO else None
    try:
        r = measure.prob_alpha_obtuse(alpha, method, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rec = {
        "alpha": _f(alpha),
        "alpha_deg": _f(math.degrees(alpha)),
        "method": r.method,
        "p": _f(r.p),
        "error_estimate": _f(r.error_estimate),
    }
    if method == measure.MONTE_CARLO:
        rec.update({"stderr": _f(r.error_estimate), "n": r.n, "seed": r.seed})
    return dumps(rec)


def _row(quantity, paper, computed, method, status, tol=None, note=""):
    return {
        "quantity": quantity,
        "paper_value": paper,
        "computed": _f(computed),
        "method": method,
        "tolerance": tol,
        "status": status,
        "note": note,
    }


def _check(quantity, paper, computed, method, tol, note=""):
    status = "pass" if abs(computed - paper) <= tol else "fail"
    return _row(quantity, paper, computed, method, status, tol, note)


def paper_check_report(cfg: montecarlo.McConfig) -> dict:
    fermat = 2.0 * math.pi / 3.0
    rows = [
        _check("Prob(obtuse)", PAPER_OBTUSE, measure.prob_obtuse().p, measure.CAP, 1e-12),
        _check("Prob(acute)", PAPER_ACUTE, measure.prob_acute().p, measure.CAP, 1e-12),
        _check("Prob(obtuse)", PAPER_OBTUSE, measure.prob_alpha_obtuse(math.pi / 2).p, measure.REGION, 1e-9),
    ]
    lit = measure.paper_literal_area(fermat)
    p_lit = 3.0 * lit.value / measure.SPHERE_AREA
    rows += [
        _check("Fermat area, printed integral", PAPER_FERMAT_AREA, lit.value, measure.LITERAL, 1e-3),
        _check("Prob(Fermat-obtuse), printed integral", PAPER_FERMAT_OBTUSE, p_lit, measure.LITERAL, 5e-4),
        _check("Prob(Fermat-acute), printed integral", PAPER_FERMAT_ACUTE, 1.0 - p_lit, measure.LITERAL, 5e-4),
    ]
    region = measure.prob_alpha_obtuse(fermat, measure.REGION)
    est = montecarlo.estimate(montecarlo.fermat_obtuse(), cfg)
    z = (region.p - est.p_hat) / est.stderr
    agree = abs(z) <= 3.0
    rows += [
        _row("Prob(Fermat-obtuse), region", PAPER_FERMAT_OBTUSE, region.p, measure.REGION, "flagged",
             note=f"differs from the printed value by {region.p - PAPER_FERMAT_OBTUSE:+.4f}"),
        _row("Prob(Fermat-obtuse), Monte Carlo", PAPER_FERMAT_OBTUSE, est.p_hat, measure.MONTE_CARLO, "flagged",
             note=(f"n={est.n} seed={est.seed} stderr={est.stderr:.2e}; region vs MC z={z:+.2f} "
                   f"({'agree' if agree else 'DISAGREE'} within 3 sigma)")),
    ]
    return {
        "rows": rows,
        "adjudication": {
            "region_p": _f(region.p),
            "mc_p": _f(est.p_hat),
            "mc_stderr": _f(est.stderr),
            "z": _f(z),
            "agree_3sigma": agree,
        },
        "open_question": OPEN_QUESTION,
        "ok": all(r["status"] != "fail" for r in rows),
    }


def report_table(report: dict) -> str:
    head = f"{'quantity':<40} {'paper':>8} {'computed':>12} {'method':<24} status"
    out = [head, "-" * len(head)]
    for r in report["rows"]:
        out.append(f"{r['quantity']:<40} {r['paper_value']:>8.4f} {r['computed']:>12.8f} {r['method']:<24} {r['status']}")
        if r["note"]:
            out.append(f"{'':<40}   {r['note']}")
    out.append("")
    out.append(report["open_question"])
    return "\n".join(out) + "\n"


def cmd_paper_check(args):
    report = paper_check_report(_mc_config(args))
    text = dumps(report) if args.format == "json" else report_table(report) + "\n" + dumps(report)
    return text, (0 if report["ok"] else 1)


def cmd_special_points(args) -> str:
    return dumps({name: point_record(s) for name, s in shapemap.special_points().items()})


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shapesphere", description="Maximal-angle geometry on the triangle shape sphere.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_out(sp, formats=None, default=None):
        if formats:
            sp.add_argument("--format", choices=formats, default=default or formats[0])
        sp.add_argument("--out", help="write to this file instead of stdout")

    def add_mc(sp, n=1_000_000):
        sp.add_argument("--n", type=int, default=n, help="Monte Carlo sample count")
        sp.add_argument("--seed", type=int, default=None, help=f"64-bit seed (default 0, or ${SEED_ENV})")
        sp.add_argument("--workers", type=int, default=1, help="threads; the result does not depend on it")

    def add_svg(sp):
        sp.add_argument("--view", default="0,1,0", help="view axis x,y,z or a special shape name (default E)")
        sp.add_argument("--width", type=int, default=600)
        sp.add_argument("--height", type=int, default=600)

    sp = sub.add_parser("classify", help="angles, classes and shape coordinates of one triangle")
    # vertex pairs such as -1,0 must not be mistaken for options
    sp._negative_number_matcher = re.compile(r"^-\d*\.?\d+([eE][-+]?\d+)?(,[-+]?[\d.eE+-]*)?$")
    sp.add_argument("--vertices", nargs=3, metavar="X,Y", help="vertices A B C")
    sp.add_argument("--sides", nargs=3, type=float, metavar="L", help="side lengths |BC| |CA| |AB|")
    sp.add_argument("--alpha", help="optional threshold for an alpha classification")
    add_out(sp, ["json"])
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("contour", help="the level set alpha_max = alpha")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--resolution", type=int, default=flow.DEFAULT_SAMPLES, help="samples per arc")
    add_out(sp, ["json", "csv", "svg"])
    add_svg(sp)
    sp.set_defaults(func=cmd_contour)

    sp = sub.add_parser("flow-svg", help="several contours in one orthographic figure")
    sp.add_argument("--alpha", default=None, help="comma-separated list (default 75deg,90deg,105deg,120deg,150deg)")
    sp.add_argument("--resolution", type=int, default=256, help="samples per arc")
    add_out(sp, ["svg"])
    add_svg(sp)
    sp.set_defaults(func=cmd_flow_svg)

    sp = sub.add_parser("prob", help="Prob(alpha_max >= alpha) under the uniform shape measure")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--method", choices=list(PROB_METHODS), default="region")
    add_mc(sp)
    add_out(sp, ["json"])
    sp.set_defaults(func=cmd_prob)

    sp = sub.add_parser("paper-check", help="reproduce the published probabilities")
    add_mc(sp)
    add_out(sp, ["table", "json"])
    sp.set_defaults(func=cmd_paper_check)

    sp = sub.add_parser("special-points", help="catalogue of E, Ebar, U(k), B(k), H(k)")
    add_out(sp, ["json"])
    sp.set_defaults(func=cmd_special_points)
    return p


def _error(error_type: str, message: str, **extra) -> str:
    body = {"type": error_type, "message": message}
    body.update(extra)
    return dumps({"error": body})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
        code = 0
        if isinstance(result, tuple):
            result, code = result
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(result)
        else:
            sys.stdout.write(result)
        return code
    except UsageError as exc:
        sys.stdout.write(_error("usage", str(exc)))
    except DegenerateTriangleError as exc:
        sys.stdout.write(_error("degenerate_triangle", str(exc), kind=exc.kind, pair=exc.pair))
    except ValueError as exc:
        sys.stdout.write(_error("domain", str(exc)))
    except (QuadratureError, OSError) as exc:
        sys.stderr.write(f"shapesphere: {exc}\n")
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
