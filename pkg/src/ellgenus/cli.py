"""Command line front end: JSON in, machine-readable JSON report out.

Reports are deterministic for fixed inputs: fixed field order, fixed
summation order, no timestamps.  The JSON goes to stdout and a short human
summary to stderr (``--format text`` swaps in a plain-text report).

Exit codes: 0 ok, 2 input error, 3 pole, 4 grid exhaustion, 5 non-torsion.
"""

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from importlib import resources

import jsonschema

from .charclass import BundleSummand
from .elliptic import (
    CurvePoint,
    JacobiSine,
    Lattice,
    LatticeError,
    PoleError,
    TorsionError,
    epsilon_sign,
    sine_over_x,
)
from .genus import (
    FixedComponent,
    ManifoldFixedData,
    SpecialPointError,
    default_grid,
    genus_taylor,
    principal_part,
    rigidity_check,
    special_points,
)
from .series import (
    DEFAULT_ORDER,
    NilpotentAlgebra,
    SeriesError,
    TruncatedSeries,
    elementary_symmetric_expansion,
)
from .sheafmod import (
    assemble_sheaf_decomposition,
    divisor_degree,
    local_smith_exponents,
    s2n_restriction_matrix,
)
from .transfer import verify_transfer_lift

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_POLE = 3
EXIT_GRID = 4
EXIT_NONTORSION = 5


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def data_path(name):
    """Path to a bundled example input."""
    return resources.files("ellgenus").joinpath("data").joinpath(name)


def _load_schema():
    with resources.files("ellgenus").joinpath("data/schema.json").open("r") as fh:
        return json.load(fh)


def load_json_file(path):
    try:
        with open(path, "r") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(
            EXIT_INPUT, f"malformed JSON in {path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def validate_document(doc):
    try:
        jsonschema.validate(doc, _load_schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise CliError(EXIT_INPUT, f"schema violation at /{path}: {exc.message}") from None
    return doc


def _to_complex(value):
    if isinstance(value, (int, float)):
        return complex(value)
    return complex(value[0], value[1])


def parse_complex(text):
    """Accept '1.5', '0.3,0.1', or '0.3+0.1i' (i or j)."""
    text = text.strip()
    if "," in text:
        re_s, im_s = text.split(",", 1)
        return complex(float(Fraction(re_s)), float(Fraction(im_s)))
    normalized = text.replace("i", "j")
    try:
        return complex(normalized)
    except ValueError:
        raise CliError(EXIT_INPUT, f"cannot parse complex number {text!r}") from None


def parse_coordinates(text):
    """Lattice-basis coordinates 'a,b'; each part may be a fraction like 1/2."""
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError(EXIT_INPUT, f"expected coordinates 'a,b', got {text!r}")
    try:
        return float(Fraction(parts[0])), float(Fraction(parts[1]))
    except (ValueError, ZeroDivisionError):
        raise CliError(EXIT_INPUT, f"cannot parse coordinates {text!r}") from None


def _fmt_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def _fmt_series(s):
    return {
        "lowest_exponent": s.low,
        "coefficients": [_fmt_complex(c) for c in s.coeffs],
    }


def build_lattice(doc):
    if "lattice" in doc:
        doc = doc["lattice"]
    try:
        return Lattice(_to_complex(doc["omega1"]), _to_complex(doc["omega2"]))
    except KeyError as exc:
        raise CliError(EXIT_INPUT, f"lattice document missing {exc}") from None
    except LatticeError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None


def build_manifold(doc):
    man = doc.get("manifold")
    if man is None:
        raise CliError(EXIT_INPUT, "input document has no manifold section")
    components = []
    for comp in man["components"]:
        if comp.get("algebra") is not None:
            a = comp["algebra"]
            n = len(a["degrees"])
            table = [
                [[_to_complex(c) for c in a["mult_table"][i][j]] for j in range(n)]
                for i in range(n)
            ]
            top = a.get("top_functional")
            top = [_to_complex(c) for c in top] if top is not None else None
            try:
                algebra = NilpotentAlgebra(a["degrees"], table, top_functional=top)
            except ValueError as exc:
                raise CliError(EXIT_INPUT, f"component {comp['name']!r}: {exc}") from None
        else:
            algebra = NilpotentAlgebra.trivial()
        roots_doc = comp.get("chern_roots")
        summands = []
        for idx, m in enumerate(comp["rotation_numbers"]):
            root = None
            if roots_doc is not None and roots_doc[idx] is not None:
                root = algebra.element([_to_complex(c) for c in roots_doc[idx]])
            summands.append(BundleSummand(m, root))
        try:
            components.append(
                FixedComponent(
                    comp["name"],
                    tuple(summands),
                    algebra,
                    comp.get("orientation_sign", 1),
                )
            )
        except ValueError as exc:
            raise CliError(EXIT_INPUT, f"component {comp['name']!r}: {exc}") from None
    try:
        return ManifoldFixedData(
            tuple(components), man["dimension"], man.get("declared_spin", False)
        )
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None


def _digest(*objects):
    payload = json.dumps(objects, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(payload.encode()).hexdigest()


def _report(command, digest, options, results, warnings):
    return {
        "command": command,
        "input_digest": digest,
        "options": options,
        "results": results,
        "warnings": warnings,
    }


def _emit(report, fmt, summary_lines):
    if fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
        for line in summary_lines:
            sys.stderr.write(line + "\n")
    else:
        for line in summary_lines:
            sys.stdout.write(line + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_sine(args):
    doc = validate_document(load_json_file(args.lattice))
    lattice = build_lattice(doc)
    sine = JacobiSine(lattice)
    results = {}
    warnings = []
    summary = []
    if args.eval is not None:
        z = parse_complex(args.eval)
        try:
            value = sine.eval(z)
        except PoleError:
            raise CliError(EXIT_POLE, f"pole: {args.eval} is within 1e-10 of a pole")
        results["eval"] = {"z": _fmt_complex(z), "value": _fmt_complex(value)}
        summary.append(f"s({z}) = {value}")
    if args.taylor is not None:
        series = sine.taylor(args.taylor)
        results["taylor"] = _fmt_series(series)
        summary.append(f"taylor coefficients up to order {args.taylor}")
    if args.check_periods:
        import math

        checks = {}
        w1, w2 = lattice.omega1, lattice.omega2
        pts = [lattice.from_coordinates(0.1 + 0.04 * k, 0.21 + 0.07 * k) for k in range(10)]
        checks["odd"] = max(abs(sine.eval(z) + sine.eval(-z)) for z in pts)
        checks["period_omega1"] = max(abs(sine.eval(z + w1) - sine.eval(z)) for z in pts)
        checks["antiperiod_omega2"] = max(abs(sine.eval(z + w2) + sine.eval(z)) for z in pts)
        a = sine.half_period_constant()
        checks["half_period_constant"] = _fmt_complex(a)
        results["checks"] = {
            k: (v if isinstance(v, list) else float(v)) for k, v in checks.items()
        }
        summary.append("period checks done")
    if not results:
        raise CliError(EXIT_INPUT, "nothing to do: pass --eval, --taylor or --check-periods")
    digest = _digest(doc, vars(args)["eval"], args.taylor, args.check_periods)
    report = _report(
        "sine",
        digest,
        {"taylor": args.taylor, "check_periods": bool(args.check_periods)},
        results,
        warnings,
    )
    return _emit(report, args.format, summary)


def cmd_genus(args):
    doc = validate_document(load_json_file(args.input))
    lattice = build_lattice(doc)
    data = build_manifold(doc)
    sine = JacobiSine(lattice)
    options = doc.get("options", {})
    count = args.grid or options.get("grid_count", 20)
    tol = args.tolerance or options.get("tolerance", 1e-6)
    taylor_order = args.taylor if args.taylor is not None else options.get("truncation", 8)
    warnings = [
        f"advisory spin parity: component {name!r} has rotation-sum parity {p}"
        for name, p in data.spin_parity_report()
    ]
    if data.components:
        grid = default_grid(sine, data, count=count)
        try:
            report_data = rigidity_check(data, sine, grid=grid, tol=tol, taylor_order=taylor_order)
        except SpecialPointError as exc:
            raise CliError(EXIT_GRID, str(exc)) from None
        samples = [
            {"u": _fmt_complex(u), "value": _fmt_complex(v)} for u, v in report_data.samples
        ]
        for u, msg in report_data.excluded:
            warnings.append(f"excluded grid point {u}: {msg}")
        results = {
            "constant": report_data.constant,
            "max_deviation": report_data.max_deviation,
            "reference_value": _fmt_complex(report_data.reference_value),
            "samples": samples,
            "taylor": _fmt_series(report_data.taylor),
            "principal_part": [
                {"exponent": k, "coefficient": _fmt_complex(c)}
                for k, c in principal_part(report_data.taylor)
            ],
        }
        summary = [
            f"rigidity: constant={report_data.constant} "
            f"max_deviation={report_data.max_deviation:.3e} "
            f"reference={report_data.reference_value}"
        ]
    else:
        taylor = genus_taylor(data, taylor_order, sine)
        results = {
            "constant": True,
            "max_deviation": 0.0,
            "reference_value": _fmt_complex(0),
            "samples": [],
            "taylor": _fmt_series(taylor),
            "principal_part": [],
        }
        summary = ["empty fixed-point data: genus is identically 0"]
    digest = _digest(doc, count, tol, taylor_order)
    report = _report(
        "genus",
        digest,
        {"grid_count": count, "tolerance": tol, "taylor": taylor_order},
        results,
        warnings,
    )
    return _emit(report, args.format, summary)


def cmd_transfer(args):
    doc = validate_document(load_json_file(args.input))
    lattice = build_lattice(doc)
    data = build_manifold(doc)
    sine = JacobiSine(lattice)
    x, y = parse_coordinates(args.alpha)
    alpha = CurvePoint.from_coordinates(x, y, lattice)
    n = args.order
    if n is None:
        n = alpha.order(n_max=doc.get("options", {}).get("n_max", 64))
        if n is None:
            raise CliError(EXIT_NONTORSION, f"alpha = {args.alpha} is not torsion")
    try:
        epsilon = epsilon_sign(alpha, n=n)
    except TorsionError as exc:
        raise CliError(EXIT_NONTORSION, str(exc)) from None
    grid = default_grid(sine, data, count=args.grid)
    results = {"order": n, "epsilon": epsilon, "components": []}
    warnings = []
    summary = []
    for comp in data.components:
        try:
            cert = verify_transfer_lift(comp, alpha, grid, sine, n=n)
        except TorsionError as exc:
            raise CliError(EXIT_NONTORSION, str(exc)) from None
        except SpecialPointError as exc:
            raise CliError(EXIT_GRID, str(exc)) from None
        rs = cert.rotation_system
        for u, msg in cert.excluded:
            warnings.append(f"component {comp.name!r}: excluded {u}: {msg}")
        results["components"].append(
            {
                "name": comp.name,
                "sigma": cert.sigma,
                "epsilon": cert.epsilon,
                "max_mismatch": cert.max_mismatch,
                "index_sets": {
                    "I0": list(rs.i0),
                    "classes": {str(k): list(v) for k, v in sorted(rs.by_class.items())},
                    "I_half": list(rs.i_half),
                },
                "star_representatives": list(rs.m_star),
                "lhs_samples": [
                    {"u": _fmt_complex(u), "value": _fmt_complex(v)}
                    for u, v in cert.lhs_samples
                ],
                "rhs_samples": [
                    {"u": _fmt_complex(u), "value": _fmt_complex(v)}
                    for u, v in cert.rhs_samples
                ],
            }
        )
        summary.append(
            f"{comp.name}: sigma={cert.sigma} epsilon={cert.epsilon} "
            f"max_mismatch={cert.max_mismatch:.3e}"
        )
    digest = _digest(doc, args.alpha, n, args.grid)
    report = _report(
        "transfer", digest, {"alpha": args.alpha, "order": n, "grid_count": args.grid}, results, warnings
    )
    return _emit(report, args.format, summary)


def cmd_sheaf(args):
    if args.s2n < 1:
        raise CliError(EXIT_INPUT, "n must be at least 1")
    if args.lattice is not None:
        doc = validate_document(load_json_file(args.lattice))
    else:
        doc = {"lattice": {"omega1": [1.0, 0.0], "omega2": [0.0, 1.0]}}
    lattice = build_lattice(doc)
    deco = assemble_sheaf_decomposition(args.s2n, lattice)
    matrix_exponents = local_smith_exponents(s2n_restriction_matrix(args.s2n))
    abel = deco.abel_sum
    results = {
        "n": args.s2n,
        "restriction_matrix_exponents": list(matrix_exponents),
        "support_count": len(deco.divisor.points),
        "support": [
            {"coordinates": list(p.coords), "multiplicity": m}
            for p, m in deco.divisor.points
        ],
        "local_exponents": [list(deco.local_exponents[i]) for i in range(len(deco.divisor.points))],
        "divisor_degree": divisor_degree(deco.divisor),
        "degree_magnitude": deco.degree_magnitude,
        "abel_sum_coordinates": list(abel.coords),
        "twist_degree_by_divisor": deco.twist_degree_by_divisor,
        "twist_degree_dual": deco.twist_degree_dual,
        "free_ranks": list(deco.free_ranks),
    }
    summary = [
        f"s2({args.s2n}): support {len(deco.divisor.points)} points, "
        f"exponents {list(matrix_exponents)}, |degree| = {deco.degree_magnitude}"
    ]
    digest = _digest(doc, args.s2n)
    report = _report("sheaf", digest, {"s2n": args.s2n}, results, [])
    return _emit(report, args.format, summary)


def cmd_symfun(args):
    order = max(args.bound, DEFAULT_ORDER)
    if args.preset == "one-plus-x":
        q = TruncatedSeries(0, tuple([1, 1] + [0] * (order - 1)))
    elif args.preset == "geometric":
        q = TruncatedSeries(0, tuple([1, 1] + [0] * (order - 1))).inverse()
    elif args.preset == "sine-over-x":
        lattice_doc = (
            validate_document(load_json_file(args.lattice))
            if args.lattice
            else {"lattice": {"omega1": [1.0, 0.0], "omega2": [0.0, 1.0]}}
        )
        sine = JacobiSine(build_lattice(lattice_doc))
        q = sine_over_x(sine, order)
    elif args.coeffs:
        coeffs = [parse_complex(c) for c in args.coeffs.split(";")]
        coeffs += [0j] * (order + 1 - len(coeffs))
        q = TruncatedSeries(0, tuple(coeffs))
    else:
        raise CliError(EXIT_INPUT, "pass --preset or --coeffs")
    try:
        poly = elementary_symmetric_expansion(q, args.n, args.bound)
    except (SeriesError, ValueError) as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    terms = [
        {"exponents": list(key), "coefficient": _fmt_complex(c)}
        for key, c in sorted(poly.terms.items())
    ]
    results = {"n": args.n, "bound": args.bound, "terms": terms}
    digest = _digest(args.preset or args.coeffs, args.n, args.bound)
    report = _report(
        "symfun", digest, {"preset": args.preset, "n": args.n, "bound": args.bound}, results, []
    )
    return _emit(report, args.format, [f"{len(terms)} terms"])


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ellgenus",
        description="Jacobi-sine evaluation, equivariant elliptic genera, "
        "transfer certificates and local Smith data.",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sine", help="evaluate or expand the Jacobi sine")
    p.add_argument("--lattice", required=True, help="JSON file with omega1/omega2")
    p.add_argument("--eval", help="complex point, e.g. '0.3+0.1i' or '0.3,0.1'")
    p.add_argument("--taylor", type=int, help="Taylor order at the origin")
    p.add_argument("--check-periods", action="store_true")
    p.set_defaults(func=cmd_sine)

    p = sub.add_parser("genus", help="equivariant elliptic genus and rigidity verdict")
    p.add_argument("--input", required=True, help="JSON fixed-point data")
    p.add_argument("--grid", type=int, default=None, help="grid sample count")
    p.add_argument("--taylor", type=int, default=None, help="Laurent order at u=0")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--rigidity", action="store_true", help="kept for symmetry; the verdict is always computed")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("transfer", help="transfer lifting certificates at a torsion point")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", required=True, help="lattice coordinates 'a,b' (fractions allowed)")
    p.add_argument("--order", type=int, default=None, help="modulus n (defaults to the exact order)")
    p.add_argument("--grid", type=int, default=12)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("sheaf", help="rotation-sphere decomposition data")
    p.add_argument("--s2n", type=int, required=True, help="rotation multiplicity n")
    p.add_argument("--lattice", default=None)
    p.set_defaults(func=cmd_sheaf)

    p = sub.add_parser("symfun", help="elementary-symmetric expansion of a series")
    p.add_argument("--preset", choices=("one-plus-x", "geometric", "sine-over-x"))
    p.add_argument("--coeffs", help="semicolon-separated coefficients from exponent 0")
    p.add_argument("--lattice", default=None, help="lattice file for the sine preset")
    p.add_argument("-n", type=int, required=True, help="number of roots")
    p.add_argument("--bound", type=int, default=12)
    p.set_defaults(func=cmd_symfun)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except PoleError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_POLE
    except TorsionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NONTORSION
    except SpecialPointError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_GRID


if __name__ == "__main__":
    sys.exit(main())
