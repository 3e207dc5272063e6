"""Command-line front end.

Tables go to stdout as TSV, structured reports as JSON, diagnostics to
stderr.  Exit status: 0 success, 1 a verification band failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bass import build_bass
from .cycles import count_table
from .errors import NonCommutingError, SingularPointError, ZetaError
from .graph import load_graph, validate
from .pgt import asymptotic_check, pgt_fit
from .spectral import decompose, verify_pf
from .translations import (
    joint_spectrum,
    parse_family,
    verify_building_pgt,
    zeta_multivariate,
)
from .zeta import log_derivative_series, zeta


class InputError(Exception):
    pass


def fmt(x) -> str:
    """Stable number formatting: Fractions verbatim, floats to 12 significant digits."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        if x.imag == 0:
            return fmt(x.real)
        return f"{fmt(x.real)}{'+' if x.imag >= 0 else '-'}{fmt(abs(x.imag))}j"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x == 0:
        x = 0.0
    return f"{x:.12g}"


def _snap(q: complex, ref: float, rel: float = 1e-9) -> complex:
    """Drop roundoff-level parts of a computed sum for stable printing."""
    tol = rel * (1 + abs(ref))
    re = 0.0 if abs(q.real) < tol else q.real
    im = 0.0 if abs(q.imag) < tol else q.imag
    return complex(re, im)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [float(x.real), float(x.imag)]
    return float(x)


def _dump(obj, out):
    out.write(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _load_graph(path):
    try:
        return load_graph(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_family(path, exact):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_family(fh.read(), exact=exact)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except NonCommutingError as exc:
        raise InputError(str(exc)) from None


def _complex_list(text):
    try:
        return [complex(part.strip().replace(" ", "")) for part in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse complex coordinates from {text!r}") from None


# --- verbs -----------------------------------------------------------------

def cmd_validate(args, out):
    report = validate(_load_graph(args.input))
    _dump(report.to_dict(), out)
    return 0 if report.ok else 1


def cmd_counts(args, out):
    g = _load_graph(args.input)
    exact = args.rational and g.is_rational()
    table = count_table(g, args.max_len, exact=exact, workers=args.threads)
    out.write("m\tN_m\ttheta\tpsi\tpi\n")
    for row in table.rows():
        out.write("\t".join(fmt(x) for x in row) + "\n")
    return 0


def cmd_zeta(args, out):
    g = _load_graph(args.input)
    z = zeta(g, exact=args.rational and g.is_rational())
    out.write("coefficients: " + " ".join(fmt(c) for c in z.inverse_poly) + "\n")
    if args.series:
        out.write("series: " + " ".join(fmt(x) for x in log_derivative_series(z, args.series)) + "\n")
    if args.eval is not None:
        parts = [p for p in args.eval.split(",")]
        try:
            u = complex(float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0)
        except ValueError:
            raise InputError(f"cannot parse --eval {args.eval!r}; expected re,im") from None
        try:
            value = z(u)
        except SingularPointError as exc:
            raise InputError(str(exc)) from None
        out.write(f"Z({fmt(u)}) = {fmt(value)}\n")
    return 0


def cmd_decompose(args, out):
    T = build_bass(_load_graph(args.input))
    dec = decompose(T)
    blocks = []
    ok = dec.prefix_invariant()
    for b in dec.blocks:
        entry = {
            "edges": list(b.indices),
            "radius": float(fmt(b.radius)),
            "irreducible": b.irreducible,
            "sub_radius": b.sub_radius,
            "pf": None,
        }
        if b.irreducible and b.radius > 0:
            rep = verify_pf(b.matrix)
            d = rep.to_dict()
            d["radius"] = float(fmt(d["radius"]))
            d["peripheral"] = [[float(fmt(a)), float(fmt(c))] for a, c in d["peripheral"]]
            entry["pf"] = d
            entry["period"] = rep.combinatorial_period
            ok = ok and rep.ok
        blocks.append(entry)
    _dump({"radius": float(fmt(dec.radius)), "prefix_invariant": dec.prefix_invariant(),
           "blocks": blocks}, out)
    return 0 if ok else 1


def cmd_pgt(args, out):
    g = _load_graph(args.input)
    exact = args.rational and g.is_rational()
    fit = pgt_fit(g, args.max_len, exact=exact)
    p = fit.params
    lines = [("r", p.r), ("s", p.s)]
    lines += [(f"n{i}", n) for i, n in enumerate(p.periods, start=1)]
    lines += [("K", p.K), ("C", p.C if p.C is not None else "undefined (r <= 1)"),
              ("eps_gap", p.eps_gap), ("fit_constant", fit.constant),
              ("fit_passed", str(fit.passed).lower())]
    for key, val in lines:
        out.write(f"{key}\t{val if isinstance(val, str) else fmt(val)}\n")
    ok = fit.passed
    if p.r > 1:
        table = asymptotic_check(g, args.max_len, exact=exact)
        out.write("\nn\tm\tpsi_ratio\ttheta_ratio\tpi_ratio\tC\tpsi_band\n")
        for row in table.rows:
            out.write("\t".join(fmt(x) for x in (row.n, row.m, row.psi_ratio, row.theta_ratio,
                                                 row.pi_ratio, table.C, row.psi_band)) + "\n")
        if not table.psi_within_band:
            print("psi ratio left its band", file=sys.stderr)
        if not table.pi_within_band:
            print("pi ratio is more than 20% from C at the last row", file=sys.stderr)
        ok = ok and table.passed
    else:
        print("asymptotic table skipped: needs r > 1", file=sys.stderr)
    return 0 if ok else 1


def cmd_building(args, out):
    fam = _load_family(args.input, args.rational)
    if args.sub == "check":
        _dump({
            "d": fam.d,
            "dim": fam.dim,
            "commuting": True,
            "lattice_index": fam.lattice.index,
            "periods": list(fam.lattice.periods),
            "residues": [list(r) for r in fam.lattice.residues()],
            "radii": [float(fmt(r)) for r in fam.radii],
        }, out)
        return 0
    qchars = joint_spectrum(fam, exact=True if args.rational else None)
    if args.sub == "spectrum":
        out.write("mult\t" + "\t".join(f"z{j + 1}" for j in range(fam.d)) + "\n")
        for q in qchars:
            out.write(f"{q.mult}\t" + "\t".join(fmt(z) for z in q.z) + "\n")
        return 0
    if args.sub == "nk":
        rep = verify_building_pgt(fam, args.kmax, qchars)
        out.write("k\tN\tquasicharacter_sum\n")
        for k, N, q in rep.rows:
            out.write(f"{','.join(map(str, k))}\t{fmt(N)}\t{fmt(_snap(q, N))}\n")
        return 0 if rep.passed else 1
    if args.sub == "zeta":
        u = _complex_list(args.u)
        if len(u) != fam.d:
            raise InputError(f"--u needs {fam.d} coordinates, got {len(u)}")
        try:
            ev = zeta_multivariate(fam, u, qchars)
        except SingularPointError as exc:
            raise InputError(str(exc)) from None
        out.write(f"rational\t{fmt(ev.rational)}\n")
        out.write(f"quasicharacter\t{fmt(_snap(ev.quasicharacter, abs(ev.rational), 1e-12))}\n")
        out.write(f"series\t{fmt(ev.series) if ev.series is not None else 'skipped'}\n")
        out.write(f"deviation\t{fmt(ev.deviation)}\n")
        return 0 if ev.deviation <= 1e-8 * (1 + abs(ev.rational)) else 1
    raise InputError(f"unknown building subcommand {args.sub!r}")


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rational", action="store_true",
                        help="exact rational arithmetic where supported")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for cycle enumeration (default 1)")

    parser = argparse.ArgumentParser(
        prog="weighted-zeta",
        description="Weighted Ihara zeta functions and prime geodesic counts.",
    )
    sub = parser.add_subparsers(dest="verb", metavar="VERB", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a graph file")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("counts", parents=[common], help="cycle counting table (TSV)")
    p.add_argument("input")
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("zeta", parents=[common], help="coefficients of 1/Z(u)")
    p.add_argument("input")
    p.add_argument("--series", type=int, metavar="M", help="print N_1..N_M from u Z'/Z")
    p.add_argument("--eval", metavar="RE,IM", help="evaluate Z at a complex point")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("decompose", parents=[common], help="block decomposition + PF checks (JSON)")
    p.add_argument("input")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pgt", parents=[common], help="prime geodesic parameters and table")
    p.add_argument("input")
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=cmd_pgt)

    p = sub.add_parser("building", help="translation-family tools")
    bsub = p.add_subparsers(dest="sub", metavar="SUB", required=True)
    for name, helptext in [("check", "validate a family"), ("spectrum", "quasicharacters"),
                           ("nk", "N(k) against the quasicharacter sum"),
                           ("zeta", "evaluate Z(u)")]:
        q = bsub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("input")
        if name == "nk":
            q.add_argument("--kmax", type=int, required=True)
        if name == "zeta":
            q.add_argument("--u", required=True, metavar="U1,U2,...",
                           help="comma-separated complex coordinates, e.g. 0.1,0.2+0.1j")
    p.set_defaults(func=cmd_building)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except (InputError, ZetaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
