"""Command-line front end.

    bfwaves critical-depth
    bfwaves coeffs --h-range 0.5:5:10
    bfwaves figure8 --h 2 --eps 0.01 --out fig8.csv
    bfwaves validate

Exit status: 0 on success, 1 on computation or regime errors, 2 on bad configuration.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import json
import sys

import numpy as np

from . import __version__
from .coeffs import DomainError, RegimeError, critical_depth, depth_coefficients
from .kato import reduce_operator
from .operator import assemble_L, full_spectrum
from .reduction import DecouplingError, SingularSylvesterError, run_pipeline
from .spectrum import ClusterAmbiguityError, figure8, match_spectrum, predict_eigenvalues, unstable_band
from .stokes import ConvergenceError, coefficient_functions, stokes_expansion, traveling_residual


class ConfigError(ValueError):
    """Invalid command-line or config-file settings."""


COMPUTE_ERRORS = (RegimeError, ConvergenceError, ClusterAmbiguityError, DecouplingError,
                  SingularSylvesterError, ArithmeticError, RuntimeError, np.linalg.LinAlgError)


def fmt(x):
    return format(float(x) + 0.0, ".17g")


def parse_range(text):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError as exc:
        raise ConfigError(f"range must look like a:b:n, got {text!r}") from exc
    if n < 1:
        raise ConfigError("range must contain at least one point")
    return np.linspace(a, b, n)


def parse_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def read_config(path):
    """Line-based key=value file; keys are flag names without dashes."""
    out = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


class Output:
    """Collects a table and writes it as CSV (with provenance) or JSON."""

    def __init__(self, args, command):
        self.path = args.out
        self.format = args.format
        self.provenance = f"bfwaves {__version__} {command} " + " ".join(
            f"{k}={v}" for k, v in sorted(vars(args).items())
            if k not in ("func", "out", "format", "command") and v is not None)

    def table(self, columns, rows):
        if self.format == "json":
            text = json.dumps(dict(provenance=self.provenance, columns=columns,
                                   rows=[[self._json(v) for v in r] for r in rows]), indent=1)
        else:
            lines = [f"# {self.provenance}", ",".join(columns)]
            lines += [",".join(self._csv(v) for v in r) for r in rows]
            text = "\n".join(lines)
        self._write(text + "\n")

    def document(self, payload):
        payload = dict(provenance=self.provenance, **payload)
        self._write(json.dumps(payload, indent=1) + "\n")

    @staticmethod
    def _csv(v):
        if v is None:
            return ""
        if isinstance(v, str):
            return v
        return fmt(v)

    @staticmethod
    def _json(v):
        if v is None or isinstance(v, str):
            return v
        return float(v)

    def _write(self, text):
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def depth_grid(args):
    if args.h_range:
        return parse_range(args.h_range)
    return [args.h if args.h is not None else 2.0]


def cmd_coeffs(args, out):
    rows = []
    names = None
    for h in depth_grid(args):
        d = depth_coefficients(h).as_dict()
        names = list(d)
        rows.append([d[k] for k in names])
    out.table(names, rows)


def cmd_critical_depth(args, out):
    h = critical_depth(tol=args.tol or 1e-12)
    if args.out:
        out.table(["h_WB"], [[h]])
    print(fmt(h))


def cmd_stokes(args, out):
    h, eps, M = args.h or 2.0, args.eps if args.eps is not None else 0.01, args.modes
    st = stokes_expansion(h, M)
    cf = coefficient_functions(h, eps, M)
    rows = [
        ["c_h", st.c0], ["c_2", st.c2], ["eta2_0", st.eta2_0], ["eta2_2", st.eta2_2],
        ["psi2_2", st.psi2_2], ["f_eps", cf.f_eps], ["residual", traveling_residual(h, eps, M)],
        ["p_cos1_numeric", cf.p_eps.cos_coeff(1)], ["p_cos1_leading", cf.p1_1 * eps],
        ["a_cos1_numeric", cf.a_eps.cos_coeff(1)], ["a_cos1_leading", cf.a1_1 * eps],
        ["p_cos2_numeric", cf.p_eps.cos_coeff(2)], ["p_cos2_leading", cf.p2_2 * eps**2],
        ["a_cos2_numeric", cf.a_eps.cos_coeff(2)], ["a_cos2_leading", cf.a2_2 * eps**2],
    ]
    out.table(["quantity", "value"], rows)
    if args.dump_fields:
        with open(args.dump_fields, "w") as fh:
            fh.write(f"# {out.provenance}\nfield,mode,re,im\n")
            for name, f in (("p_eps", cf.p_eps), ("a_eps", cf.a_eps), ("p_frak", cf.conformal.p_frak)):
                for k, z in zip(f.modes, f.coeffs):
                    fh.write(f"{name},{k},{fmt(z.real)},{fmt(z.imag)}\n")


def cmd_spectrum(args, out):
    h, eps, mu, M = args.h or 2.0, args.eps or 0.0, args.mu or 0.0, args.modes
    cf = coefficient_functions(h, eps, M)
    L = assemble_L(h, eps, mu, M, cf)
    ev = full_spectrum(L)
    report = match_spectrum(ev, predict_eigenvalues(h, mu, eps))
    cluster = set(np.round(report.quadruple, 14))
    rows = [[z.real, z.imag, int(np.round(z, 14) in cluster)] for z in ev]
    out.table(["re", "im", "cluster_flag"], rows)
    for z, p in zip(report.paired, report.prediction.quadruple()):
        print(f"# quadruple {fmt(z.real)} {fmt(z.imag)} predicted {fmt(p.real)} {fmt(p.imag)}",
              file=sys.stderr)
    if args.dump_matrix:
        with open(args.dump_matrix, "w") as fh:
            fh.write(f"# {out.provenance}\nrow,col,re,im\n")
            for (i, j), z in np.ndenumerate(L.entries):
                if z != 0:
                    fh.write(f"{i},{j},{fmt(z.real)},{fmt(z.imag)}\n")


def cmd_figure8(args, out):
    h, eps = args.h or 2.0, args.eps if args.eps is not None else 0.01
    rows = figure8(h, eps, args.samples)
    out.table(["mu", "re_plus", "im_plus", "re_minus", "im_minus"], rows)


def _band_row(task):
    h, eps, M, tol = task
    return [eps, unstable_band(h, eps, "analytic"), unstable_band(h, eps, "numeric", M, tol)]


def cmd_band(args, out):
    h = args.h or 2.0
    eps_values = parse_range(args.eps_range) if args.eps_range else parse_list(args.eps_list)
    tasks = [(h, e, args.modes, args.tol) for e in eps_values]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_band_row, tasks))
    else:
        rows = [_band_row(t) for t in tasks]
    out.table(["eps", "mu_bar_analytic", "mu_bar_numeric"], rows)


def cmd_reduce(args, out):
    h, eps, mu, M = args.h or 2.0, args.eps or 0.01, args.mu or 0.01, args.modes
    kr = reduce_operator(h, eps, mu, M)
    st = run_pipeline(kr.quadruple, tol=args.tol or 1e-12)
    stages = dict(kato=st.kato, rescaled=st.rescaled, step=st.step, decoupled=st.pair.final)
    if args.format == "json":
        out.document(dict(stages={k: v.to_dict() for k, v in stages.items()},
                          X=[[[z.real, z.imag] for z in r] for r in st.X],
                          pair=st.pair.to_dict()))
        return
    rows = []
    for name, q in stages.items():
        for (i, j), z in np.ndenumerate(q.B4):
            rows.append([name, i, j, z.real, z.imag])
    for name, A in (("U_block", st.pair.U_block), ("S_block", st.pair.S_block)):
        for (i, j), z in np.ndenumerate(A):
            rows.append([name, i, j, z.real, z.imag])
    out.table(["stage", "row", "col", "re", "im"], rows)


def cmd_validate(args, out):
    from .validation import run_all
    results = run_all()
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


COMMANDS = {
    "coeffs": cmd_coeffs, "critical-depth": cmd_critical_depth, "stokes": cmd_stokes,
    "spectrum": cmd_spectrum, "figure8": cmd_figure8, "band": cmd_band,
    "reduce": cmd_reduce, "validate": cmd_validate,
}


def build_parser():
    p = argparse.ArgumentParser(prog="bfwaves", description="Benjamin-Feir instability over finite depth")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("--config", help="key=value file with default flag values")
    p.add_argument("--h", type=float)
    p.add_argument("--h-range", help="a:b:n")
    p.add_argument("--eps", type=float)
    p.add_argument("--eps-range", help="a:b:n (band)")
    p.add_argument("--eps-list", default="0.02,0.01,0.005", help="comma-separated (band)")
    p.add_argument("--mu", type=float)
    p.add_argument("--modes", type=int, default=32, help="Fourier truncation M")
    p.add_argument("--samples", type=int, default=201, help="figure8 samples per branch")
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float)
    p.add_argument("--dump-matrix", help="write the operator matrix as (row, col, re, im)")
    p.add_argument("--dump-fields", help="write p_eps, a_eps and the conformal shift as (mode, re, im)")
    return p


def parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = parser.parse_args([args.command])
        for k, v in read_config(args.config).items():
            if not hasattr(args, k):
                raise ConfigError(f"unknown config key {k!r}")
            if getattr(args, k) == getattr(defaults, k):
                action = next(a for a in parser._actions if a.dest == k)
                setattr(args, k, action.type(v) if action.type else v)
    if not 8 <= args.modes <= 128:
        raise ConfigError("--modes must lie in [8, 128]")
    if args.jobs < 1:
        raise ConfigError("--jobs must be positive")
    if args.mu is not None and not 0 <= args.mu < 0.5:
        raise ConfigError("--mu must lie in [0, 1/2)")
    return args


def main(argv=None):
    try:
        args = parse(argv)
        status = COMMANDS[args.command](args, Output(args, args.command))
        return status or 0
    except (ConfigError, DomainError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except COMPUTE_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
