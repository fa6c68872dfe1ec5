"""Command-line front end.

Subcommands write CSV or JSON to ``--out`` (stdout by default) and a short
human summary to stderr. Exit status: 0 success, 1 usage or configuration
error, 2 failed verification.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import DunklError
from .operator_algebra import (
    Report,
    check_casimir,
    check_parabose,
    check_sd2_relations,
    sl12_casimir_check,
    symmetry_block,
)
from .overlaps import oracle_triangle, recurrence_residual
from .polykernel import MuParams
from .quadrature import antihermiticity_defect, gauss_rule, WeightKind
from .wavefunctions import (
    CartesianIndex,
    JacobiDunklIndex,
    PolarIndex,
    cartesian_indices_at_level,
    energy_cartesian,
    hermite_gaussian_poly,
    jacobi_dunkl_F,
    jacobi_dunkl_eigenvalue,
    polar_indices_at_level,
    psi_cartesian,
    psi_polar,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    mu_x: float = 0.3
    mu_y: float = 0.5
    level_max: int = 4
    quadrature_nodes: int = 64
    tolerance: float = 1e-10
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self):
        if not self.mu_x > -0.5 or not self.mu_y > -0.5:
            raise ConfigError(f"mu_x and mu_y must exceed -1/2, got ({self.mu_x}, {self.mu_y})")
        if self.level_max < 0:
            raise ConfigError(f"level_max must be >= 0, got {self.level_max}")
        if self.quadrature_nodes < 8:
            raise ConfigError(f"quadrature_nodes must be >= 8, got {self.quadrature_nodes}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"output_format must be csv or json, got {self.output_format!r}")

    @property
    def mu(self) -> MuParams:
        return MuParams(self.mu_x, self.mu_y)


# config-file keys and flag names both map onto RunConfig fields
_ALIASES = {
    "mu_x": "mu_x",
    "mu_y": "mu_y",
    "level_max": "level_max",
    "nodes": "quadrature_nodes",
    "quadrature_nodes": "quadrature_nodes",
    "tol": "tolerance",
    "tolerance": "tolerance",
    "format": "output_format",
    "output_format": "output_format",
    "out": "output_path",
    "output_path": "output_path",
}
_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, raw):
    kind = _TYPES[name]
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None
    return str(raw)


def read_config_file(path: str) -> dict:
    """Parse flat ``key = value`` lines (``#`` comments allowed) into RunConfig fields."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[run]\n" + fh.read(), source=path)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None
    out = {}
    for key, raw in parser["run"].items():
        name = _ALIASES.get(key.replace("-", "_"))
        if name is None:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        out[name] = _coerce(name, raw)
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    for flag in ("mu_x", "mu_y", "level_max", "nodes", "tol", "format", "out"):
        given = getattr(args, flag, None)
        if given is not None:
            values[_ALIASES[flag]] = given
    return replace(RunConfig(), **values) if values else RunConfig()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--mu-x", type=float, help="reflection parameter along x (> -1/2)")
    p.add_argument("--mu-y", type=float, help="reflection parameter along y (> -1/2)")
    p.add_argument("--level-max", type=int, help="highest energy level N")
    p.add_argument("--nodes", type=int, help="quadrature nodes per dimension")
    p.add_argument("--tol", type=float, help="verification tolerance")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--config", metavar="PATH", help="key = value config file; flags win")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dunkl", description="Spectra, wavefunctions and overlaps of the planar Dunkl oscillator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="energies and state labels per level")
    _common(p)

    p = sub.add_parser("wavefunction", help="sample a wavefunction on a grid")
    _common(p)
    p.add_argument("--kind", required=True, choices=("cartesian", "polar", "jacobi-dunkl"))
    p.add_argument(
        "--index",
        required=True,
        help="cartesian 'nx,ny'; polar 'k,n,sx,sy' (e.g. 0,1/2,+,-); jacobi-dunkl 'n,eps,branch'",
    )
    p.add_argument("--x", default="-2:2:5", metavar="A:B:COUNT", help="x grid (cartesian)")
    p.add_argument("--y", default="-2:2:5", metavar="A:B:COUNT", help="y grid (cartesian)")
    p.add_argument("--rho", default="0.5:2:4", metavar="A:B:COUNT", help="radial grid (polar)")
    p.add_argument("--phi", default="0.1:3.0:5", metavar="A:B:COUNT", help="angle grid (polar, jacobi-dunkl)")

    p = sub.add_parser("overlaps", help="Cartesian/polar overlap tables from three routes")
    _common(p)
    p.add_argument("--level", type=int, required=True, help="level N (<= level-max)")

    p = sub.add_parser("check", help="verify algebraic identities")
    _common(p)
    return parser


def _grid(spec: str) -> np.ndarray:
    try:
        a, b, count = spec.split(":")
        count = int(count)
        if count < 1:
            raise ValueError
        return np.linspace(float(a), float(b), count)
    except ValueError:
        raise ConfigError(f"grid must look like A:B:COUNT with COUNT >= 1, got {spec!r}") from None


def _sign(token: str) -> int:
    table = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
    if token.strip() not in table:
        raise ConfigError(f"expected a sign (+ or -), got {token!r}")
    return table[token.strip()]


def parse_index(kind: str, spec: str):
    parts = [t.strip() for t in spec.split(",")]
    try:
        if kind == "cartesian":
            nx, ny = (int(t) for t in parts)
            return CartesianIndex(nx, ny)
        if kind == "polar":
            k, n, sx, sy = parts
            return PolarIndex(int(k), Fraction(n), _sign(sx), _sign(sy))
        n, eps, branch = parts
        return JacobiDunklIndex(Fraction(n), _sign(eps), _sign(branch))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid {kind} index {spec!r}: {exc}") from None


def _fmt(v: float) -> str:
    return f"{v:.16e}"


def _write(cfg: RunConfig, text: str):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_spectrum(cfg: RunConfig) -> int:
    mu = cfg.mu
    records = []
    for N in range(cfg.level_max + 1):
        energy = energy_cartesian(CartesianIndex(0, N), mu)
        for basis, labels in (
            ("cartesian", [c.label() for c in cartesian_indices_at_level(N)]),
            ("polar", [p.label() for p in polar_indices_at_level(N)]),
        ):
            for label in labels:
                records.append({"level": N, "energy": energy, "basis": basis, "label": label, "degeneracy": len(labels)})
    if cfg.output_format == "json":
        text = json.dumps({"mu": [mu.mu_x, mu.mu_y], "states": records}, indent=2, ensure_ascii=False) + "\n"
    else:
        rows = [[r["level"], _fmt(r["energy"]), r["basis"], r["label"], r["degeneracy"]] for r in records]
        text = _csv(rows, ["level", "energy", "basis", "label", "degeneracy"])
    _write(cfg, text)
    return EXIT_OK


def cmd_wavefunction(cfg: RunConfig, kind: str, index_spec: str, grids: dict) -> int:
    mu = cfg.mu
    idx = parse_index(kind, index_spec)
    if kind == "cartesian":
        X, Y = np.meshgrid(_grid(grids["x"]), _grid(grids["y"]), indexing="ij")
        coords, names = (X.ravel(), Y.ravel()), ("x", "y")
        values = psi_cartesian(idx, mu, *coords).astype(complex)
    elif kind == "polar":
        R, P = np.meshgrid(_grid(grids["rho"]), _grid(grids["phi"]), indexing="ij")
        coords, names = (R.ravel(), P.ravel()), ("rho", "phi")
        values = psi_polar(idx, mu, *coords).astype(complex)
    else:
        phi = _grid(grids["phi"])
        coords, names = (phi,), ("phi",)
        values = np.asarray(jacobi_dunkl_F(idx, mu, phi), dtype=complex)
    if cfg.output_format == "json":
        payload = {"kind": kind, "index": index_spec, "coordinates": list(names)}
        if kind == "jacobi-dunkl":
            payload["eigenvalue"] = jacobi_dunkl_eigenvalue(idx, mu)
        payload["samples"] = [
            {**{n: float(c[i]) for n, c in zip(names, coords)}, "real": float(values[i].real), "imag": float(values[i].imag)}
            for i in range(len(values))
        ]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        rows = [[*(_fmt(c[i]) for c in coords), _fmt(values[i].real), _fmt(values[i].imag)] for i in range(len(values))]
        text = _csv(rows, [*names, "real", "imag"])
    _write(cfg, text)
    return EXIT_OK


def cmd_overlaps(cfg: RunConfig, N: int) -> int:
    if not 0 <= N <= cfg.level_max:
        raise ConfigError(f"--level must lie in [0, level_max={cfg.level_max}], got {N}")
    result = oracle_triangle(N, cfg.mu, n_nodes=max(cfg.quadrature_nodes, N + 8))
    tables = result["tables"]
    discrepancy = max(result["closed_vs_diagonalization"], result["closed_vs_quadrature"], result["diagonalization_vs_quadrature"])
    if cfg.output_format == "json":
        payload = {
            "level": N,
            "tables": [t.to_dict() for t in tables],
            "discrepancy": discrepancy,
            "unitarity": result["unitarity"],
        }
        text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    else:
        rows = []
        for t in tables:
            for row, col, re, im, mod in t.records():
                rows.append([t.provenance, t.basis, row, col, _fmt(re), _fmt(im), _fmt(mod)])
        text = _csv(rows, ["provenance", "basis", "row", "column", "real", "imag", "modulus"])
    _write(cfg, text)
    notes = "; ".join(tables[0].notes)
    print(f"level {N}: max cross-oracle discrepancy {discrepancy:.3e}, unitarity defect {result['unitarity']:.3e} ({notes})", file=sys.stderr)
    return EXIT_OK if discrepancy <= cfg.tolerance else EXIT_VERIFY


def _antihermiticity_report(mu: MuParams, n_basis: int = 8) -> Report:
    rep = Report("anti-Hermiticity")
    for m in (mu.mu_x, mu.mu_y):
        rule = gauss_rule(WeightKind.generalized_hermite(m), 32)
        polys = [hermite_gaussian_poly(n, m) for n in range(n_basis)]
        worst = max(abs(antihermiticity_defect(f, g, m, rule)) for f in polys for g in polys)
        rep.add("<g,Df>+<Dg,f>=0", worst)
    return rep


def run_checks(cfg: RunConfig) -> Report:
    """Aggregate every identity check up to ``level_max``."""
    mu = cfg.mu
    rep = Report("checks")
    for N in range(cfg.level_max + 1):
        rep.merge(check_sd2_relations(N, mu))
        rep.merge(check_casimir(N, mu))
        rep.merge(sl12_casimir_check(N, mu))
        q = np.linalg.eigvalsh(symmetry_block("Q", N, mu).matrix)
        ell = np.arange(N + 1)
        expected = np.sort((-1.0) ** (ell + 1) * (ell + mu.total + 0.5))
        rep.add("spec(Q)=q_l", np.abs(np.sort(q) - expected).max())
        rep.add("Q recurrence", recurrence_residual(N, mu))
    rep.merge(check_parabose(cfg.level_max + 2, mu))
    rep.merge(_antihermiticity_report(mu))
    return rep


def cmd_check(cfg: RunConfig) -> int:
    rep = run_checks(cfg)
    if cfg.output_format == "json":
        payload = {
            "tolerance": cfg.tolerance,
            "identities": [{"name": k, "residual": v, "pass": v < cfg.tolerance} for k, v in rep.residuals.items()],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        rows = [[k, f"{v:.3e}", "PASS" if v < cfg.tolerance else "FAIL"] for k, v in rep.residuals.items()]
        text = _csv(rows, ["identity", "residual", "status"])
    _write(cfg, text)
    failed = [k for k, v in rep.residuals.items() if not v < cfg.tolerance]
    color = not os.environ.get("DUNKL_NO_COLOR")
    if failed:
        for line in Report("failed", {k: rep.residuals[k] for k in failed}).lines(cfg.tolerance, color):
            print(line, file=sys.stderr)
    status = "PASS" if not failed else "FAIL"
    if color:
        status = f"\033[{31 if failed else 32}m{status}\033[0m"
    print(f"{len(rep.residuals) - len(failed)}/{len(rep.residuals)} identities below {cfg.tolerance:g}: {status}", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "wavefunction":
            grids = {"x": args.x, "y": args.y, "rho": args.rho, "phi": args.phi}
            return cmd_wavefunction(cfg, args.kind, args.index, grids)
        if args.command == "overlaps":
            return cmd_overlaps(cfg, args.level)
        return cmd_check(cfg)
    except (ConfigError, DunklError) as exc:
        print(f"dunkl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dunkl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
