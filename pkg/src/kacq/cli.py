"""Command-line front end.

Algebra ids are ASCII: ``A2~2`` stands for ``A_2^(2)``, ``D4~3`` for
``D_4^(3)``, ``A1~1`` for the untwisted ``A_1^(1)``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction

from . import cone
from .algebras import CatalogError, build, catalog_ids, recomputed_exponents
from .cache import TableCache
from .identities import product_ade, product_mainthm, two_var_product
from .kernels import (
    MacdonaldParams,
    cherednik_kernel,
    jacobi_triple_product_check,
    macdonald_kernel_cc,
    string_function_ct,
    theta_series,
)
from .kostka import kostka_poly, string_function_weylsum
from .series import Series, TruncationSpec
from .weyl import lambda0
from ._report import compare

ROUTES = ("a", "b", "c")
FORMATS = ("json", "csv", "text")

log = logging.getLogger("kacq")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    algebra: str = "A2~2"
    order: int = 4
    routes: tuple[str, ...] = ("c",)
    format: str = "json"
    cache_dir: str | None = None
    two_variable: bool = False
    box_padding: int = 0
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.order < 0:
            raise UsageError("--order must be nonnegative")
        if not self.routes or any(r not in ROUTES for r in self.routes):
            raise UsageError(f"--route takes a comma-separated subset of {','.join(ROUTES)}")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
        if self.box_padding < 0:
            raise UsageError("--box-padding must be nonnegative")

    def cache(self) -> TableCache | None:
        path = self.cache_dir or os.environ.get("KACQ_CACHE_DIR")
        return TableCache(path) if path else None


def _algebra(label: str):
    try:
        return build(label)
    except CatalogError as exc:
        raise UsageError(f"{exc}; known ids: {', '.join(catalog_ids())}") from exc


# series output -----------------------------------------------------------------


def _emit(blocks: list[tuple[str, Series]], fmt: str, out) -> None:
    if fmt == "json":
        for name, s in blocks:
            out.write(json.dumps({"route": name, "series": s.to_json()}, sort_keys=True, separators=(",", ":")))
            out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["route", "finite", "d2", "t", "s", "coefficient"])
        for name, s in blocks:
            for m, c in s.items():
                for (a, b), v in sorted(c.items()):
                    w.writerow([name, " ".join(map(str, m.finite)), m.d2, a, b, v])
    else:
        for name, s in blocks:
            out.write(f"[{name}]\n")
            for m, c in s.items():
                label = f"q^{m.d2 // 2}" if m.d2 % 2 == 0 else f"q^({m.d2}/2)"
                if any(m.finite):
                    label = f"e^{list(m.finite)} " + label
                out.write(f"{label}: {c}\n")


def _route_series(cfg: RunConfig, route: str) -> Series:
    g = _algebra(cfg.algebra)
    if route == "a":
        return string_function_weylsum(g, cfg.order, two_variable=cfg.two_variable,
                                       box_padding=cfg.box_padding, cache=cfg.cache())
    if cfg.two_variable:
        if route == "c" and g.is_a2l:
            return two_var_product(g.l, cfg.order)
        raise UsageError("two-variable mode is available for route a, and route c on A_2l^(2)")
    if route == "b":
        return string_function_ct(g, cfg.order, box_padding=cfg.box_padding)
    return product_mainthm(g, cfg.order) if g.twisted else product_ade(g, cfg.order)


def cmd_string_function(cfg: RunConfig, out) -> int:
    blocks = [(r, _route_series(cfg, r)) for r in cfg.routes]
    _emit(blocks, cfg.format, out)
    first = blocks[0][1]
    return 0 if all(s == first for _, s in blocks) else 1


def cmd_verify(cfg: RunConfig, out) -> int:
    reports = []
    if cfg.algebra == "jacobi":
        reports.append(jacobi_triple_product_check(TruncationSpec(1, 2 * cfg.order, cfg.order + 1)))
    else:
        if len(cfg.routes) < 2:
            raise UsageError("verify needs at least two routes")
        series = {r: _route_series(cfg, r) for r in cfg.routes}
        base = cfg.routes[0]
        for r in cfg.routes[1:]:
            reports.append(compare(series[base], series[r], None, f"route {base}", f"route {r}"))
    for rep in reports:
        doc = {"algebra": cfg.algebra, **rep.to_json()}
        out.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    return 0 if all(reports) else 1


def cmd_kostka(cfg: RunConfig, out) -> int:
    g = _algebra(cfg.algebra)
    k = int(cfg.extra.get("k", 0))
    if k < 0:
        raise UsageError("--k must be nonnegative")
    lam = lambda0(g)
    p = kostka_poly(g, lam, lam.shift_delta(-2 * k), cfg.two_variable, cache=cfg.cache())
    out.write(json.dumps({"algebra": g.label, "k": k, "coeff": p.to_json()}, separators=(",", ":")) + "\n")
    return 0


def cmd_kernel(cfg: RunConfig, out) -> int:
    which = cfg.extra.get("which", "mu")
    box = int(cfg.extra.get("box", 2))
    if which == "delta":
        l = int(cfg.extra.get("l", 1))
        k4 = cfg.extra.get("k4", "0")
        k4 = None if str(k4) in ("inf", "infinity") else Fraction(k4)
        params = MacdonaldParams.specialized(Fraction(cfg.extra.get("k5", 1)), k4)
        s = macdonald_kernel_cc(l, params, TruncationSpec(l, 2 * cfg.order, box))
    else:
        g = _algebra(cfg.algebra)
        spec = TruncationSpec(g.l, 2 * cfg.order, box)
        s = cherednik_kernel(g, spec) if which == "mu" else theta_series(g, spec)
    _emit([(which, s)], cfg.format, out)
    return 0


def cmd_theta(cfg: RunConfig, out) -> int:
    cfg.extra["which"] = "theta"
    return cmd_kernel(cfg, out)


def cmd_exponents(cfg: RunConfig, out) -> int:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["algebra", "rank", "n", "catalog", "recomputed", "match"])
    ok = True
    for label in catalog_ids():
        g = build(label)
        if not g.twisted:
            continue
        rec = recomputed_exponents(g)
        for n in range(g.r):
            cat = tuple(sorted(g.exponents(n)))
            match = cat == rec[n]
            ok &= match
            w.writerow([label, g.l, n, " ".join(map(str, cat)), " ".join(map(str, rec[n])), "yes" if match else "no"])
    return 0 if ok else 1


COMMANDS = {
    "string-function": cmd_string_function,
    "verify": cmd_verify,
    "kostka": cmd_kostka,
    "kernel": cmd_kernel,
    "exponents": cmd_exponents,
    "theta": cmd_theta,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--algebra", help=f"one of {', '.join(catalog_ids())} (verify also accepts 'jacobi')")
    common.add_argument("--order", type=int, help="truncation q-degree")
    common.add_argument("--route", "--routes", dest="routes", help="comma-separated subset of a,b,c")
    common.add_argument("--format", "--report", dest="format", choices=FORMATS)
    common.add_argument("--two-variable", action="store_true", default=None)
    common.add_argument("--cache-dir", help="partition table cache (default $KACQ_CACHE_DIR)")
    common.add_argument("--box-padding", type=int)
    common.add_argument("--config", help="JSON file with default values for these options")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="kacq", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("string-function", parents=[common], help="t-string function of the basic representation")
    sub.add_parser("verify", parents=[common], help="compare routes, or check the triple product")
    k = sub.add_parser("kostka", parents=[common], help="K_{Lambda_0, Lambda_0 - k delta}(t)")
    k.add_argument("--k", type=int, default=0)
    kern = sub.add_parser("kernel", parents=[common], help="dump mu_hat, theta or the (C^vee, C) kernel")
    kern.add_argument("--which", choices=("mu", "theta", "delta"), default="mu")
    kern.add_argument("--box", type=int, default=2)
    kern.add_argument("--l", type=int, default=1)
    kern.add_argument("--k4", default="0", help="half-integer or 'inf'")
    kern.add_argument("--k5", default="1")
    th = sub.add_parser("theta", parents=[common], help="lattice theta function")
    th.add_argument("--box", type=int, default=2)
    sub.add_parser("exponents", parents=[common], help="catalog exponent table against recomputed values")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from exc
        if not isinstance(base, dict):
            raise UsageError("config file must hold a JSON object")
    names = {f.name for f in fields(RunConfig)} - {"extra"}
    unknown = set(base) - names
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(**base)
    if isinstance(cfg.routes, str):
        cfg.routes = tuple(cfg.routes.split(","))
    cfg.routes = tuple(cfg.routes)
    for name in ("algebra", "order", "format", "cache_dir", "two_variable", "box_padding"):
        v = getattr(ns, name, None)
        if v is not None:
            setattr(cfg, name, v)
    if ns.routes is not None:
        cfg.routes = tuple(r.strip().lower() for r in ns.routes.split(",") if r.strip())
    elif ns.command == "verify" and "routes" not in base:
        cfg.routes = ROUTES
    for name in ("k", "which", "box", "l", "k4", "k5"):
        if hasattr(ns, name):
            cfg.extra[name] = getattr(ns, name)
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    out = io.StringIO()
    try:
        ns = _parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        log.info("cone backend: %s", cone.BACKEND)
        cfg = _config(ns)
        status = COMMANDS[ns.command](cfg, out)
    except UsageError as exc:
        print(f"kacq: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out.getvalue())
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
