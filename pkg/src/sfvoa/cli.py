"""Command line entry point: ``sfvoa <command> [flags]``.

Commands: verify-appendix, verify-voa, zhu, fusion, report-all, coeffs-delta.
Every command prints a report (JSON or text) and exits 0 iff every record
in it holds.
"""

from __future__ import annotations

import argparse
import configparser
import datetime
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import checks, exact, fusion
from .cache import CACHE_ENV, BasisCache
from .identities import IdentityAudit
from .vertex import VertexEngine
from .zhu import MODULES, Zhu

log = logging.getLogger("sfvoa")

COMMANDS = ("verify-appendix", "verify-voa", "zhu", "fusion", "report-all", "coeffs-delta")


def parse_cutoff(text) -> Fraction:
    """Accepts "6", "11/2" or a number; the result must be a positive multiple of 1/2."""
    w = Fraction(str(text).strip())
    if w <= 0 or (2 * w).denominator != 1:
        raise ValueError(f"cutoff must be a positive integer or half-integer, got {text!r}")
    return w


@dataclass
class RunConfig:
    d: int = 1
    W: Fraction = Fraction(6)
    k_max: int = 8
    series_order: int = 10
    cache_dir: str = ".sfvoa-cache"
    output_format: str = "json"

    def __post_init__(self):
        self.W = parse_cutoff(self.W)
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.k_max < 0 or self.series_order < 0:
            raise ValueError("k_max and series_order must be non-negative")
        if self.output_format not in ("json", "text"):
            raise ValueError("format must be json or text")

    def snapshot(self) -> dict:
        out = asdict(self)
        out["W"] = str(self.W)
        return out


CONFIG_KEYS = {"d": "d", "cutoff": "W", "kmax": "k_max", "k_max": "k_max", "order": "series_order",
               "series_order": "series_order", "cache_dir": "cache_dir", "format": "output_format"}


def load_config_file(path) -> dict:
    """Flat ``key = value`` file, e.g. ``cutoff = 11/2``."""
    parser = configparser.ConfigParser()
    parser.read_string("[run]\n" + Path(path).read_text())
    out = {}
    for key, value in parser["run"].items():
        if key not in CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r}")
        out[CONFIG_KEYS[key]] = value
    return out


def build_config(args) -> RunConfig:
    values = {}
    if args.config:
        values.update(load_config_file(args.config))
    if os.environ.get(CACHE_ENV):
        values["cache_dir"] = os.environ[CACHE_ENV]
    for flag, key in (("d", "d"), ("cutoff", "W"), ("kmax", "k_max"), ("order", "series_order"),
                      ("cache_dir", "cache_dir"), ("format", "output_format")):
        v = getattr(args, flag)
        if v is not None:
            values[key] = v
    for key in ("d", "k_max", "series_order"):
        if key in values:
            values[key] = int(values[key])
    return RunConfig(**values)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Record:
    name: str
    anchor: str
    holds: bool
    payload: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "anchor": self.anchor, "pass": bool(self.holds), "payload": self.payload}


@dataclass
class Report:
    command: str
    config: dict
    records: list = field(default_factory=list)
    timestamp: str = ""

    @property
    def passed(self) -> bool:
        return all(r.holds for r in self.records)

    def add(self, name, anchor, holds, /, **payload):
        payload = {k: v for k, v in payload.items() if k not in ("name", "holds")}
        self.records.append(Record(name, anchor, bool(holds), payload))

    def extend(self, other: "Report"):
        for r in other.records:
            self.records.append(Record(f"{other.command}: {r.name}", r.anchor, r.holds, r.payload))

    def to_json(self) -> dict:
        return {"command": self.command, "config": self.config, "timestamp": self.timestamp,
                "pass": self.passed, "records": [r.to_json() for r in self.records]}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True)
        lines = [f"{self.command}  {'PASS' if self.passed else 'FAIL'}"]
        for r in self.records:
            lines.append(f"  {'PASS' if r.holds else 'FAIL'}  {r.name}  [{r.anchor}]")
        return "\n".join(lines)


def _new(cfg, command):
    return Report(command, cfg.snapshot(), timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat())


# ---------------------------------------------------------------------------
# commands


def cmd_verify_appendix(cfg: RunConfig) -> Report:
    rep = _new(cfg, "verify-appendix")
    t = time.time()
    recs = exact.verify_det_identity(cfg.k_max)
    rep.add("determinant product formula", "det A^{k}(a,b,c)=\\prod_{i=1}^{k}\\binom{a+b+i}{i}",
            all(r["equal"] for r in recs), per_k=recs, seconds=round(time.time() - t, 1))
    tel = {k: exact.verify_column_telescope(k) for k in range(1, cfg.k_max + 1)}
    rep.add("column telescoping", "A_{0,q}^{k-1}+\\sum_{i=1}^{p}B_{i,q}^{k}=A_{p,q}^{k-1}",
            all(tel.values()), per_k={str(k): v for k, v in tel.items()})
    h = Fraction(1, 2)
    minus = {k: exact.specialized_det(k, -h, h, -h) for k in range(cfg.k_max + 1)}
    plus = {k: exact.specialized_det(k, h, -h, h) for k in range(cfg.k_max + 1)}
    rep.add("det A^k(-1/2,1/2,-1/2) nonzero", "the matrix A^{k}(-1/2,1/2,-1/2) is invertible",
            all(v != 0 for v in minus.values()), values={str(k): str(v) for k, v in minus.items()})
    rep.add("det A^k(1/2,-1/2,1/2) = 1", "det A^{d-2}(1/2,-1/2,1/2)=1",
            all(v == 1 for v in plus.values()), values={str(k): str(v) for k, v in plus.items()})
    return rep


def cmd_coeffs_delta(cfg: RunConfig) -> Report:
    rep = _new(cfg, "coeffs-delta")
    s = exact.delta_coeffs(cfg.series_order)
    c = lambda m, n: s[(m, n)]
    rep.add("c_00 = 0", "Delta(z) coefficients c_mn", c(0, 0) == 0)
    rep.add("c_mn = c_nm", "Delta(z) coefficients c_mn", s.is_symmetric())
    if cfg.series_order >= 1:
        rep.add("c_10 = -1/4", "Delta(z) coefficients c_mn", c(1, 0) == Fraction(-1, 4), c10=str(c(1, 0)))
    rep.records[0].payload["table"] = s.to_json()
    return rep


def cmd_verify_voa(cfg: RunConfig) -> Report:
    rep = _new(cfg, "verify-voa")
    V = VertexEngine(cfg.d)
    top = int(cfg.W) - 1 if cfg.d == 1 else max(int(cfg.W) - 3, 0)
    vir = checks.virasoro_sweep(V, top)
    rep.add(f"Virasoro relations up to raw weight {top}", "central charge -2d", vir["holds"] and vir["central_charge"] == str(-2 * cfg.d), **vir)
    h = V.ground_energy()
    if cfg.d == 1:
        rep.add("twisted ground state", "L_0|theta> = -1/8|theta>", h == Fraction(-1, 8), L0_theta=str(h))
    else:
        rep.add("twisted ground state (reported)", "L_0|theta> computed with the Delta-corrected operator", True, **checks.ground_state_report(cfg.d))
    if cfg.W >= 4:
        bor = checks.borcherds_sweep(V, 200, min(4, int(cfg.W) - 2))
        rep.add("commutator and associativity", "[a_(m), b_(n)] = sum_i binom(m,i) (a_(i)b)_(m+n-i); (a_(m)b)_(n) = sum_i (-1)^i binom(m,i) (a_(m-i)b_(n+i) - (-1)^m b_(m+n-i)a_(i))", bor["holds"], **bor)
        der = checks.l_minus1_sweep(V, min(3, int(cfg.W) - 3))
        rep.add("L_{-1} derivative property", "Y(L_{-1}a,z)=d/dz Y(a,z)", der["holds"], **der)
        if cfg.d == 1:
            cf = checks.closed_form_sweep(V, 4, min(3, int(cfg.W) - 3))
            rep.add("twisted quadratic closed forms", "(h^1_{(-m)}h^2_{(-n)}|0>)_{(-1)}u and _{(0)}u double sums", cf["holds"], **cf)
    return rep


def _zhu(cfg) -> Zhu:
    return Zhu(VertexEngine(1), BasisCache(cfg.cache_dir))


def cmd_zhu(cfg: RunConfig) -> Report:
    rep = _new(cfg, "zhu")
    if cfg.d != 1:
        rep.add("zhu computations", "modules T^pm, T_t^pm", False, error="the Zhu computations are implemented for d = 1")
        return rep
    Z = _zhu(cfg)
    W = cfg.W
    for tag in MODULES:
        qb = Z.O_space_basis(tag, W)
        rep.add(f"O_W({tag}) built", "O(M) spanned by a o u", True, rows=len(qb), quotient_fingerprint=Z.quotient_dimensions(tag, W))
    for tag in MODULES:
        om = Z.verify_omega_space(tag)
        rep.add(f"Omega({tag}) dim {om['dim']}", "M = sum M_{r+n}, M_r != 0", om["holds"], **om)
    for tag in MODULES:
        r = Z.check_L_minus1_lemma(tag, W)
        rep.add(f"L_-1 lemma on {tag}", "L_{-1}u = omega*u - u*omega - |u|u mod O(M)", r["holds"], **r)
    for tag in MODULES:
        r = Z.check_O_invariance(tag, W)
        rep.add(f"O_W({tag}) stable under strong generators", "A(M) is an A(V)-bimodule", r["holds"], **r)
    if W >= 2:
        for tag in MODULES:
            cert = Z.verify_generators(tag, W=W, max_raw=W - 1)
            rep.add(f"generators of A({tag})", "generated by [e] and [f] / [|theta>] / [e_(-1/2)|theta>], [f_(-1/2)|theta>]",
                    cert.passed, closure=cert.closure, monomials=len(cert.results), failures=cert.failures())
    q = Z.check_quadratic_reduction_lemmas(3, 2)
    rep.add("quadratic reduction lemmas", "(h^1_{(-p-1)}h^2_{(-k+p)}|0>)_{(-1)}u = (...)*u mod T_t^{(r+2,d+k)}",
            q["holds"], counts=q["counts"], failures=[list(map(str, f)) for f in q["failures"][:10]])
    if Z.cache is not None:
        rep.records[0].payload["cache"] = {"dir": str(Z.cache.dir), "hits": Z.cache.hits, "rebuilds": Z.cache.rebuilds}
    return rep


def cmd_fusion(cfg: RunConfig) -> Report:
    rep = _new(cfg, "fusion")
    Z = _zhu(cfg)
    for s in fusion.reference_scalar_checks(Z):
        rep.add(f"{s['scalar']}(x,y) for (M,N)=({s['M']},{s['N']})", "alpha, beta, gamma_2 case tables", s["holds"], value=s["value"], expected=s["expected"])
    if cfg.d == 1:
        for chk in IdentityAudit(Z, cfg.W).run():
            rep.add(chk.name, chk.anchor, chk.holds, **{k: v for k, v in chk.to_json().items() if k not in ("name", "anchor", "holds")})
    base = fusion.fusion_table(1, cfg.W, Z)
    table = base if cfg.d == 1 else fusion.fusion_table(cfg.d, cfg.W, Z)
    k4 = fusion.klein_four_check(table)
    nonzero = sorted({tuple(sorted(m.label for m in t)) for t in table.nonzero()})
    rep.add(f"fusion table d={cfg.d}", "the fusion rule of type (L M N) is 0 or 1", all(e.status == "final" for e in table.entries.values()),
            table=table.to_json(), text=table.text(), nonzero_up_to_permutation=[list(t) for t in nonzero])
    rep.add("Klein four fusion algebra", "isomorphic to the group algebra of Z/2Z x Z/2Z", k4["holds"], **k4)
    for d in range(1, max(4, cfg.d) + 1):
        rep.add(f"X-set additivity d={d}", "X(i,j)+X(i',j')=X(i+i',j+j')", fusion.xset_sum_check(d))
    if cfg.d > 1:
        rep.add(f"d={cfg.d} table equals d=1 table", "fusion rules are independent of d", fusion.compare_with_d1(table, base))
        if cfg.d <= 2:
            for tag in MODULES:
                r = fusion.decomposition_graded_check(tag, cfg.d, 4)
                rep.add(f"decomposition of {tag} at d={cfg.d}", "F^+ = F^{X(0,0)}, F^- = F^{X(1,0)}, F_t^+ = F^{X(0,1)}, F_t^- = F^{X(1,1)}", r["holds"], **r)
    return rep


def cmd_report_all(cfg: RunConfig) -> Report:
    rep = _new(cfg, "report-all")
    Path(cfg.cache_dir).mkdir(parents=True, exist_ok=True)
    for fn in (cmd_verify_appendix, cmd_coeffs_delta, cmd_verify_voa, cmd_zhu, cmd_fusion):
        t = time.time()
        sub = fn(cfg)
        rep.extend(sub)
        log.info("%s finished in %.1fs", sub.command, time.time() - t)
    if cfg.d == 1:
        extra = RunConfig(**{**cfg.snapshot(), "d": 2})
        rep.extend(cmd_fusion(extra))
    return rep


HANDLERS = {
    "verify-appendix": cmd_verify_appendix,
    "verify-voa": cmd_verify_voa,
    "zhu": cmd_zhu,
    "fusion": cmd_fusion,
    "report-all": cmd_report_all,
    "coeffs-delta": cmd_coeffs_delta,
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sfvoa", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--d", type=int, default=None, help="rank d of the symplectic space (default 1)")
    p.add_argument("--cutoff", default=None, help='weight cutoff W, e.g. 6 or "11/2" (default 6)')
    p.add_argument("--kmax", type=int, default=None, help="largest k for the determinant checks (default 8)")
    p.add_argument("--order", type=int, default=None, help="order of the c_mn table (default 10)")
    p.add_argument("--cache-dir", dest="cache_dir", default=None, help=f"basis cache directory (env {CACHE_ENV})")
    p.add_argument("--format", choices=("json", "text"), default=None)
    p.add_argument("--config", default=None, help="key = value file; flags override it")
    p.add_argument("--output", default=None, help="also write the report to this file")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = HANDLERS[args.command](cfg)
    text = rep.render(cfg.output_format)
    print(text)
    if args.output:
        Path(args.output).write_text(text + "\n")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
