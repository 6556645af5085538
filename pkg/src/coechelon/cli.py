"""Command-line front end: ``coechelon classify | check | witness | verify``.

Exit codes: 0 when everything asked for is decided (or a suite passes),
2 when a verdict is Unknown for lack of horizon, 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from . import conditions as C
from . import library
from . import sampling as S
from . import tensoralg as T
from . import weights as W
from . import witnesses as WT
from .classify import classify, explain
from .dsl import DslError, parse_family
from .indexsets import Empty, Predicate, parse_predicate
from .scalars import DEFAULT_TOL, P_INF, order_str, parse_order
from .serial import dumps
from .truncation import FinSeq

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2

SUITES = ("rademacher", "section", "projection-bound", "approx", "witnesses")
CHECKS = ("w3", "lp", "bounded", "montel", "banach")
WITNESS_KINDS = ("unbounded", "nosplit", "approx")


class CliError(Exception):
    """Reported on stderr with exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    levels: int = W.DEFAULT_LEVELS
    horizon: int = W.DEFAULT_HORIZON
    tol: float = DEFAULT_TOL
    J_max: int = T.J_MAX
    json: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.levels < 1:
            raise CliError("--levels must be at least 1")
        if self.horizon < 1:
            raise CliError("--horizon must be at least 1")
        if not self.tol > 0:
            raise CliError("--tol must be positive")
        if self.J_max > T.J_LIMIT:
            raise CliError(f"--J may not exceed {T.J_LIMIT}")
        if self.J_max < 1:
            raise CliError("--J must be at least 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _order(text: str):
    try:
        return parse_order(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(str(e))


def _fraction(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return q


def load_family(source: str, name: Optional[str], cfg: RunConfig) -> W.WeightFamily:
    """A family from a file path, ``builtin:NAME``, or a missing path whose stem is a built-in."""
    if source.startswith("builtin:"):
        return _builtin(source[len("builtin:"):], cfg)
    path = Path(source)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise CliError(f"cannot read {source}: {e.strerror}")
        try:
            return parse_family(text, name, cfg.levels, cfg.horizon)
        except DslError as e:
            raise CliError(f"{source}: {e}")
        except (KeyError, W.FamilyError) as e:
            raise CliError(f"{source}: {e}")
    if path.suffix == ".kf" and path.stem in library.builtin_names() and name is None:
        return _builtin(path.stem, cfg)
    if not path.suffix and source in library.builtin_names():
        return _builtin(source, cfg)
    raise CliError(f"cannot read {source}: no such file")


def _builtin(name: str, cfg: RunConfig) -> W.WeightFamily:
    try:
        return library.load_builtin(name, cfg.levels, cfg.horizon)
    except KeyError as e:
        raise CliError(str(e.args[0]))


def _subset(text: Optional[str]) -> Predicate:
    if text is None:
        return Empty()
    try:
        return parse_predicate(text)
    except ValueError as e:
        raise CliError(f"--S: {e}")


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --------------------------------------------------------------------------
# classify / check


def cmd_classify(args, cfg: RunConfig) -> int:
    F = load_family(args.file, args.family, cfg)
    report = classify(F, args.p, cfg.levels, cfg.horizon, cfg.tol)
    _emit(dumps(report.to_json()) if cfg.json else explain(report))
    return EXIT_UNKNOWN if report.undecided else EXIT_OK


def cmd_check(args, cfg: RunConfig) -> int:
    F = load_family(args.file, args.family, cfg)
    if args.check == "w3":
        v = C.check_w3(F, cfg.levels, cfg.horizon, cfg.tol)
    elif args.check == "lp":
        v = C.check_eventually_lp(F, args.p, cfg.levels, cfg.horizon, cfg.tol)
    elif args.check == "bounded":
        v = C.check_eventually_lp(F, P_INF, cfg.levels, cfg.horizon, cfg.tol)
    elif args.check == "montel":
        v = C.check_montel_obstruction(F, _subset(args.S) if args.S else None,
                                       cfg.levels, cfg.horizon, cfg.tol)
    else:
        try:
            v = C.check_banach_rows(F, _subset(args.S or "all"), cfg.levels, cfg.horizon,
                                    cfg.tol)
        except ValueError as e:
            raise CliError(str(e))
    if cfg.json:
        _emit(dumps(v.to_json()))
    else:
        lines = [f"{v.check} on {F.name}: {v.outcome}"]
        if v.rule_citation:
            lines.append(f"  cites: {v.rule_citation}")
        if v.reason:
            lines.append(f"  reason: {v.reason}")
        payload = v.certificate if v.holds else v.witness if v.fails else v.horizon
        if payload is not None:
            lines.append("  evidence: " + json.dumps(payload, sort_keys=True, separators=(",", ":")))
        _emit("\n".join(lines))
    return EXIT_UNKNOWN if v.unknown and v.decidable else EXIT_OK


# --------------------------------------------------------------------------
# witnesses


def _random_element(F: W.WeightFamily, rng: random.Random, size: int, pool: int = 40) -> FinSeq:
    return S.random_finseq(rng, list(F.index_set.prefix(pool)), size)


def cmd_witness(args, cfg: RunConfig) -> int:
    F = load_family(args.file, args.family, cfg)
    try:
        if args.kind == "unbounded":
            w = WT.unbounded_witness(F, args.p, args.L, cfg.horizon, cfg.levels)
            ok = WT.verify_unbounded(F, w)
        elif args.kind == "nosplit":
            pred = _subset(args.S)
            w = WT.no_split_witness(F, pred, args.m_max, horizon=cfg.horizon)
            ok = WT.verify_no_split(F, w, pred)
        else:
            rng = random.Random(cfg.seed)
            a = _random_element(F, rng, rng.randint(1, 8))
            w = WT.approx_binf(F, a, args.n, args.eps, levels=cfg.levels, horizon=cfg.horizon)
            ok = w.verified
    except WT.WitnessError as e:
        raise CliError(str(e))
    out = w.to_json()
    out["verified"] = ok
    _emit(dumps(out))
    return EXIT_OK if ok else EXIT_ERROR


# --------------------------------------------------------------------------
# verify suites

Check = Tuple[str, bool, str]


def _suite_rademacher(args, cfg: RunConfig, rng: random.Random) -> List[Check]:
    out = []
    pool = S.nat_pool(64)
    top = min(args.J or 8, cfg.J_max)
    for J in range(1, top + 1):
        ok = True
        for _ in range(args.count):
            support = rng.sample(pool, J)
            x = FinSeq.of([(i, S.nonzero_gauss(rng)) for i in support])
            y = FinSeq.of([(i, S.nonzero_gauss(rng)) for i in support])
            dec = T.rademacher_decomposition(x, y, cfg.J_max)
            if dec.expand() != dec.target():
                ok = False
            elif J <= 6 and dec.expand_naive() != dec.target():
                ok = False
        out.append((f"rademacher J={J}", ok, f"{args.count} pairs, {1 << J} terms each"))
    return out


def _suite_section(args, cfg: RunConfig, rng: random.Random) -> List[Check]:
    failures = {"P^2 = P": 0, "pi P = pi": 0, "pi section = id": 0,
                "section pi - id off-diagonal": 0}
    pool = S.nat_pool(12)
    for _ in range(args.count):
        u = S.random_tensor(rng, pool, rng.randint(0, 20))
        a = S.random_finseq(rng, pool, rng.randint(0, 8))
        P = T.diagonal_projection
        failures["P^2 = P"] += P(P(u)) != P(u)
        failures["pi P = pi"] += T.pi(P(u)) != T.pi(u)
        failures["pi section = id"] += T.pi(T.section(a)) != a
        failures["section pi - id off-diagonal"] += not (T.section(T.pi(u)) - u).has_zero_diagonal()
    return [(f"section {k}", n == 0, f"{args.count} tensors, {n} failures")
            for k, n in failures.items()]


def _suite_projection(args, cfg: RunConfig, rng: random.Random) -> List[Check]:
    F = load_family(args.family or "builtin:grid", None, cfg)
    p = args.p
    pool = list(F.index_set.prefix(40))
    bad, worst = 0, None
    for _ in range(args.count):
        J = rng.randint(1, min(args.J or 8, cfg.J_max))
        support = rng.sample(pool, J)
        x = FinSeq.of([(i, S.nonzero_gauss(rng)) for i in support])
        y = FinSeq.of([(i, S.nonzero_gauss(rng)) for i in support])
        n = rng.randint(1, 4)
        cert = T.projection_norm_certificate(F, n, p, x, y, cfg.J_max)
        bad += not cert.verified
        worst = cert.bound if worst is None or cert.bound.compare(worst) == 1 else worst
    return [(f"projection-bound {F.name} p={order_str(p)}", bad == 0,
             f"{args.count} pairs, {bad} failures, largest bound {worst}")]


def _suite_approx(args, cfg: RunConfig, rng: random.Random) -> List[Check]:
    names = [args.family] if args.family else ["grid", "dual_power_amen"]
    epss = [args.eps] if args.eps is not None else [Fraction(1), Fraction(1, 10), Fraction(1, 100)]
    epss = sorted(epss, reverse=True)
    out = []
    for name in names:
        F = load_family(name if ":" in name or name.endswith(".kf") else f"builtin:{name}",
                        None, cfg)
        w3 = {n: WT.w3_constant(F, n, cfg.levels, cfg.horizon) for n in (1, 2, 3)}
        bounds_ok, monotone, identity, rows = True, True, True, {}
        for _ in range(args.count):
            a = _random_element(F, rng, rng.randint(1, 10))
            n = rng.randint(1, 3)
            prev = None
            for eps in epss:
                r = WT.approx_binf(F, a, n, eps, w3[n])
                bounds_ok &= r.verified
                if not r.dropped:
                    identity &= r.b == a
                supp = set(r.b.support)
                if prev is not None and not prev <= supp:
                    monotone = False
                prev = supp
                cnt, drop = rows.get(eps, (0, 0))
                rows[eps] = (cnt + 1, drop + len(r.dropped))
        table = "; ".join(f"eps={e}: {d} dropped over {c} runs" for e, (c, d) in
                          sorted(rows.items(), reverse=True))
        out.append((f"approx {F.name} bounds", bounds_ok, table))
        out.append((f"approx {F.name} support monotone in eps", monotone, ""))
        out.append((f"approx {F.name} J2 empty gives b = a", identity, ""))
    return out


def _suite_witnesses(args, cfg: RunConfig, rng: random.Random) -> List[Check]:
    out = []
    L = args.L
    F = _builtin("unboundedrow", cfg)
    for p in (1, P_INF):
        w = WT.unbounded_witness(F, p, L, cfg.horizon, cfg.levels)
        out.append((f"unbounded {F.name} p={order_str(p)} L={L}", WT.verify_unbounded(F, w),
                    f"indices {list(w.indices)}"))
    try:
        WT.unbounded_witness(_builtin("bounded", cfg), P_INF, L, cfg.horizon, cfg.levels)
        out.append(("unbounded on an eventually bounded family is refused", False, ""))
    except WT.EventuallyBoundedError:
        out.append(("unbounded on an eventually bounded family is refused", True, ""))
    G = _builtin("grid", cfg)
    for text in ("empty", "diagonal", "triangular"):
        pred = _subset(text)
        w = WT.no_split_witness(G, pred, 10, horizon=cfg.horizon)
        out.append((f"nosplit grid S={text}", WT.verify_no_split(G, w, pred),
                    f"R starts {[list(r) for r in w.R[:4]]}"))
    return out


_SUITES: Dict[str, Callable] = {
    "rademacher": _suite_rademacher, "section": _suite_section,
    "projection-bound": _suite_projection, "approx": _suite_approx,
    "witnesses": _suite_witnesses,
}


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.suite not in _SUITES:
        raise CliError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(cfg.seed)
    try:
        results = _SUITES[args.suite](args, cfg, rng)
    except (T.ResourceLimit, WT.WitnessError) as e:
        raise CliError(str(e))
    ok = all(r[1] for r in results)
    if cfg.json:
        _emit(dumps({"suite": args.suite, "seed": cfg.seed, "passed": ok,
                     "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in results]}))
    else:
        lines = [f"{'PASS' if p else 'FAIL'}  {n}" + (f"  ({d})" if d else "")
                 for n, p, d in results]
        lines.append(f"suite {args.suite}: {'pass' if ok else 'FAIL'} (seed {cfg.seed})")
        _emit("\n".join(lines))
    return EXIT_OK if ok else EXIT_ERROR


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--levels", "-N", type=int, default=W.DEFAULT_LEVELS,
                        help="number of weight levels examined (default %(default)s)")
    common.add_argument("--horizon", "-H", type=int, default=W.DEFAULT_HORIZON,
                        help="number of indices examined (default %(default)s)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="tolerance for approximate comparisons")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--J", type=int, default=None, help="largest support size J")
    common.add_argument("--p", type=_order, default=P_INF,
                        help="order p: 0, 1, 2, ..., inf (default inf)")
    common.add_argument("--family", default=None,
                        help="family name inside the file (default: the last declared)")

    parser = _Parser(prog="coechelon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="classify k_p(V)")
    c.add_argument("file")

    k = sub.add_parser("check", parents=[common], help="run a single condition checker")
    k.add_argument("file")
    k.add_argument("check", choices=CHECKS)
    k.add_argument("--S", default=None, help="subset predicate, e.g. diagonal or row(1)")

    w = sub.add_parser("witness", parents=[common], help="construct and verify a witness")
    w.add_argument("file")
    w.add_argument("kind", choices=WITNESS_KINDS)
    w.add_argument("-L", type=int, default=10, help="length of an unbounded witness")
    w.add_argument("--S", default=None, help="subset predicate for nosplit")
    w.add_argument("--m-max", type=int, default=10, dest="m_max")
    w.add_argument("--eps", type=_fraction, default=Fraction(1, 10))
    w.add_argument("--n", type=int, default=1, help="level of a for approx")

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("suite", help=", ".join(SUITES))
    v.add_argument("--count", type=int, default=100, help="random samples per case")
    v.add_argument("--eps", type=_fraction, default=None)
    v.add_argument("-L", type=int, default=10)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(args.levels, args.horizon, args.tol,
                     args.J if args.J is not None else T.J_MAX, args.json, args.seed)


_COMMANDS = {"classify": cmd_classify, "check": cmd_check, "witness": cmd_witness,
             "verify": cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:          # usage errors and --help
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    try:
        cfg = _config(args)
        return _COMMANDS[args.command](args, cfg)
    except CliError as e:
        print(f"coechelon: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
