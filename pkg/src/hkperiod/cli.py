"""Command-line front door: `hk <verb> [flags]`, JSON in, JSON out."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from .chain import validate_chain
from .errors import DomainError
from .ghk import connect_chain, generic_line_through, generic_vector_in, is_generic
from .lattice import FujikiData, catalog_lookup, fujiki_value
from .ortho import is_plus, pseudo_reflection, search_isometries, spinorial_norm
from .period import PeriodPoint, ns_rank
from .subtwistor import AuxMetric, DtwOptions, dg_lower, dtw_upper

VERBS = ("lattice-info", "validate", "ns-rank", "generic", "connect", "dtw",
         "spin-norm", "reflect", "search", "fujiki")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hk", description="Exact computations on BBF lattices "
                                "and their period domains.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--lattice", help="lattice JSON file {\"gram\": [[int]]}")
    p.add_argument("--catalog", help="catalog key (U, E8neg, K3, K3n, Kummer, rank1)")
    p.add_argument("--param", type=int, help="parameter of K3n / Kummer / rank1")
    p.add_argument("--x", help="period point JSON (first endpoint)")
    p.add_argument("--y", help="period point JSON (second endpoint)")
    p.add_argument("--line", help="isotropic line JSON {re, im}, or a 3-plane {span}")
    p.add_argument("--chain", help="chain JSON")
    p.add_argument("--isometry", help="isometry JSON {\"matrix\": [[int]]}")
    p.add_argument("--vector", help="integer vector, inline JSON list or a file")
    p.add_argument("--height", type=int, default=1)
    p.add_argument("--fujiki-c", default="1", help="Fujiki constant c (p/q)")
    p.add_argument("--n", type=int, default=1, help="quaternionic dimension for fujiki")
    p.add_argument("--metric", help="auxiliary metric JSON {\"gram\": [[float]]}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=2)
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="write JSON here instead of stdout")
    return p


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for {args.verb}")
    return value


def _lattice(args, payload=None):
    if args.lattice:
        return io.lattice_from_json(io.load(args.lattice))
    if args.catalog:
        return catalog_lookup(args.catalog, args.param)
    if payload is not None and "lattice" in payload:
        return io.lattice_from_json(payload["lattice"])
    raise UsageError("a lattice is required: --lattice or --catalog")


def _period(args, name, L=None) -> PeriodPoint:
    data = io.load(_need(args, name))
    return io.period_from_json(data, L if L is not None else _lattice(args, data))


def _vector(args) -> list[int]:
    raw = _need(args, "vector")
    text = raw if raw.lstrip().startswith("[") else open(raw).read()
    return [int(x) for x in json.loads(text)]


def _metric(args):
    if not args.metric:
        return None
    return AuxMetric(io.load(args.metric)["gram"])


def run(args) -> dict:
    verb = args.verb
    if verb == "lattice-info":
        L = _lattice(args)
        return {"rank": L.rank, "signature": list(L.signature), "even": L.is_even}

    if verb == "validate":
        if args.chain:
            data = io.load(args.chain)
            c = io.chain_from_json(data, _lattice(args, data))
            report = validate_chain(c)
            if not report:
                raise DomainError("invalid-chain", f"{report.clause}: {report.detail}")
            return {"valid": True, "kind": "chain", "lines": len(c)}
        if args.line:
            data = io.load(args.line)
            io.line_from_json(data, _lattice(args, data))
            return {"valid": True, "kind": "line"}
        _period(args, "x")
        return {"valid": True, "kind": "plane"}

    if verb == "ns-rank":
        r, basis = ns_rank(_period(args, "x"))
        return {"ns_rank": r, "basis": basis}

    if verb == "generic":
        if args.line:
            data = io.load(args.line)
            W = io.hkline_from_json(data, _lattice(args, data))
            a = generic_vector_in(W, args.seed, threads=args.threads)
            return {"vector": io.vector_to_json(a)}
        W = generic_line_through(_period(args, "x"), args.seed, threads=args.threads)
        is_generic(W)
        return {"line": io.hkline_to_json(W), "certificate": W.certificate}

    if verb in ("connect", "dtw"):
        Vx = _period(args, "x")
        Vy = _period(args, "y", Vx.lattice)
        if verb == "connect":
            c = connect_chain(Vx, Vy, args.seed, threads=args.threads)
            return io.chain_to_json(c)
        g = _metric(args)
        opts = DtwOptions(seed=args.seed, restarts=args.restarts, iters=args.iters,
                          threads=args.threads)
        value, c = dtw_upper(Vx, Vy, g, opts)
        return {"upper": value, "lower": dg_lower(Vx, Vy, g), "chain": io.chain_to_json(c)}

    if verb == "spin-norm":
        data = io.load(_need(args, "isometry"))
        A = io.isometry_from_json(data, _lattice(args, data))
        return {"spin_norm": spinorial_norm(A), "plus": is_plus(A), "det": A.det}

    if verb == "reflect":
        L = _lattice(args)
        rho = pseudo_reflection(L, _vector(args))
        return {**io.isometry_to_json(rho), "spin_norm": spinorial_norm(rho)}

    if verb == "search":
        L = _lattice(args)
        found = search_isometries(L, args.height, threads=args.threads)
        return {"count": len(found), "isometries": [[list(r) for r in A.matrix] for A in found]}

    if verb == "fujiki":
        L = _lattice(args)
        try:
            c = Fraction(args.fujiki_c.replace("−", "-"))
        except ValueError:
            raise UsageError(f"bad Fujiki constant {args.fujiki_c!r}") from None
        value = fujiki_value(L, io.vector_from_json(_vector(args)), FujikiData(c, args.n))
        return {"value": io.scalar_to_json(value)}

    raise UsageError(f"unknown verb {verb}")  # pragma: no cover


def _emit(obj, out: str | None):
    text = io.dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = run(args)
    except DomainError as exc:
        _emit({"error": exc.clause, "detail": str(exc)}, None)
        return 1
    except (UsageError, OSError, KeyError, TypeError, ValueError) as exc:
        # malformed input files land here; ValueError covers bad JSON too
        _emit({"error": "usage", "detail": f"{type(exc).__name__}: {exc}"}, None)
        return 2
    _emit(result, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
