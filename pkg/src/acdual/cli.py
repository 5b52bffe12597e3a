"""Command-line front end.

Generators are numbered from 1 on the command line (s1, s2, ...).  Exit
codes: 0 when every check passes, 1 on a verification failure, 2 on a usage
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, bnpair, certificates, hecke
from .complexes import VerificationError, homology_int, homology_rank_at, verify_complex
from .coxeter import UnsupportedType, build_group
from .cosets import build_sigma, build_system, coxeter_complex, literal_refinement_failures
from .verify import verify_certificate


class UsageError(Exception):
    pass


def parse_gens(text: str | None, rank: int) -> int:
    """'1,3' -> bitmask with generators 0 and 2; empty or None -> 0."""
    if not text:
        return 0
    mask = 0
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        try:
            s = int(part.lstrip("s"))
        except ValueError:
            raise UsageError(f"bad generator {part!r}") from None
        if not 1 <= s <= rank:
            raise UsageError(f"generator s{s} out of range 1..{rank}")
        mask |= 1 << (s - 1)
    return mask


def parse_order(text: str | None, rank: int) -> list[int] | None:
    if not text:
        return None
    try:
        order = [int(p.lstrip("s")) - 1 for p in text.split(",")]
    except ValueError:
        raise UsageError(f"bad order {text!r}") from None
    if sorted(order) != list(range(rank)):
        raise UsageError(f"order must be a permutation of 1..{rank}")
    return order


def parse_point(text: str, names) -> dict:
    """'2' (one parameter) or 'q1=2,q2=3'."""
    try:
        if "=" not in text:
            if len(names) != 1:
                raise UsageError(f"give values for each of {', '.join(names)}")
            out = {names[0]: int(text)}
        else:
            out = {}
            for part in text.split(","):
                k, _, v = part.partition("=")
                if k not in names:
                    raise UsageError(f"unknown parameter {k!r} (have {', '.join(names)})")
                out[k] = int(v)
    except ValueError:
        raise UsageError(f"bad specialization {text!r}") from None
    if set(out) != set(names):
        raise UsageError(f"give values for each of {', '.join(names)}")
    if not all(out.values()):
        raise UsageError("parameters must be nonzero")
    return out


def _group(spec: str):
    try:
        return build_group(spec)
    except UnsupportedType as exc:
        raise UsageError(str(exc)) from None


def _bn(spec: str):
    try:
        return bnpair.build_bn(spec)
    except (ValueError, bnpair.GroupTooLarge) as exc:
        raise UsageError(str(exc)) from None


def _emit(args, report: dict, lines: list[str]):
    if args.json:
        print(json.dumps(report, sort_keys=True, default=str))
    else:
        for line in lines:
            print(line)


def _gens(mask: int) -> str:
    return "{" + ",".join(f"s{s + 1}" for s in range(mask.bit_length()) if mask >> s & 1) + "}"


def _save(args, cert: dict):
    if args.out:
        certificates.write(cert, args.out)


# commands -------------------------------------------------------------------------------------------


def cmd_sigma(args) -> int:
    G = _group(args.group)
    i0 = parse_gens(args.i0, G.rank)
    if i0 == G.all_gens:
        raise UsageError("I0 must be a proper subset of S")
    cert = build_sigma(build_system(G, i0), parse_order(args.order, G.rank), args.reading)
    data = certificates.sigma_certificate(cert)
    _save(args, data)
    lit = literal_refinement_failures(cert)
    report = {"group": args.group, "i0": data["i0"], "dims": cert.complex.dims(),
              "nonzero_m": len(data["mcoeffs"]), "iterations": cert.iterations,
              "order_b": data["order_b"], "literal_refinement_failures": len(lit)}
    lines = [
        f"sigma for {args.group}, I0 = {_gens(i0)}: verified on dims {cert.complex.dims()}",
        f"  {len(data['mcoeffs'])} nonzero m-coefficients, Neumann series length {cert.iterations}",
        f"  order on the theta side: {data['order_b']}",
    ]
    if lit:
        lines.append(f"  element-wise refinement w_S v0(b) w_I0 <=_r w_S v0(a) w_I0 fails on {len(lit)} entries")
    if args.out:
        lines.append(f"  wrote {args.out}")
    _emit(args, report, lines)
    return 0


def cmd_verify(args) -> int:
    try:
        cert = certificates.read(args.path)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    rep = verify_certificate(cert)
    report = {"ok": rep.ok, "kind": rep.kind, "checks": rep.checks, "error": rep.error, **rep.notes}
    if rep.ok:
        lines = [f"ok: {rep.kind} certificate ({', '.join(rep.checks)})"]
        lines += [f"  {k}: {v}" for k, v in rep.notes.items()]
    else:
        lines = [f"FAILED: {rep.error}"]
    _emit(args, report, lines)
    return 0 if rep.ok else 1


def cmd_coxeter_complex(args) -> int:
    G = _group(args.group)
    x = coxeter_complex(G, parse_order(args.order, G.rank))
    h = homology_int(x)
    report = {"dims": x.dims(), "homology": {d: str(g) for d, g in h.items()}}
    lines = [f"Coxeter complex of {args.group}: dims {x.dims()}"]
    lines += [f"  H^{d} = {g}" for d, g in h.items()]
    _emit(args, report, lines)
    return 0


def cmd_hecke_x(args) -> int:
    G = _group(args.group)
    H = hecke.HeckeAlgebra(G)
    model = hecke.build_xh(H, parse_order(args.order, G.rank))
    hecke.check_bimodule(model)
    report = {"dims": model.complex.dims(), "params": list(H.names)}
    _emit(args, report, [f"X(H) for {args.group}: dims {model.complex.dims()}, d^2 = 0, bimodule actions are chain maps"])
    return 0


def cmd_hecke_xi(args) -> int:
    G = _group(args.group)
    H = hecke.HeckeAlgebra(G)
    points = [parse_point(p, H.names) for p in args.q] if args.q else None
    rep = hecke.xi_suite(H, points)
    lines = [f"xi checks for {args.group}: d0(xi) = 0, h_s xi h_s = -q_s xi, h_s xi = xi alpha(h_s)"]
    lines += [f"  at {p}: rank d0 = {r}, rank of (xi h_w) = {i}"
              for p, r, i in zip(rep["points"], rep["rank_d0"], rep["rank_xi_h"])]
    _emit(args, rep, lines)
    return 0


def cmd_hecke_restriction(args) -> int:
    G = _group(args.group)
    H = hecke.HeckeAlgebra(G)
    i0 = parse_gens(args.i0, G.rank)
    if i0 == G.all_gens:
        raise UsageError("I0 must be a proper subset of S")
    r = hecke.hecke_restriction_certificate(H, i0, parse_order(args.order, G.rank))
    _save(args, certificates.hecke_restriction_json(H, r, i0))
    rep = {"group": args.group, "i0": certificates.mask_to_list(i0),
           "dims": {"X": r.x.dims(), "Y'": r.cert.yp.dims()}}
    lines = [f"X(H) restricted to H_I0 for {args.group}, I0 = {_gens(i0)}: X dims {r.x.dims()} ~ Y' dims {r.cert.yp.dims()}"]
    if args.out:
        lines.append(f"  wrote {args.out}")
    _emit(args, rep, lines)
    return 0


def cmd_hecke_duality(args) -> int:
    G = _group(args.group)
    H = hecke.HeckeAlgebra(G)
    points = [parse_point(p, H.names) for p in (args.q or ["2"])]
    ok = True
    reports, lines = [], []
    for p in points:
        rep = hecke.duality_homology_check(H, p)
        ok &= rep["ok"]
        reports.append(rep)
        lines.append(f"{args.group} at {p}: dims {rep['dims']}, homology ranks {rep['ranks']}"
                     f" {'ok' if rep['ok'] else 'UNEXPECTED'}")
    _emit(args, {"runs": reports, "ok": ok}, lines)
    return 0 if ok else 1


def cmd_bn_st(args) -> int:
    bn = _bn(args.group)
    x = bnpair.st_complex(bn, args.variant)
    h = homology_int(x)
    ok = h[0].free_rank == len(bn.U) and all(not g.free_rank and not g.torsion for d, g in h.items() if d)
    lines = [f"St({bn.name}) [{args.variant}]: dims {x.dims()}, |U| = {len(bn.U)}"]
    lines += [f"  H_{d} = {g}" for d, g in h.items()]
    _emit(args, {"dims": x.dims(), "homology": {d: str(g) for d, g in h.items()}, "ok": ok}, lines)
    return 0 if ok else 1


def cmd_bn_steinberg_restriction(args) -> int:
    bn = _bn(args.group)
    i0 = parse_gens(args.i0, bn.W.rank)
    if i0 == bn.W.all_gens:
        raise UsageError("I0 must be a proper subset of S")
    r = bnpair.steinberg_restriction_certificate(bn, i0, parse_order(args.order, bn.W.rank))
    _save(args, certificates.steinberg_restriction_json(bn, r, i0))
    lines = [f"St({bn.name}) restricted to P_I0, I0 = {_gens(i0)}: {r.report['dims']}",
             f"  {r.lemma_pairs} subgroup inclusions checked"]
    if args.out:
        lines.append(f"  wrote {args.out}")
    _emit(args, r.report, lines)
    return 0


def cmd_bn_levi_restriction(args) -> int:
    bn = _bn(args.group)
    if bn.W.rank > 1 and not args.slow:
        raise UsageError(f"X(G) e_I0 for {bn.name} is in the slow tier; pass --slow")
    i0 = parse_gens(args.i0, bn.W.rank)
    if i0 == bn.W.all_gens:
        raise UsageError("I0 must be a proper subset of S")
    r = bnpair.levi_restriction_certificate(bn, i0, parse_order(args.order, bn.W.rank))
    _save(args, certificates.levi_restriction_json(bn, r, i0))
    lines = [f"X(G) e_I0 for {bn.name}, I0 = {_gens(i0)}: {r.report['dims']}",
             f"  {r.report['choice_checks']} choice checks, {r.report['independence']} independence equalities"]
    if args.out:
        lines.append(f"  wrote {args.out}")
    _emit(args, r.report, lines)
    return 0


def cmd_bn_duality(args) -> int:
    bn = _bn(args.group)
    try:
        rep = bnpair.group_duality_check(bn)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ch = bnpair.duality_character_check(bn, 5, args.seed)
    ok = rep["ok"] and ch["ok"]
    lines = [f"X(G) (x)_G X(G)^dual for {bn.name}: dims {rep['dims']}, ranks {rep['ranks']}",
             f"  degree-0 character {'matches' if ch['ok'] else 'DIFFERS from'} QG on {len(ch['pairs'])} pairs"]
    _emit(args, {**rep, "character": ch}, lines)
    return 0 if ok else 1


def cmd_homology(args) -> int:
    spec = args.spec
    if spec[:2] in ("GL", "SL"):
        bn = _bn(spec)
        kind = args.complex or "st-plus"
        if kind in ("st-plus", "st-minus"):
            x = bnpair.st_complex(bn, kind[3:])
        elif kind == "xg":
            x, _ = bnpair.build_xg(bn)
        else:
            raise UsageError(f"complex {kind!r} is not defined for groups")
    else:
        G = _group(spec)
        kind = args.complex or "coxeter"
        if kind == "coxeter":
            x = coxeter_complex(G)
        elif kind == "xh":
            H = hecke.HeckeAlgebra(G)
            x = hecke.build_xh(H).complex
            point = parse_point(args.q[0] if args.q else "2", H.names)
            ranks = homology_rank_at(x, point)
            _emit(args, {"dims": x.dims(), "ranks": ranks, "at": point},
                  [f"X(H) for {spec} at {point}: dims {x.dims()}"] + [f"  rank H^{d} = {r}" for d, r in ranks.items()])
            return 0
        else:
            raise UsageError(f"complex {kind!r} is not defined for Coxeter types")
    verify_complex(x)
    if kind == "xg":
        ranks = homology_rank_at(x)
        _emit(args, {"dims": x.dims(), "ranks": ranks},
              [f"X(G) for {spec}: dims {x.dims()}"] + [f"  rank H^{d} = {r}" for d, r in ranks.items()])
        return 0
    h = homology_int(x)
    _emit(args, {"dims": x.dims(), "homology": {d: str(g) for d, g in h.items()}},
          [f"{kind} complex of {spec}: dims {x.dims()}"] + [f"  H^{d} = {g}" for d, g in h.items()])
    return 0


def cmd_accept(args) -> int:
    only = set(args.only) if args.only else None
    if only and not only <= set(acceptance.CRITERIA):
        raise UsageError("criteria are numbered 1..13")
    echo = None if args.json else print
    results = acceptance.run_all(slow=args.slow, seed=args.seed, only=only, echo=echo)
    passed = sum(c.ok for c in results)
    if args.json:
        print(json.dumps([{"number": c.number, "title": c.title, "ok": c.ok, "detail": c.detail,
                           "seconds": round(c.seconds, 2)} for c in results], sort_keys=True))
    else:
        print(f"{passed}/{len(results)} criteria pass")
    return 0 if passed == len(results) else 1


# parser ------------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acdual", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, target=None):
        sp = sub.add_parser(name, help=help_)
        if target:
            sp.add_argument(*target)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    def common(sp, i0=True, out=True):
        if i0:
            sp.add_argument("--i0", default="", help="I0 as 1-based generators, e.g. 1,3 (default: empty)")
        sp.add_argument("--order", help="total order on S, e.g. 2,1,3 (default: 1,2,...)")
        if out:
            sp.add_argument("--out", help="write the certificate JSON here")

    sp = add("sigma", cmd_sigma, "build and verify the contraction sigma", ("group",))
    common(sp)
    sp.add_argument("--reading", choices=("conjugated", "plain"), default="conjugated",
                    help="order used on the theta side (default: conjugated)")
    sp = add("verify", cmd_verify, "re-check a certificate file independently", ("path",))
    sp = add("coxeter-complex", cmd_coxeter_complex, "Coxeter complex and its integral homology", ("group",))
    common(sp, i0=False, out=False)
    sp = add("hecke-x", cmd_hecke_x, "build X(H) and check the bimodule structure", ("group",))
    common(sp, i0=False, out=False)
    sp = add("hecke-remark18", cmd_hecke_xi, "xi, alpha and the rank of d0", ("group",))
    sp.add_argument("--q", action="append", help="specialization, e.g. 2 or q1=2,q2=3 (repeatable)")
    sp = add("hecke-thm17", cmd_hecke_restriction, "homotopy equivalence for X(H) restricted to H_I0", ("group",))
    common(sp)
    sp = add("hecke-duality", cmd_hecke_duality, "homology of X(H) (x)_H X(H)^dual", ("group",))
    sp.add_argument("--q", action="append", help="specialization (repeatable, default 2)")
    sp = add("bn-st", cmd_bn_st, "Steinberg complex and its integral homology", ("group",))
    sp.add_argument("--variant", choices=("plus", "minus"), default="plus")
    sp = add("bn-thm20", cmd_bn_steinberg_restriction, "restriction of St(G) to P_I0", ("group",))
    common(sp)
    sp = add("bn-thm9", cmd_bn_levi_restriction, "X(G) e_I0 against the induced Levi complex", ("group",))
    common(sp)
    sp.add_argument("--slow", action="store_true", help="allow rank-two groups")
    sp = add("bn-duality", cmd_bn_duality, "homology of X(G) (x)_G X(G)^dual", ("group",))
    sp.add_argument("--seed", type=int, default=0)
    sp = add("homology", cmd_homology, "homology of a named complex", ("spec",))
    sp.add_argument("--complex", choices=("coxeter", "xh", "st-plus", "st-minus", "xg"))
    sp.add_argument("--q", action="append", help="specialization for xh (default 2)")
    sp = add("accept", cmd_accept, "run the acceptance matrix")
    speed = sp.add_mutually_exclusive_group()
    speed.add_argument("--fast", action="store_true", help="skip the slow tier (default)")
    speed.add_argument("--slow", action="store_true", help="include D4 and the GL3(2) X(G) e_I0 runs")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--only", type=int, nargs="+", metavar="N", help="run only these criteria")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
