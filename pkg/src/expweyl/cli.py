"""Command surface over the kernel.

Every command reads the session signature from ``--config`` (JSON with the
SessionConfig fields) plus the overriding flags, runs one module operation,
and prints either plain text or a line of versioned JSON
(``--format structured``, schema tag ``expweyl/1``).  Kernel errors are
reported as ``error[Code]: message`` on stderr with exit status 1; success
exits 0; ``selftest`` exits 1 if any invariant check fails.

Deformation commands (star, assoc, rank2, tshift, mc) always work over the
plain algebra of the session signature and take the truncation order from
``--hbar-order`` / the config; the other commands operate on the configured
algebra directly, so ``hbar`` is only parseable when an order is set.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .config import SessionConfig, build_algebra, load_config
from .deformation import (
    AntisymMatrix,
    mc_residual,
    rank2_commutator,
    rank2_product,
    star_assoc_check,
    star_cochain,
    symbol_star,
    t_shift_deform,
)
from .errors import KernelError, ParseError, SignatureMismatch, UnsupportedElement
from .expr import (
    element_to_records,
    format_element,
    format_gr_element,
    format_scalar,
    parse,
)
from .grading import (
    exp_degree,
    filtration_diagnostic,
    full_symbol,
    order,
    power_degree,
    symbol,
)
from .homology import commutator_span_check, connes_B, hochschild_b, tensor_chain
from .lie import PRESETS, ce_differential, derivation_from_element, euler_integrate, make_span
from .representation import act, faithfulness_probe, noetherian_witness
from .sampling import random_cochain, random_element
from .selftest import run_selftest

SCHEMA = "expweyl/1"

__all__ = ["main"]


# -- argument helpers ----------------------------------------------------------


def _split_top(src: str) -> list[str]:
    """Split on commas outside parentheses (tensor factors, pair lists)."""
    parts, cur, depth = [], [], 0
    for ch in src:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(depth - 1, 0)
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _lattice_arg(text: str, rank: int) -> tuple[int, ...]:
    try:
        coords = tuple(int(p) for p in _split_top(text))
    except ValueError:
        raise ParseError("lattice exponent coordinates must be integers", 0)
    if len(coords) != rank:
        raise SignatureMismatch(
            f"exponent has {len(coords)} coordinates, signature rank is {rank}"
        )
    return coords


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError("expected a rational number", 0)


def _parse_chain(algebra, text: str):
    factors = [parse(p, algebra) for p in _split_top(text)]
    return tensor_chain(factors)


def _span_arg(algebra, spec: str, grading: int | None):
    preset = PRESETS.get(spec.strip())
    if preset is not None:
        return preset(algebra)
    basis = [derivation_from_element(parse(p, algebra)) for p in _split_top(spec)]
    return make_span(basis, grading=grading)


# -- rendering -----------------------------------------------------------------


def _scalar_text(s) -> str:
    text = format_scalar(s)
    if " + " in text or " - " in text:
        return f"({text})"
    return text


def _chain_text(chain) -> str:
    if chain.is_zero:
        return "0"
    one = chain.algebra.field.one
    pieces = []
    for key, coeff in chain.sorted_terms():
        body = ", ".join(
            format_element(chain.algebra.from_term(m, one)) for m in key
        )
        if coeff == one:
            pieces.append(f"[{body}]")
        else:
            pieces.append(f"{_scalar_text(coeff)} * [{body}]")
    return " + ".join(pieces)


def _chain_records(chain) -> list[dict]:
    one = chain.algebra.field.one
    out = []
    for key, coeff in chain.sorted_terms():
        out.append(
            {
                "coeff": format_scalar(coeff),
                "factors": [
                    format_element(chain.algebra.from_term(m, one)) for m in key
                ],
            }
        )
    return out


def _cochain_records(omega) -> list[dict]:
    return [
        {"key": list(key), "value": [format_scalar(c) for c in coords]}
        for key, coords in omega.items()
    ]


def _cochain_lines(label: str, omega) -> list[str]:
    if omega.is_zero:
        return [f"{label}: 0"]
    lines = []
    for key, coords in omega.items():
        args = ",".join(str(i) for i in key)
        vals = ", ".join(format_scalar(c) for c in coords)
        lines.append(f"{label}({args}) = ({vals})")
    return lines


def _element_payload(P) -> dict:
    return {"text": format_element(P), "terms": element_to_records(P)}


# -- command implementations -----------------------------------------------------


def _cmd_normalize(ctx, args):
    P = parse(args.expr, ctx.algebra)
    return format_element(P), _element_payload(P)


def _cmd_mul(ctx, args):
    A = ctx.algebra
    P = A.mul(parse(args.left, A), parse(args.right, A))
    return format_element(P), _element_payload(P)


def _cmd_comm(ctx, args):
    A = ctx.algebra
    P = A.commutator(parse(args.left, A), parse(args.right, A))
    return format_element(P), _element_payload(P)


def _cmd_ord(ctx, args):
    k = order(parse(args.expr, ctx.algebra))
    return str(k), {"order": k}


def _cmd_degree(ctx, args):
    P = parse(args.expr, ctx.algebra)
    ge = power_degree(P) if args.power else exp_degree(P)
    return str(ge), {"degree": list(ge.coords), "text": str(ge)}


def _cmd_symbol(ctx, args):
    u = symbol(parse(args.expr, ctx.algebra))
    return format_gr_element(u), {"text": format_gr_element(u)}


def _cmd_grdiag(ctx, args):
    A = ctx.algebra
    rep = filtration_diagnostic(parse(args.left, A), parse(args.right, A))
    witness = None
    if rep.witness is not None:
        witness = format_element(A.from_term(rep.witness, A.field.one))
    lines = [
        f"ord_p={rep.ord_p} ord_q={rep.ord_q} ord_pq={rep.ord_pq} "
        f"ord_comm={rep.ord_comm}",
        f"submultiplicative={str(rep.submultiplicative).lower()} "
        f"strict_drop={str(rep.strict_drop).lower()}",
    ]
    if witness is not None:
        lines.append(f"witness={witness}")
    payload = {
        "ord_p": rep.ord_p,
        "ord_q": rep.ord_q,
        "ord_pq": rep.ord_pq,
        "ord_comm": rep.ord_comm,
        "submultiplicative": rep.submultiplicative,
        "strict_drop": rep.strict_drop,
        "witness": witness,
    }
    return "\n".join(lines), payload


def _cmd_act(ctx, args):
    A = ctx.algebra
    out = act(parse(args.operator, A), parse(args.function, A))
    return format_element(out), _element_payload(out)


def _cmd_probe(ctx, args):
    A = ctx.algebra
    rep = faithfulness_probe(parse(args.expr, A), args.maxdeg)
    if rep.zero:
        return "zero: true", {"zero": True, "witness_input": None, "witness_output": None}
    win, wout = format_element(rep.witness_input), format_element(rep.witness_output)
    text = f"zero: false\nwitness: act(P, {win}) = {wout}"
    return text, {"zero": False, "witness_input": win, "witness_output": wout}


def _cmd_noetherian(ctx, args):
    rep = noetherian_witness(ctx.algebra, args.n)
    return rep.as_text(), {
        "n": rep.n,
        "pair": [format_scalar(rep.value_n), format_scalar(rep.value_n_plus_1)],
        "certified": rep.certified,
        "text": rep.as_text(),
    }


def _cmd_liebracket(ctx, args):
    A = ctx.algebra
    u = derivation_from_element(parse(args.left, A))
    v = derivation_from_element(parse(args.right, A))
    from .lie import witt_bracket

    w = witt_bracket(u, v).as_element()
    return format_element(w), _element_payload(w)


def _cmd_cespan(ctx, args):
    span = _span_arg(ctx.algebra, args.span, args.grading)
    basis = [format_element(b.as_element()) for b in span.basis]
    lines = [f"dimension: {span.dim}", "closed: true"]
    if span.degrees is not None:
        lines.append("degrees: " + ", ".join(str(d) for d in span.degrees))
    lines.extend(f"basis[{i}] = {b}" for i, b in enumerate(basis))
    payload = {
        "dimension": span.dim,
        "closed": True,
        "degrees": list(span.degrees) if span.degrees is not None else None,
        "basis": basis,
    }
    return "\n".join(lines), payload


def _cmd_ced(ctx, args):
    span = _span_arg(ctx.algebra, args.span, args.grading)
    omega = random_cochain(span, ctx.rng, args.degree)
    dom = ce_differential(omega)
    dd_zero = ce_differential(dom).is_zero
    lines = _cochain_lines("omega", omega) + _cochain_lines("d omega", dom)
    lines.append(f"d^2 omega == 0: {str(dd_zero).lower()}")
    payload = {
        "degree": args.degree,
        "cochain": _cochain_records(omega),
        "differential": _cochain_records(dom),
        "d_squared_zero": dd_zero,
    }
    return "\n".join(lines), payload


def _cmd_eulerint(ctx, args):
    span = _span_arg(ctx.algebra, args.span, args.grading)
    omega = None
    for _ in range(20):
        psi = random_cochain(span, ctx.rng, args.degree, ad_degree=args.ad_degree)
        cand = ce_differential(psi)
        if not cand.is_zero:
            omega = cand
            break
    if omega is None:
        raise UnsupportedElement("sampled coboundaries were all zero")
    phi = euler_integrate(omega)
    recovered = ce_differential(phi) == omega
    lines = _cochain_lines("omega", omega) + _cochain_lines("phi", phi)
    lines.append(f"d phi == omega: {str(recovered).lower()}")
    payload = {
        "degree": args.degree,
        "ad_degree": args.ad_degree,
        "coboundary": _cochain_records(omega),
        "primitive": _cochain_records(phi),
        "recovered": recovered,
    }
    return "\n".join(lines), payload


def _cmd_hochb(ctx, args):
    chain = _parse_chain(ctx.algebra, args.chain)
    bnd = hochschild_b(chain)
    bb_zero = hochschild_b(bnd).is_zero if bnd.degree >= 1 else True
    text = f"b = {_chain_text(bnd)}\nb^2 == 0: {str(bb_zero).lower()}"
    payload = {
        "input": _chain_records(chain),
        "boundary": _chain_records(bnd),
        "b_squared_zero": bb_zero,
    }
    return text, payload


def _cmd_connesB(ctx, args):
    chain = _parse_chain(ctx.algebra, args.chain)
    out = connes_B(chain)
    text = f"B = {_chain_text(out)}"
    payload = {"input": _chain_records(chain), "connes": _chain_records(out)}
    return text, payload


def _cmd_commspan(ctx, args):
    A = ctx.algebra
    target = parse(args.target, A)
    pairs = []
    for spec in args.pairs:
        parts = _split_top(spec)
        if len(parts) != 2:
            raise ParseError("a pair must be two comma-separated expressions", 0)
        pairs.append((parse(parts[0], A), parse(parts[1], A)))
    res = commutator_span_check(target, pairs)
    if res.inside:
        combo = [format_scalar(c) for c in res.combination]
        text = "inside: true\ncombination: " + ", ".join(combo)
        return text, {"inside": True, "combination": combo}
    return "inside: false", {"inside": False, "combination": None}


def _cmd_star(ctx, args):
    A = ctx.base
    N = args.order if args.order is not None else ctx.hbar_order(2)
    f = full_symbol(parse(args.left, A))
    g = full_symbol(parse(args.right, A))
    out = symbol_star(f, g, N)
    text = format_gr_element(out)
    return text, {"text": text, "order": N}


def _cmd_assoc(ctx, args):
    A = ctx.base
    N = args.order if args.order is not None else ctx.hbar_order(2)
    cochains = [star_cochain(A, k) for k in range(1, N + 1)]
    triples = [
        tuple(
            full_symbol(random_element(A, ctx.rng, max_terms=2, bound=2))
            for _ in range(3)
        )
        for _ in range(args.triples)
    ]
    rep = star_assoc_check(cochains, triples)
    payload = {
        "max_order": rep.max_order,
        "triples": rep.triples,
        "associative": rep.associative,
        "first_nonzero": rep.first_nonzero,
        "text": rep.as_text(),
    }
    return rep.as_text(), payload


def _cmd_rank2(ctx, args):
    A = ctx.base
    rank = A.signature.rank
    alpha = _lattice_arg(args.alpha, rank)
    beta = _lattice_arg(args.beta, rank)
    c12 = _rational_arg(args.c)
    c = AntisymMatrix(
        tuple(
            tuple(
                c12 if (i, j) == (0, 1) else -c12 if (i, j) == (1, 0) else Fraction(0)
                for j in range(rank)
            )
            for i in range(rank)
        )
    )
    prod = rank2_product(A, c, alpha, beta)
    comm = rank2_commutator(A, c, alpha, beta)
    text = f"product = {format_gr_element(prod)}\ncommutator = {format_gr_element(comm)}"
    payload = {
        "product": format_gr_element(prod),
        "commutator": format_gr_element(comm),
    }
    return text, payload


def _cmd_tshift(ctx, args):
    A = ctx.base
    N = args.order if args.order is not None else ctx.hbar_order(2)
    rep = t_shift_deform(A, N, args.var)
    payload = {
        "order": rep.order,
        "var": rep.var,
        "classical": format_element(rep.classical),
        "first_order": format_element(rep.first_order),
        "text": rep.as_text(),
    }
    return rep.as_text(), payload


def _cmd_mc(ctx, args):
    A = ctx.base
    m1, m2 = star_cochain(A, 1), star_cochain(A, 2)
    failure = None
    for idx in range(args.triples):
        f, g, h = (
            full_symbol(random_element(A, ctx.rng, max_terms=2, bound=2))
            for _ in range(3)
        )
        if not mc_residual(m1, m2, f, g, h).is_zero:
            failure = idx
            break
    ok = failure is None
    text = (
        f"maurer-cartan residual zero on {args.triples} triples"
        if ok
        else f"maurer-cartan residual nonzero on triple {failure}"
    )
    return text, {"triples": args.triples, "residual_zero": ok, "first_failure": failure}


def _cmd_selftest(ctx, args):
    results = run_selftest(ctx.config.seed)
    lines = [r.as_text() for r in results]
    ok = all(r.ok for r in results)
    lines.append(f"selftest: {'ok' if ok else 'FAILED'} ({len(results)} checks)")
    payload = {
        "checks": [
            {"name": r.name, "ok": r.ok, "detail": r.detail} for r in results
        ],
        "ok": ok,
    }
    return "\n".join(lines), payload, 0 if ok else 1


# -- wiring ----------------------------------------------------------------------


class _Context:
    """Session state shared by all commands."""

    def __init__(self, config: SessionConfig):
        self.config = config
        self.algebra = build_algebra(config)
        self.base = build_algebra(config.replace(hbar_order=None, t_shift=False))
        self.rng = random.Random(config.seed)

    def hbar_order(self, default: int) -> int:
        return self.config.hbar_order if self.config.hbar_order is not None else default


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="expweyl",
        description="exact computation in exponential-polynomial Weyl-type algebras",
    )
    ap.add_argument("--config", help="path to a JSON session config")
    ap.add_argument("--format", choices=("text", "structured"), default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--hbar-order", type=int, default=None, dest="hbar_order")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        return p

    p = cmd("normalize", _cmd_normalize, "parse and print the normal form")
    p.add_argument("expr")
    p = cmd("mul", _cmd_mul, "normal-ordered product of two expressions")
    p.add_argument("left")
    p.add_argument("right")
    p = cmd("comm", _cmd_comm, "commutator of two expressions")
    p.add_argument("left")
    p.add_argument("right")
    p = cmd("ord", _cmd_ord, "filtration order")
    p.add_argument("expr")
    p = cmd("degree", _cmd_degree, "exponential degree (or power degree)")
    p.add_argument("expr")
    p.add_argument("--power", action="store_true", help="grade by power exponents")
    p = cmd("symbol", _cmd_symbol, "top-order graded symbol")
    p.add_argument("expr")
    p = cmd("grdiag", _cmd_grdiag, "filtration diagnostics for a pair")
    p.add_argument("left")
    p.add_argument("right")
    p = cmd("act", _cmd_act, "apply an operator to a function element")
    p.add_argument("operator")
    p.add_argument("function")
    p = cmd("probe", _cmd_probe, "zero-detection probe through the module action")
    p.add_argument("expr")
    p.add_argument("--maxdeg", type=int, default=4)
    p = cmd("noetherian", _cmd_noetherian, "ascending-chain witness pair")
    p.add_argument("n", type=int)
    p = cmd("liebracket", _cmd_liebracket, "witt bracket of two derivations")
    p.add_argument("left")
    p.add_argument("right")
    p = cmd("cespan", _cmd_cespan, "build and describe a bracket-closed span")
    p.add_argument("span", help="preset name (borel, sl2like) or comma-joined derivations")
    p.add_argument("--grading", type=int, default=None)
    p = cmd("ced", _cmd_ced, "differential of a seeded random cochain")
    p.add_argument("span")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--grading", type=int, default=None)
    p = cmd("eulerint", _cmd_eulerint, "integrate a seeded random coboundary")
    p.add_argument("span")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--ad-degree", type=int, default=1, dest="ad_degree")
    p.add_argument("--grading", type=int, default=None)
    p = cmd("hochb", _cmd_hochb, "Hochschild boundary of a tensor chain")
    p.add_argument("chain", help="comma-joined tensor factors")
    p = cmd("connesB", _cmd_connesB, "Connes B of a tensor chain")
    p.add_argument("chain")
    p = cmd("commspan", _cmd_commspan, "membership in a commutator span")
    p.add_argument("target")
    p.add_argument("pairs", nargs="+", help="each pair as 'P, Q'")
    p = cmd("star", _cmd_star, "truncated star product of two symbols")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--order", type=int, default=None)
    p = cmd("assoc", _cmd_assoc, "associativity defect of the star cochains")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--triples", type=int, default=20)
    p = cmd("rank2", _cmd_rank2, "rank-2 lattice deformation product")
    p.add_argument("alpha", help="lattice exponent, e.g. '1,0'")
    p.add_argument("beta")
    p.add_argument("--c", default="1", help="structure constant c_12")
    p = cmd("tshift", _cmd_tshift, "shifted differentiation rule report")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--var", type=int, default=1)
    p = cmd("mc", _cmd_mc, "Maurer-Cartan residual of the star cochains")
    p.add_argument("--triples", type=int, default=10)
    cmd("selftest", _cmd_selftest, "run every module invariant check")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else SessionConfig()
        overrides = {}
        if args.format is not None:
            overrides["format"] = args.format
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.hbar_order is not None:
            overrides["hbar_order"] = args.hbar_order
        if overrides:
            config = config.replace(**overrides)
        ctx = _Context(config)
        out = args.fn(ctx, args)
        text, payload = out[0], out[1]
        status = out[2] if len(out) > 2 else 0
    except KernelError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    if config.format == "structured":
        doc = {"schema": SCHEMA, "command": args.command}
        doc.update(payload)
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
