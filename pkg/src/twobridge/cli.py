"""Command line front end: one subcommand per decision procedure or numeric check.

Exit status is 0 on success, 1 when a verification fails and 2 on bad input.
"""

from __future__ import annotations

import csv
import json
import sys
from math import gcd
from typing import Dict, List, Optional

import click

from . import decide, orbit, riley, smallcancel, sseq, words
from .config import RunConfig, parse_config_text
from .farey import Slope, enumerate_interval, fusion_intervals

VERIFY_FAILED = 1


class BadInput(click.UsageError):
    """Raised for arguments that violate a precondition (exit status 2)."""


class SlopeType(click.ParamType):
    name = "slope"

    def convert(self, value, param, ctx):
        if isinstance(value, Slope):
            return value
        try:
            return Slope.parse(value)
        except (ValueError, ZeroDivisionError) as exc:
            self.fail(f"{value!r} is not a slope q/p, an integer or 'inf' ({exc})", param, ctx)


SLOPE = SlopeType()


def _cfg(ctx: click.Context) -> RunConfig:
    return ctx.find_root().obj


def _emit(ctx: click.Context, payload: Dict[str, object], text: Optional[str] = None) -> None:
    fmt = _cfg(ctx).format
    if fmt == "text" and text is not None:
        click.echo(text)
    else:
        click.echo(json.dumps(payload, sort_keys=True))


def _guard(fn, *args, **kwargs):
    # module preconditions surface as ValueError; report them as usage errors
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc


def _pairs(w: words.Word) -> List[List[object]]:
    return [[g, e] for g, e in w.letters]


def _edges(trace) -> List[str]:
    return [str(e) for e in trace]


def _complex(z: complex) -> List[float]:
    return [z.real, z.imag]


@click.group(context_settings={"help_option_names": ["-h", "--help"]}, invoke_without_command=True)
@click.option("--config", "config_file", type=click.File("r"), help="key=value file of defaults.")
@click.option("--max-den", type=int, help="Largest slope denominator visited by sums.")
@click.option("--depth", type=int, help="Word-length depth for limit-set and evidence runs.")
@click.option("--prune-eps", type=float, help="Cut a summation subtree once its root term is this small.")
@click.option("--omega", type=str, help="Use this representation parameter instead of the selected root.")
@click.option("--format", "fmt", type=click.Choice(["auto", "json", "csv", "svg", "text"]),
              help="Output format; auto picks text for word and JSON elsewhere.")
@click.option("--mirror-reduce", is_flag=True, default=None, help="Accept r > 1/2 by the reflection s -> 1 - s.")
@click.option("--show-config", is_flag=True, help="Print the effective configuration and exit.")
@click.pass_context
def main(ctx, config_file, max_den, depth, prune_eps, omega, fmt, mirror_reduce, show_config):
    """Loops on the bridge sphere of 2-bridge links."""
    cfg = RunConfig()
    try:
        if config_file is not None:
            cfg = cfg.with_values(parse_config_text(config_file.read()))
        overrides = {k: str(v) for k, v in (("max_den", max_den), ("depth", depth), ("prune_eps", prune_eps),
                                            ("omega", omega), ("format", fmt), ("mirror_reduce", mirror_reduce))
                     if v is not None}
        cfg = cfg.with_values(overrides)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    ctx.obj = cfg
    if show_config:
        click.echo(json.dumps(cfg.as_dict(), sort_keys=True))
        ctx.exit(0)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help(), err=True)
        ctx.exit(2)


# ---------------------------------------------------------------- words and sequences


@main.command("word", help="The relator u_r and its half word.")
@click.argument("r", type=SLOPE)
@click.option("--hat", is_flag=True, help="Print the half word instead of the relator (text format).")
@click.pass_context
def word_cmd(ctx, r, hat):
    u = _guard(words.u_word, r)
    h = _guard(words.u_hat, r)
    if _cfg(ctx).format == "json":
        click.echo(json.dumps({"r": str(r), "u": _pairs(u), "u_hat": _pairs(h)}, sort_keys=True))
    else:
        click.echo(words.format_word(h if hat else u))


@main.command("sseq")
@click.argument("r", type=SLOPE)
@click.pass_context
def sseq_cmd(ctx, r):
    """S(r), CS(r) and the blocks S1, S2."""
    S, CS, S1, S2 = _guard(sseq.slope_s_sequences, r)
    _emit(ctx, {"r": str(r), "S": list(S.runs), "CS": list(CS.representative.runs), "S1": list(S1.runs), "S2": list(S2.runs)},
          f"S={S} CS={CS} S1={S1} S2={S2}")


@main.command()
@click.argument("r", type=SLOPE)
@click.pass_context
def pieces(ctx, r):
    """Every subword of the relator words with its piece data."""
    rows = _guard(smallcancel.piece_table, r)
    cfg = _cfg(ctx)
    if cfg.format == "csv":
        out = csv.writer(sys.stdout)
        out.writerow(["subword", "sseq", "is_piece", "min_piece_count"])
        for row in rows:
            out.writerow([row.subword, " ".join(map(str, row.sseq)), row.is_piece, row.min_piece_count])
        return
    for row in rows:
        count = row.min_piece_count
        click.echo(json.dumps({"subword": row.subword, "sseq": list(row.sseq), "is_piece": row.is_piece,
                               "min_piece_count": count if count != float("inf") else None}, sort_keys=True))


# ---------------------------------------------------------------- decisions


@main.command()
@click.argument("r", type=SLOPE)
@click.argument("s", type=SLOPE)
@click.pass_context
def reduce(ctx, r, s):
    """Carry s into I1, I2 or {inf, r} with wall reflections."""
    s0, trace = _guard(orbit.orbit_normalize, r, s)
    _emit(ctx, {"r": str(r), "s": str(s), "normal_form": str(s0), "trace": _edges(trace)}, str(s0))


@main.command()
@click.argument("r", type=SLOPE)
@click.argument("s", type=SLOPE)
@click.pass_context
def null(ctx, r, s):
    """Is the loop of slope s null-homotopic in K(r)?"""
    v = _guard(decide.is_null_homotopic, r, s)
    _emit(ctx, {"r": str(r), "s": str(s), "null_homotopic": v.null_homotopic, "normal_form": str(v.normal_form),
                "clause": decide.NULL_ORBIT, "trace": _edges(v.trace)}, str(v.null_homotopic).lower())


@main.command()
@click.argument("r", type=SLOPE)
@click.argument("s", type=SLOPE)
@click.argument("t", type=SLOPE)
@click.pass_context
def homotopic(ctx, r, s, t):
    """Are the loops of slopes s and t homotopic in K(r)?"""
    v = _guard(decide.are_homotopic, r, s, t, _cfg(ctx).mirror_reduce)
    _emit(ctx, {"r": str(r), "s": str(s), "t": str(t), "homotopic": v.homotopic, "outcome": v.outcome.value,
                "clause": v.witness, "normal_forms": [str(x) for x in v.normal_forms],
                "trace": [_edges(x) for x in v.traces], "mirrored": v.mirrored}, v.outcome.value)


@main.command()
@click.argument("r", type=SLOPE)
@click.argument("s", type=SLOPE)
@click.pass_context
def epi(ctx, r, s):
    """Does the epimorphism test for K(s) -> K(r) pass?"""
    ok = _guard(decide.has_epimorphism, r, s)
    _emit(ctx, {"r": str(r), "s": str(s), "epimorphism": ok}, str(ok).lower())


@main.command()
@click.argument("r", type=SLOPE)
@click.argument("s", type=SLOPE)
@click.pass_context
def peripheral(ctx, r, s):
    """Is the loop of slope s peripheral in K(r)?"""
    v = _guard(decide.peripheral_status, r, s, _cfg(ctx).mirror_reduce)
    _emit(ctx, {"r": str(r), "s": str(s), "peripheral": v.peripheral, "clause": v.clause,
                "normal_form": str(v.normal_form), "n": v.n, "mirrored": v.mirrored}, str(v.peripheral).lower())


@main.command()
@click.argument("r", type=SLOPE)
@click.argument("s", type=SLOPE)
@click.pass_context
def primitive(ctx, r, s):
    """Is the loop of slope s primitive, or a proper power, in K(r)?"""
    v = _guard(decide.primitivity, r, s, _cfg(ctx).mirror_reduce)
    _emit(ctx, {"r": str(r), "s": str(s), "verdict": str(v), "exponent": v.exponent, "clause": v.clause,
                "normal_form": str(v.normal_form), "mirrored": v.mirrored}, str(v))


# ---------------------------------------------------------------- limit set


def gaps_svg(rows: List[List[orbit.Gap]], width: int = 800, row_height: int = 24) -> str:
    """[0, 1] as a strip per depth with the gaps drawn as filled rectangles."""
    pad = 10
    height = pad * 2 + row_height * len(rows)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + 2 * pad}" height="{height}">']
    for i, gaps in enumerate(rows):
        y = pad + i * row_height
        parts.append(f'<rect x="{pad}" y="{y + 4}" width="{width}" height="{row_height - 8}" '
                     f'fill="none" stroke="black" stroke-width="0.5"/>')
        for g in gaps:
            x0 = pad + float(g.lo) * width
            w = float(g.length) * width
            parts.append(f'<rect x="{x0:.4f}" y="{y + 4}" width="{w:.4f}" height="{row_height - 8}" '
                         f'fill="steelblue"><title>depth {g.depth}: ({g.lo}, {g.hi})</title></rect>')
    parts.append("</svg>")
    return "\n".join(parts)


@main.command()
@click.argument("r", type=SLOPE)
@click.pass_context
def limitset(ctx, r):
    """Gaps of the depth-limited limit set approximation in [0, 1]."""
    cfg = _cfg(ctx)
    rows = [_guard(orbit.limit_set_gaps, r, d) for d in range(cfg.depth + 1)]
    if cfg.format == "svg":
        click.echo(gaps_svg(rows))
        return
    gaps = rows[-1]
    total = orbit.gap_measure(gaps)
    _emit(ctx, {"r": str(r), "depth": cfg.depth, "gaps": [g.as_dict() for g in gaps],
                "total_length": f"{total.numerator}/{total.denominator}",
                "total_by_depth": [float(orbit.gap_measure(x)) for x in rows]})


# ---------------------------------------------------------------- numerics


def _representation(ctx, r: Slope) -> riley.Representation:
    cfg = _cfg(ctx)
    if cfg.omega is not None:
        return _guard(riley.make_representation, r, cfg.omega, cfg.tolerances)
    try:
        return riley.geometric_representation(r, cfg.tolerances)
    except riley.SelectionFailed as exc:
        raise BadInput(str(exc)) from exc
    except ValueError as exc:
        raise BadInput(str(exc)) from exc


class _TermWriter:
    def __init__(self, handle):
        self.out = csv.writer(handle)
        self.out.writerow(["slope", "trace_re", "trace_im", "h_re", "h_im"])

    def __call__(self, s: Slope, trace: complex, h: complex) -> None:
        self.out.writerow([str(s), repr(trace.real), repr(trace.imag), repr(h.real), repr(h.imag)])


@main.command()
@click.argument("r", type=SLOPE)
@click.option("--dump-terms", type=click.File("w"), help="Write (slope, trace, h) rows to this CSV file.")
@click.option("--doublings", type=int, default=3, show_default=True,
              help="Convergence check: sums at max_den / 2^k for k = doublings..0.")
@click.pass_context
def mcshane(ctx, r, dump_terms, doublings):
    """Partial sum of the 2-bridge identity (target -1)."""
    cfg = _cfg(ctx)
    rep = _representation(ctx, r)
    sink = _TermWriter(dump_terms) if dump_terms else None
    report = riley.mcshane_sum(rep, r, cfg.tolerances.prune_eps, cfg.max_den, sink)
    start = max(1, cfg.max_den >> doublings)
    run = riley.doubling_run(lambda n: riley.mcshane_sum(rep, r, cfg.tolerances.prune_eps, n), start, doublings)
    payload = {"r": str(r), "omega": _complex(rep.omega), "partial_sum": _complex(report.partial_sum),
               "target": _complex(report.target), "term_count": report.term_count, "max_den": report.max_den,
               "tail_estimate": report.tail_estimate, "tail_estimate_kind": "heuristic",
               "error": report.error, "branch_spread": report.branch_spread,
               "doubling_differences": run.differences, "converging": run.settling}
    _emit(ctx, payload)
    if not run.settling:
        click.echo(f"partial sums are not settling over {doublings} doublings", err=True)
        ctx.exit(VERIFY_FAILED)


@main.command()
@click.argument("r", type=SLOPE)
@click.pass_context
def modulus(ctx, r):
    """Cusp modulus from the terms on I1."""
    cfg = _cfg(ctx)
    rep = _representation(ctx, r)
    lam = riley.cusp_modulus(rep, r, cfg.tolerances.prune_eps, cfg.max_den)
    _emit(ctx, {"r": str(r), "lambda_re": lam.real, "lambda_im": lam.imag,
                "parity": "odd" if r.den % 2 else "even", "lambda_re_mod_2": lam.real % 2,
                "note": "the real part depends on the longitude and is defined modulo 2"})


@main.command()
@click.argument("traces", nargs=-1, type=complex)
@click.option("--dump-terms", type=click.File("w"), help="Write (slope, trace, h) rows to this CSV file.")
@click.pass_context
def classical(ctx, traces, dump_terms):
    """Punctured-torus identity (target 1/2) for traces X Y Z (default 3 3 3)."""
    cfg = _cfg(ctx)
    if not traces:
        traces = (3, 3, 3)
    if len(traces) != 3:
        raise BadInput("classical takes exactly three traces x y z")
    sink = _TermWriter(dump_terms) if dump_terms else None
    report = _guard(riley.classical_mcshane_check, *traces, prune_eps=cfg.tolerances.prune_eps,
                    max_den=cfg.max_den, tol=cfg.tolerances, sink=sink)
    payload = {"traces": [_complex(complex(t)) for t in traces]}
    payload.update(report.as_dict())
    _emit(ctx, payload)


@main.command()
@click.argument("r", type=SLOPE)
@click.pass_context
def evidence(ctx, r):
    """Trace growth toward limit points and toward gap points."""
    cfg = _cfg(ctx)
    rep = _representation(ctx, r)
    report = _guard(riley.end_invariant_evidence, rep, r, cfg.depth)
    _emit(ctx, report.as_dict())


# ---------------------------------------------------------------- verify


def verification_failures(max_p: int, max_den: int) -> Dict[str, List[str]]:
    """Run the exhaustive structural checks; returns failing cases per suite."""
    out: Dict[str, List[str]] = {"sequence": [], "connection": [], "c4_t4": [], "pieces": [], "two_pieces": []}
    for p in range(2, max_p + 1):
        for q in range(1, p):
            if gcd(q, p) != 1:
                continue
            r = Slope(q, p)
            if not sseq.check_prop_sequence(r).ok:
                out["sequence"].append(str(r))
            fd = fusion_intervals(r)
            slopes = [s for I in (fd.I1, fd.I2) for s in enumerate_interval(I, max_den) if s.num > 0]
            out["connection"].extend(f"{r}:{s}" for s in sseq.connection_violations(r, slopes))
            if not (smallcancel.verify_C4(r) and smallcancel.verify_T4(r)):
                out["c4_t4"].append(str(r))
            R = smallcancel.symmetrized_set(r)
            counts = smallcancel.all_min_piece_counts(R)
            for v, n in counts.items():
                if smallcancel.is_piece_sseq(r, v, R) != (n == 1):
                    out["pieces"].append(f"{r}:{v}")
                if smallcancel.not_two_pieces_sseq(r, v) != (n >= 3):
                    out["two_pieces"].append(f"{r}:{v}")
    return out


@main.command()
@click.option("--max-p", type=int, default=20, show_default=True, help="Check every r = q/p with p up to this.")
@click.pass_context
def verify(ctx, max_p):
    """Exhaustive structural checks on S-sequences and small cancellation."""
    cfg = _cfg(ctx)
    if max_p < 2:
        raise BadInput("--max-p must be at least 2")
    failures = verification_failures(max_p, min(cfg.max_den, 60))
    ok = not any(failures.values())
    _emit(ctx, {"max_p": max_p, "ok": ok, "failures": failures})
    if not ok:
        ctx.exit(VERIFY_FAILED)


def run(argv: Optional[List[str]] = None) -> int:
    """Entry point returning the exit status instead of raising SystemExit."""
    try:
        # without standalone mode, click returns the code given to ctx.exit
        code = main.main(args=argv, prog_name="twobridge", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    return code if isinstance(code, int) else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(run())
