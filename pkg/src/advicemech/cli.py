"""Command-line front end: run mechanisms on instance files, audit them,
generate hard-instance corpora, and sweep consistency/robustness frontiers.

stdout carries data (tab-separated key/value lines or TSV tables); stderr
carries diagnostics.  Exit codes: 0 success (audit: no violations found),
1 audit violations, 2 parse error, 3 class/advice mismatch, 4 degenerate
instance.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import audit as audit_mod
from . import hardness
from .classification import sample_outcome
from .formats import (
    InstanceParseError,
    format_number,
    load_instance,
    parse_number,
    serialize_instance,
)
from .model import (
    ClassMismatchError,
    ConstantChoice,
    ConstantClass,
    InvalidInstanceError,
    LabelingChoice,
    LabelingLottery,
    LabelingsClass,
    LinearChoice,
    LinearClass,
    exact_div,
    global_risk,
)
from .regression import DegenerateLinearInstance

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_DEGENERATE = 4

DEFAULT_SEED = 20250809  # fixed so runs without --seed are reproducible

FAMILIES = {
    "pfa": audit_mod.pfa_family,
    "lpfa": audit_mod.lpfa_family,
    "srda": audit_mod.srda_family,
    "pfa-two-labeling": audit_mod.pfa_two_labeling_family,
    "srda-two-labeling": audit_mod.srda_two_labeling_family,
    "mean": None,  # baseline, audit only
}


def _parse_gamma_list(raw):
    return [Fraction(tok) for tok in str(raw).split(",") if tok]


def _parse_advice(raw, instance):
    cls = instance.function_class
    if isinstance(cls, LabelingsClass):
        tok = str(raw).strip()
        if tok.startswith("c"):
            tok = tok[1:]
        index = int(tok)
        if not 0 <= index < len(cls.labelings):
            raise ClassMismatchError(f"labeling index {index} out of range")
        return index
    return parse_number(raw)


def _mechanism(name, gamma, instance):
    if name == "mean":
        return audit_mod.mean_mechanism()
    if name == "pfa":
        if not isinstance(instance.function_class, ConstantClass):
            raise ClassMismatchError("pfa needs a constant-class instance")
        return audit_mod.pfa_mechanism(gamma, instance.function_class.domain)
    if name == "lpfa":
        if not isinstance(instance.function_class, LinearClass):
            raise ClassMismatchError("lpfa needs a homogeneous-linear instance")
        return audit_mod.lpfa_mechanism(gamma)
    if name == "srda":
        return audit_mod.srda_mechanism(gamma)
    if name == "pfa-two-labeling":
        return audit_mod.pfa_two_labeling_mechanism(gamma)
    if name == "srda-two-labeling":
        return audit_mod.srda_two_labeling_mechanism(gamma)
    raise ClassMismatchError(f"unknown mechanism {name!r}")


def _describe(outcome) -> str:
    if isinstance(outcome, ConstantChoice):
        return f"constant {format_number(outcome.value)}"
    if isinstance(outcome, LinearChoice):
        return f"slope {format_number(outcome.slope)}"
    if isinstance(outcome, LabelingChoice):
        return f"labeling {outcome.index}"
    if isinstance(outcome, LabelingLottery):
        parts = " ".join(
            f"{i}:{format_number(p)}" for i, p in outcome.branches
        )
        return f"lottery {parts}"
    return repr(outcome)


def _emit(out, key, value):
    out.write(f"{key}\t{value}\n")


def cmd_run(args, out, err) -> int:
    instance = load_instance(args.instance)
    gamma = Fraction(args.gamma)
    advice = _parse_advice(args.advice, instance)
    if args.mechanism == "lpfa" and isinstance(instance.function_class, LinearClass):
        if all(p.x == 0 for a in instance.agents for p in a.points):
            raise DegenerateLinearInstance(
                "all x values are zero; every slope fits equally well"
            )
    mech = _mechanism(args.mechanism, gamma, instance)
    outcome = mech(instance, advice)
    achieved = global_risk(outcome, instance)
    best = audit_mod.brute_force_optimal_risk(instance)
    ratio = 1 if best == 0 and achieved == 0 else (
        float("inf") if best == 0 else exact_div(achieved, best)
    )
    _emit(out, "mechanism", args.mechanism)
    _emit(out, "gamma", format_number(gamma))
    _emit(out, "advice", args.advice)
    _emit(out, "choice", _describe(outcome))
    _emit(out, "mechanism_risk", format_number(achieved))
    _emit(out, "optimal_risk", format_number(best))
    _emit(out, "ratio", "inf" if ratio == float("inf") else format_number(ratio))
    if isinstance(outcome, LabelingLottery):
        seed = args.seed if args.seed is not None else DEFAULT_SEED
        _emit(out, "sampled", f"labeling {sample_outcome(outcome, seed)}")
    return EXIT_OK


def _corpus(path) -> list:
    p = Path(path)
    if p.is_dir():
        manifest = p / "manifest.txt"
        if manifest.exists():
            names = [
                line.strip()
                for line in manifest.read_text().splitlines()
                if line.strip()
            ]
        else:
            names = sorted(f.name for f in p.glob("*.json"))
        return [(name, load_instance(p / name)) for name in names]
    return [(p.name, load_instance(p))]


def _space(raw, instance, advice):
    if raw is None:
        if isinstance(instance.function_class, LabelingsClass):
            return audit_mod.AllBinaryVectors(instance.function_class.num_points)
        return audit_mod.ProjectedConstant.for_instance(instance, advice)
    if raw == "projected":
        return audit_mod.ProjectedConstant.for_instance(instance, advice)
    if raw == "binary":
        return audit_mod.AllBinaryVectors(instance.function_class.num_points)
    if raw.startswith("grid:"):
        levels = tuple(parse_number(tok) for tok in raw[5:].split(","))
        return audit_mod.GridLabels(levels)
    raise ClassMismatchError(f"unknown misreport space {raw!r}")


def cmd_audit(args, out, err) -> int:
    corpus = _corpus(args.instance)
    gammas = _parse_gamma_list(args.gamma)
    lines = []
    violations = []
    checked = 0
    for name, instance in corpus:
        advices = [
            _parse_advice(tok, instance) for tok in str(args.advice).split(",")
        ]
        for gamma in gammas:
            mech = _mechanism(args.mechanism, gamma, instance)
            for advice in advices:
                space = _space(args.space, instance, advice)
                if args.max_coalition > 1:
                    report = audit_mod.check_group_strategyproof(
                        mech, instance, advice, space,
                        args.max_coalition, epsilon=Fraction(args.epsilon),
                    )
                else:
                    report = audit_mod.check_strategyproof(
                        mech, instance, advice, space,
                        epsilon=Fraction(args.epsilon),
                    )
                checked += report.candidates_checked
                for v in report.violations:
                    violations.append((name, gamma, advice, v))
    lines.append(("mechanism", args.mechanism))
    lines.append(("gamma", ",".join(format_number(g) for g in gammas)))
    lines.append(("advice", args.advice))
    lines.append(("epsilon", args.epsilon))
    lines.append(("max_coalition", args.max_coalition))
    lines.append(("instances", len(corpus)))
    lines.append(("candidates", checked))
    lines.append(("violations", len(violations)))
    body = [f"{k}\t{v}" for k, v in lines]
    body.append("agents\tmisreports\trisk_before\trisk_after\tgain\tinstance\tgamma\tadvice")
    for name, gamma, advice, v in violations:
        body.append(
            "\t".join(
                [
                    ",".join(str(i) for i in v.agents),
                    ";".join(str(list(m)) for m in v.misreports),
                    ",".join(format_number(r) for r in v.risks_before),
                    ",".join(format_number(r) for r in v.risks_after),
                    format_number(v.gain),
                    name,
                    format_number(gamma),
                    str(advice),
                ]
            )
        )
    text = "\n".join(body) + "\n"
    out.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK if not violations else EXIT_VIOLATIONS


def cmd_gen(args, out, err) -> int:
    fam = args.family
    if fam == "s":
        instance = hardness.gen_S(args.n, args.k, args.t, parse_number(args.z))
    elif fam == "s-chain":
        instance = hardness.gen_S_chain(
            args.n, args.k, args.t,
            parse_number(args.z_from), parse_number(args.z_to), args.j,
        )
    elif fam == "s-final":
        instance = hardness.gen_S_final(args.n, args.k, args.t, parse_number(args.d))
    elif fam == "s-linear":
        instance = hardness.gen_S_linear(args.n, args.k, args.t, parse_number(args.z))
    elif fam == "voting-table":
        prefs = []
        for block in args.preferences.split(","):
            order = tuple(int(tok) for tok in block.strip().split(">"))
            prefs.append(order)
        instance = hardness.voting_instance(prefs)
    elif fam == "randomized-lb":
        instance = hardness.gen_randomized_lb(args.k, args.variant, n=args.n)
    else:
        raise InstanceParseError(f"unknown family {fam!r}")
    text = serialize_instance(instance)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        err.write(f"wrote {args.out}\n")
    else:
        out.write(text)
    return EXIT_OK


def cmd_sweep(args, out, err) -> int:
    corpus = [inst for _, inst in _corpus(args.corpus)]
    family = FAMILIES[args.mechanism]
    if family is None:
        raise ClassMismatchError("the mean baseline has no tradeoff curve to sweep")
    rows = audit_mod.consistency_robustness_sweep(
        family(), _parse_gamma_list(args.gamma), corpus,
        grid_points=args.grid_points, tolerance=Fraction(args.tolerance),
    )
    lines = ["gamma\tconsistency\trobustness\tbound_consistency\tbound_robustness\tpass"]
    for r in rows:
        lines.append(
            "\t".join(
                [
                    format_number(r.gamma),
                    f"{float(r.consistency):.12g}",
                    f"{float(r.robustness):.12g}",
                    f"{float(r.bound_consistency):.12g}",
                    f"{float(r.bound_robustness):.12g}",
                    "true" if r.ok else "false",
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    out.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advicemech",
        description="strategyproof fitting mechanisms with advice: run, audit, generate, sweep",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one mechanism on one instance file")
    run.add_argument("instance")
    run.add_argument("--mechanism", required=True, choices=sorted(FAMILIES))
    run.add_argument("--gamma", default="1")
    run.add_argument("--advice", required=True)
    run.add_argument("--seed", type=int, default=None)
    run.set_defaults(fn=cmd_run)

    aud = sub.add_parser("audit", help="misreport audit over an instance or corpus dir")
    aud.add_argument("instance")
    aud.add_argument("--mechanism", required=True, choices=sorted(FAMILIES))
    aud.add_argument("--gamma", default="1")
    aud.add_argument("--advice", required=True)
    aud.add_argument("--space", default=None)
    aud.add_argument("--epsilon", default="0")
    aud.add_argument("--max-coalition", type=int, default=1)
    aud.add_argument("--out", default=None)
    aud.set_defaults(fn=cmd_audit)

    gen = sub.add_parser("gen", help="emit a hard-instance file")
    gen.add_argument(
        "family",
        choices=["s", "s-chain", "s-final", "s-linear", "voting-table", "randomized-lb"],
    )
    gen.add_argument("--n", type=int, default=4)
    gen.add_argument("--k", type=int, default=1)
    gen.add_argument("--t", type=int, default=1)
    gen.add_argument("--z", default="1")
    gen.add_argument("--z-from", dest="z_from", default="1")
    gen.add_argument("--z-to", dest="z_to", default="2")
    gen.add_argument("--j", type=int, default=0)
    gen.add_argument("--d", default="2")
    gen.add_argument("--variant", choices=["consistency", "duple"], default="duple")
    gen.add_argument(
        "--preferences", default="1>2>3", help="comma-separated orders like 2>1>3"
    )
    gen.add_argument("--out", default=None)
    gen.set_defaults(fn=cmd_gen)

    sweep = sub.add_parser("sweep", help="consistency/robustness frontier over a corpus")
    sweep.add_argument("corpus")
    sweep.add_argument("--mechanism", required=True, choices=sorted(FAMILIES))
    sweep.add_argument("--gamma", default="0.5,1,2")
    sweep.add_argument("--grid-points", type=int, default=21)
    sweep.add_argument("--tolerance", default="0")
    sweep.add_argument("--out", default=None)
    sweep.set_defaults(fn=cmd_sweep)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, out, err)
    except InstanceParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except FileNotFoundError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except DegenerateLinearInstance as exc:
        err.write(f"degenerate instance: {exc}\n")
        return EXIT_DEGENERATE
    except InvalidInstanceError as exc:
        err.write(f"parse error: invalid instance: {exc}\n")
        return EXIT_PARSE
    except ClassMismatchError as exc:
        err.write(f"class/advice mismatch: {exc}\n")
        return EXIT_MISMATCH
    except (ValueError, ZeroDivisionError) as exc:
        err.write(f"class/advice mismatch: {exc}\n")
        return EXIT_MISMATCH


def entry() -> None:
    raise SystemExit(main())
