"""Command line interface.

Exit codes: 0 when the query was answered (whatever the verdict), 1 for
model or data errors (unparseable file, unknown node, bad alpha), 2 for
usage errors (unknown flags, malformed flag syntax).

When a model declares a predictor, every subcommand operates on the
augmented graph, so the prediction node can be referenced like any
other.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bias import DisparityVerdict, has_disparity, is_bias, unfair_nodes
from .errors import FairDagError
from .fairness import check_criterion, fairness_report
from .modelio import ModelSpec, export_dot, parse_model, serialize_model
from .paths import PathTrace, d_separated, enumerate_paths
from .sim import (
    build_scm,
    ci_test,
    parse_coefficients,
    parse_selection,
    sample,
    select,
)

CRITERION_CHOICES = ("independence", "separation", "sufficiency", "all")


def _load_model(path: str) -> ModelSpec:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def _given_list(text: str) -> list[str]:
    return [part for part in text.split(",") if part]


def _test_spec(text: str) -> tuple[str, str, list[str]]:
    pair, _, rest = text.partition("|")
    names = _given_list(pair)
    if len(names) != 2:
        raise argparse.ArgumentTypeError(
            f"expected --test X,Y or X,Y|A,B, got {text!r}"
        )
    return names[0], names[1], _given_list(rest)


def _selection_spec(text: str) -> tuple[str, str, float]:
    try:
        return parse_selection(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _trace_json(trace: PathTrace) -> dict:
    return {
        "nodes": list(trace.nodes),
        "arrows": list(trace.arrows),
        "roles": list(trace.roles),
        "status": trace.status,
        "blocking_nodes": sorted(trace.blocking_nodes),
    }


def _witnesses_json(verdict: DisparityVerdict) -> list[dict]:
    return [
        {
            "nodes": list(w.nodes),
            "unjustified_edges": [list(edge) for edge in w.unjustified_edges],
        }
        for w in verdict.witnesses
    ]


def _emit(args: argparse.Namespace, payload: dict, text: str) -> int:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)
    return 0


def _resolve(
    value: str | None, fallback: str | None, flag: str, role: str
) -> str:
    if value is not None:
        return value
    if fallback is not None:
        return fallback
    raise FairDagError(f"model declares no {role}; pass {flag}")


def _status_suffix(trace: PathTrace) -> str:
    if trace.status == "open":
        return "[open]"
    return f"[closed; blocked at {', '.join(sorted(trace.blocking_nodes))}]"


# -- subcommand handlers --------------------------------------------------


def _cmd_check(args) -> int:
    model = _load_model(args.file)
    lines = [
        f"model {model.name}: {len(model.dag)} nodes, {len(model.dag.edges)} edges"
    ]
    if model.interest:
        lines.append(f"  interest {model.interest}")
    if model.outcome:
        lines.append(f"  outcome {model.outcome}")
    if model.predictor:
        parents = ",".join(sorted(model.predictor.predictor_set))
        det = " deterministic" if model.predictor.deterministic else ""
        lines.append(f"  predictor {model.predictor.name} from {parents}{det}")
    model.augmented_dag()  # predictor declaration must attach cleanly
    payload = {
        "command": "check",
        "name": model.name,
        "nodes": len(model.dag),
        "edges": len(model.dag.edges),
        "interest": model.interest,
        "outcome": model.outcome,
        "predictor": (
            {
                "name": model.predictor.name,
                "from": sorted(model.predictor.predictor_set),
                "deterministic": model.predictor.deterministic,
            }
            if model.predictor
            else None
        ),
    }
    return _emit(args, payload, "\n".join(lines))


def _cmd_paths(args) -> int:
    model = _load_model(args.file)
    dag = model.augmented_dag()
    x = _resolve(getattr(args, "from"), model.interest, "--from", "interest")
    y = _resolve(args.to, model.outcome, "--to", "outcome")
    given = args.given or []
    traces = enumerate_paths(dag, x, y, given)
    lines = [f"{len(traces)} path(s) from {x} to {y}"]
    for trace in traces:
        lines.append(f"  {trace.render(dag)}  {_status_suffix(trace)}")
    payload = {
        "command": "paths",
        "model": model.name,
        "x": x,
        "y": y,
        "given": sorted(given),
        "paths": [_trace_json(t) for t in traces],
    }
    return _emit(args, payload, "\n".join(lines))


def _cmd_dsep(args) -> int:
    model = _load_model(args.file)
    dag = model.augmented_dag()
    x = _resolve(args.x, model.interest, "--x", "interest")
    y = _resolve(args.y, model.outcome, "--y", "outcome")
    given = args.given or []
    verdict = d_separated(dag, x, y, given)
    cond = ", ".join(sorted(verdict.conditioning_set)) or "(empty)"
    lines = ["d-separated" if verdict.separated else "d-connected"]
    lines.append(f"  conditioning set: {cond}")
    for trace in verdict.open_paths:
        lines.append(f"  open: {trace.render(dag)}")
    payload = {
        "command": "dsep",
        "model": model.name,
        "x": x,
        "y": y,
        "given": sorted(given),
        "conditioning_set": sorted(verdict.conditioning_set),
        "separated": verdict.separated,
        "open_paths": [_trace_json(t) for t in verdict.open_paths],
    }
    return _emit(args, payload, "\n".join(lines))


def _cmd_bias(args) -> int:
    model = _load_model(args.file)
    dag = model.augmented_dag()
    x = _resolve(args.x, model.interest, "--x", "interest")
    y = _resolve(args.y, model.outcome, "--y", "outcome")
    verdict = is_bias(dag, x, y)
    payload = {
        "command": "bias",
        "model": model.name,
        "x": x,
        "y": y,
        "bias": verdict,
    }
    return _emit(args, payload, f"BIAS: {'yes' if verdict else 'no'}")


def _witness_lines(verdict: DisparityVerdict, limit: int = 10) -> list[str]:
    lines = [f"  {w.render()}" for w in verdict.witnesses[:limit]]
    extra = len(verdict.witnesses) - limit
    if extra > 0:
        lines.append(f"  (+{extra} more)")
    return lines


def _cmd_disparity(args) -> int:
    model = _load_model(args.file)
    dag = model.augmented_dag()
    x = _resolve(args.x, model.interest, "--x", "interest")
    y = _resolve(args.y, model.outcome, "--y", "outcome")
    verdict = has_disparity(dag, x, y)
    lines = [f"DISPARITY: {'yes' if verdict.present else 'no'}"]
    lines.extend(_witness_lines(verdict))
    payload = {
        "command": "disparity",
        "model": model.name,
        "x": x,
        "y": y,
        "present": verdict.present,
        "witnesses": _witnesses_json(verdict),
    }
    return _emit(args, payload, "\n".join(lines))


def _cmd_unfair(args) -> int:
    model = _load_model(args.file)
    dag = model.augmented_dag()
    x = _resolve(args.x, model.interest, "--x", "interest")
    nodes = sorted(unfair_nodes(dag, x))
    text = f"UNFAIR: {', '.join(nodes) if nodes else 'none'}"
    payload = {"command": "unfair", "model": model.name, "x": x, "unfair": nodes}
    return _emit(args, payload, text)


def _verdict_word(value: bool | None) -> str:
    if value is None:
        return "not-applicable"
    return "holds" if value else "fails"


def _cmd_fairness(args) -> int:
    model = _load_model(args.file)
    dag = model.augmented_dag()
    x = _resolve(args.x, model.interest, "--x", "interest")
    y = _resolve(args.y, model.outcome, "--y", "outcome")
    declared = model.predictor.name if model.predictor else None
    yhat = _resolve(args.yhat, declared, "--yhat", "predictor")
    deterministic = bool(
        model.predictor
        and model.predictor.deterministic
        and yhat == model.predictor.name
    )

    if args.criterion != "all":
        verdict = check_criterion(
            dag, args.criterion, x, y, yhat, deterministic=deterministic
        )
        lines = [f"{args.criterion}: {_verdict_word(verdict.holds)}"]
        for trace in verdict.open_paths:
            lines.append(f"  open: {trace.render(dag)}")
        payload = {
            "command": "fairness",
            "model": model.name,
            "x": x,
            "y": y,
            "predictor": yhat,
            "criterion": args.criterion,
            "holds": verdict.holds,
            "open_paths": [_trace_json(t) for t in verdict.open_paths],
        }
        if args.criterion == "sufficiency":
            lines.append(
                f"sufficiency (deterministic): {_verdict_word(verdict.deterministic_holds)}"
            )
            for trace in verdict.deterministic_open_paths:
                lines.append(f"  open: {trace.render(dag)}")
            payload["deterministic_holds"] = verdict.deterministic_holds
            payload["deterministic_open_paths"] = [
                _trace_json(t) for t in verdict.deterministic_open_paths
            ]
        return _emit(args, payload, "\n".join(lines))

    report = fairness_report(dag, x, y, yhat, deterministic=deterministic)
    lines = [
        f"model {model.name} (x={x}, y={y}, predictor={yhat})",
        f"independence: {_verdict_word(report.independence)}",
        f"separation: {_verdict_word(report.separation)}",
        f"sufficiency (structural): {_verdict_word(report.sufficiency_structural)}",
        f"sufficiency (deterministic): {_verdict_word(report.sufficiency_deterministic)}",
        f"disparity in outcome {y}: {'yes' if report.disparity_in_outcome else 'no'}",
    ]
    lines.extend(f"  {w.render()}" for w in report.outcome_witnesses[:10])
    lines.append(
        f"disparity in prediction {yhat}: "
        f"{'yes' if report.disparity_in_prediction else 'no'}"
    )
    lines.extend(f"  {w.render()}" for w in report.prediction_witnesses[:10])
    payload = {
        "command": "fairness",
        "model": model.name,
        "x": x,
        "y": y,
        "predictor": yhat,
        "independence": _verdict_word(report.independence),
        "separation": _verdict_word(report.separation),
        "sufficiency_structural": _verdict_word(report.sufficiency_structural),
        "sufficiency_deterministic": _verdict_word(report.sufficiency_deterministic),
        "disparity_in_outcome": report.disparity_in_outcome,
        "disparity_in_prediction": report.disparity_in_prediction,
        "outcome_witnesses": [
            {"nodes": list(w.nodes), "unjustified_edges": [list(e) for e in w.unjustified_edges]}
            for w in report.outcome_witnesses
        ],
        "prediction_witnesses": [
            {"nodes": list(w.nodes), "unjustified_edges": [list(e) for e in w.unjustified_edges]}
            for w in report.prediction_witnesses
        ],
    }
    return _emit(args, payload, "\n".join(lines))


def _cmd_simulate(args) -> int:
    model = _load_model(args.file)
    dag = model.augmented_dag()
    if args.coeffs:
        coefficients, noise = parse_coefficients(
            Path(args.coeffs).read_text(encoding="utf-8")
        )
        scm = build_scm(dag, coefficients, seed=args.seed, noise_sd=noise)
    else:
        scm = build_scm(dag, seed=args.seed)
    table = sample(scm, args.samples, args.seed)
    lines = [f"sampled n={table.n} nodes={len(dag)} seed={args.seed}"]
    selection = None
    if args.select:
        node, op, value = args.select
        table = select(table, node, op, value)
        selection = {"node": node, "op": op, "value": value, "kept": table.n}
        lines.append(
            f"selected {node} {op} {value}: kept {table.n} of {table.selected_from}"
        )
    payload: dict = {
        "command": "simulate",
        "model": model.name,
        "n": table.n,
        "seed": args.seed,
        "selected_from": table.selected_from,
        "selection": selection,
    }
    if args.test:
        x, y, given = args.test
        result = ci_test(table, x, y, given, args.alpha)
        cond = ", ".join(sorted(given))
        verdict = "independent" if result.independent else "dependent"
        lines.append(
            f"corr({x}, {y}{' | ' + cond if cond else ''}) = {result.r:.4f}  "
            f"z = {result.z:.2f}  {verdict} at alpha={result.alpha}"
        )
        payload["test"] = {
            "x": x,
            "y": y,
            "given": sorted(given),
            "r": result.r,
            "z": result.z,
            "alpha": result.alpha,
            "independent": result.independent,
            "n_effective": result.n_effective,
        }
    else:
        stats = {}
        for name in dag.node_names():
            column = table.column(name)
            stats[name] = {
                "mean": float(column.mean()),
                "sd": float(column.std(ddof=1)),
            }
            lines.append(
                f"  {name}: mean={stats[name]['mean']:.4f} sd={stats[name]['sd']:.4f}"
            )
        payload["columns"] = stats
    return _emit(args, payload, "\n".join(lines))


def _cmd_export(args) -> int:
    model = _load_model(args.file)
    content = (
        export_dot(model) if args.format == "dot" else serialize_model(model)
    )
    payload = {
        "command": "export",
        "model": model.name,
        "format": args.format,
        "content": content,
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(content)
    return 0


# -- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairdag",
        description="Bias, disparity and fairness verdicts on annotated causal DAGs.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="model file (.cg)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("check", parents=[common], help="parse and validate a model").set_defaults(
        handler=_cmd_check
    )

    p = sub.add_parser("paths", parents=[common], help="enumerate paths with roles")
    p.add_argument("--from", dest="from", default=None, metavar="NODE")
    p.add_argument("--to", default=None, metavar="NODE")
    p.add_argument("--given", type=_given_list, default=None, metavar="A,B")
    p.set_defaults(handler=_cmd_paths)

    p = sub.add_parser("dsep", parents=[common], help="d-separation verdict")
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.add_argument("--given", type=_given_list, default=None, metavar="A,B")
    p.set_defaults(handler=_cmd_dsep)

    p = sub.add_parser("bias", parents=[common], help="is the direct effect a bias")
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.set_defaults(handler=_cmd_bias)

    p = sub.add_parser("disparity", parents=[common], help="disparity verdict with witnesses")
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.set_defaults(handler=_cmd_disparity)

    p = sub.add_parser("unfair", parents=[common], help="all nodes with a disparity from x")
    p.add_argument("--x", default=None)
    p.set_defaults(handler=_cmd_unfair)

    p = sub.add_parser("fairness", parents=[common], help="fairness criteria report")
    p.add_argument("--criterion", choices=CRITERION_CHOICES, default="all")
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.add_argument("--yhat", default=None)
    p.set_defaults(handler=_cmd_fairness)

    p = sub.add_parser("simulate", parents=[common], help="draw samples and test independence")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--coeffs", default=None, metavar="FILE")
    p.add_argument("--select", type=_selection_spec, default=None, metavar="'NODE>c'")
    p.add_argument("--test", type=_test_spec, default=None, metavar="'X,Y|A,B'")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("export", parents=[common], help="export the model")
    p.add_argument("--format", choices=("dot", "cg"), required=True)
    p.set_defaults(handler=_cmd_export)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except FairDagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
