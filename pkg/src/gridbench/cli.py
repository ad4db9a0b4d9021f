"""Command-line entry points: gen, render, eval, score, baseline, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def _cmd_gen(args) -> int:
    from .procgen import sample_instance

    inst = sample_instance(args.task, args.level, args.seed)
    text = inst.serialize()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def _cmd_render(args) -> int:
    from .procgen import sample_instance
    from .render import RenderConfig, render_frame
    from .world import TaskInstance, initial_state

    if args.instance:
        inst = TaskInstance.from_json(json.loads(Path(args.instance).read_text()))
    else:
        inst = sample_instance(args.task, args.level, args.seed)
    frame = render_frame(
        initial_state(inst), RenderConfig(cell_px=args.cell_px)
    )
    Path(args.out).write_bytes(frame.png)
    print(f"{args.out}: {frame.size[0]}x{frame.size[1]} sha256={frame.sha256}")
    return 0


def _make_client(spec: str):
    from .harness import HttpChatClient, OracleClient, RandomClient

    if spec == "oracle":
        return OracleClient()
    if spec == "random":
        return RandomClient()
    if spec.startswith("api:"):
        return HttpChatClient(model=spec.split(":", 1)[1])
    raise SystemExit(f"unknown client spec {spec!r}")


def _cmd_eval(args) -> int:
    from .harness import EpisodeConfig, PromptMode, SuiteConfig, run_suite
    from .tasks import TASK_KINDS

    kinds = tuple(args.tasks.split(",")) if args.tasks else TASK_KINDS
    config = SuiteConfig(
        kinds=kinds,
        levels=tuple(int(x) for x in args.levels.split(",")),
        rounds=args.rounds,
        suite_seed=args.seed,
        episode=EpisodeConfig(mode=PromptMode(args.mode)),
    )
    client = _make_client(args.client)
    out_dir = Path(args.out) if args.out else None
    table = run_suite(config, client, out_dir=out_dir)
    print(table.to_csv())
    if out_dir is not None:
        (out_dir / "success_table.json").write_text(
            json.dumps(table.to_json(), indent=2, sort_keys=True)
        )
    return 0


def _cmd_score(args) -> int:
    from .scoring import SuccessTable, capability_profile

    text = Path(args.table).read_text()
    if args.table.endswith(".json"):
        table = SuccessTable.from_json(json.loads(text))
    else:
        table = SuccessTable.from_csv(text)
    profile = capability_profile(table)
    payload = json.dumps(profile, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(payload + "\n")
    else:
        print(payload)
    return 0


def _cmd_baseline(args) -> int:
    from .scoring import (
        UnsupportedBaseline,
        analytic_random_baseline,
        estimate_random_baseline,
    )

    est = estimate_random_baseline(
        args.task, args.level, rounds=args.rounds, seed=args.seed
    )
    try:
        analytic = float(analytic_random_baseline(args.task, args.level))
    except UnsupportedBaseline:
        analytic = None
    print(json.dumps({
        "task": args.task,
        "level": args.level,
        "rounds": est.rounds,
        "monte_carlo": est.mean,
        "half_width": est.half_width,
        "analytic": analytic,
    }, indent=2))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        store_path=Path(args.store) if args.store else None,
        cell_px=args.cell_px,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridbench",
        description="Procedural grid benchmark: generate, render, evaluate, score.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a task instance as JSON")
    p.add_argument("--task", required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("render", help="render an instance's first frame to PNG")
    p.add_argument("--task", default="CL")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instance", help="path to an instance JSON file")
    p.add_argument("--cell-px", type=int, default=64, choices=(32, 64, 96))
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("eval", help="run an evaluation suite")
    p.add_argument("--client", required=True,
                   help="oracle | random | api:<model>")
    p.add_argument("--mode", default="zero-shot",
                   choices=("zero-shot", "cot", "icl"))
    p.add_argument("--tasks", help="comma-separated kinds (default: all)")
    p.add_argument("--levels", default="1,2,3")
    p.add_argument("--rounds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for transcripts and tables")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("score", help="capability profile from a success table")
    p.add_argument("--table", required=True, help="CSV or JSON success table")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("baseline", help="random-policy baseline for one cell")
    p.add_argument("--task", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--rounds", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("serve", help="start the human-play HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--store", help="JSONL file for play records")
    p.add_argument("--cell-px", type=int, default=64, choices=(32, 64, 96))
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
