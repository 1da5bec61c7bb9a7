"""Command-line harness: single episodes, training runs, benchmarks, and a
line-delimited JSON protocol for driving the simulator from another process.

Sub-commands:
    run    one episode with a named agent; writes the episode log CSV
    train  DDPG/TD3 over several seeds; writes learning-curve CSVs and nets
    bench  evaluate agents under the multi-season protocol; writes a summary
    serve  speak the stdio JSON protocol (one request object per line)
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from .agents import RandomAgent, ReactiveAgent, StandardAgent
from .config import (
    build_episode_config,
    build_reactive_params,
    build_schedule_params,
    build_train_config,
    load_kv_file,
)
from .environment import OBSERVATION_SIZE, CropEnv, EpisodeConfig, run_episode
from .rl.agents import make_agent
from .rl.training import AgentPolicy, TrainConfig, derive_seed, evaluate, train

BASELINE_AGENTS = ("random", "standard", "reactive")
RL_AGENTS = ("ddpg", "td3")
ALL_AGENTS = BASELINE_AGENTS + RL_AGENTS

_TAG_BASELINE_EVAL = 23


def _collect_overrides(args) -> dict[str, str]:
    overrides: dict[str, str] = {}
    if getattr(args, "config", None):
        overrides.update(load_kv_file(args.config))
    for flag, key in (("seed", "seed"), ("mode", "mode"), ("days", "duration"),
                      ("weather_file", "weather_file")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = str(value)
    return overrides


def _env_factory(base: EpisodeConfig):
    def factory(seed: int, deterministic: bool) -> CropEnv:
        mode = "deterministic" if deterministic else base.mode
        return CropEnv(dataclasses.replace(base, seed=seed, mode=mode, log_path=None))
    return factory


def _baseline_policy_factory(name: str, base: EpisodeConfig, overrides: dict):
    if name == "random":
        return lambda run_seed: RandomAgent(base.f_max, base.i_max, seed=run_seed)
    if name == "standard":
        params = build_schedule_params(overrides)
        return lambda run_seed: StandardAgent(params)
    if name == "reactive":
        params = build_reactive_params(overrides)
        return lambda run_seed: ReactiveAgent(params)
    raise ValueError(f"unknown baseline {name!r}")


def _load_rl_policy(algo: str, params_path: str, base: EpisodeConfig) -> AgentPolicy:
    agent = make_agent(algo, OBSERVATION_SIZE, 2)
    agent.load(params_path)
    return AgentPolicy(agent, base.f_max, base.i_max)


def cmd_run(args) -> int:
    overrides = _collect_overrides(args)
    cfg = build_episode_config(overrides)
    env = CropEnv(cfg)
    if args.agent in RL_AGENTS:
        if not args.params:
            print(f"error: agent {args.agent!r} needs --params <trained .npz file>", file=sys.stderr)
            return 2
        policy = _load_rl_policy(args.agent, args.params, cfg)
    else:
        factory = _baseline_policy_factory(args.agent, cfg, overrides)
        policy = factory(derive_seed(cfg.seed, _TAG_BASELINE_EVAL, 0))
    total = run_episode(env, policy)
    out = args.out or f"episode_{args.agent}_seed{cfg.seed}.csv"
    env.save_log(out)
    print(f"agent = {args.agent}")
    print(f"episode log = {out}")
    print(f"return = {total!r}")
    return 0


def _write_curve(path: str, rows: list[tuple[int, float, float]]) -> None:
    with open(path, "w") as fh:
        fh.write("step,mean_return,std_return\n")
        for step, mean, std in rows:
            fh.write(f"{step},{mean!r},{std!r}\n")


def _aggregate_curves(curves: list[list[tuple[int, float, float]]]):
    """Mean and cross-seed std of per-seed mean returns at each eval step."""
    rows = []
    for points in zip(*curves):
        step = points[0][0]
        means = np.array([p[1] for p in points])
        rows.append((step, float(means.mean()), float(means.std())))
    return rows


def _train_one_algo(algo: str, base: EpisodeConfig, tcfg: TrainConfig, out_dir: str,
                    base_seed: int, quiet: bool = False):
    """Train all seeds for one algorithm; returns per-seed curves and maxes."""
    factory = _env_factory(base)
    curves = []
    maxes = []
    for k in range(tcfg.seeds):
        seed = base_seed + k
        curve, agent = train(factory, algo, tcfg, seed)
        curves.append(curve)
        best = max(point[1] for point in curve)
        maxes.append(best)
        _write_curve(os.path.join(out_dir, f"{algo}_seed{seed}_curve.csv"), curve)
        agent.save(os.path.join(out_dir, f"{algo}_seed{seed}_params.npz"))
        if not quiet:
            print(f"{algo} seed {seed}: max average return = {best:.3f}")
    _write_curve(os.path.join(out_dir, f"{algo}_curve_aggregate.csv"), _aggregate_curves(curves))
    return curves, maxes


def cmd_train(args) -> int:
    overrides = _collect_overrides(args)
    cfg = build_episode_config(overrides)
    if args.episodes is not None:
        overrides["train.episodes"] = str(args.episodes)
    if args.seeds is not None:
        overrides["train.seeds"] = str(args.seeds)
    tcfg = build_train_config(overrides)
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    _, maxes = _train_one_algo(args.algo, cfg, tcfg, out_dir, cfg.seed)
    arr = np.array(maxes)
    print(f"{args.algo}: max average return = {arr.mean():.3f} +/- {arr.std():.3f} over {tcfg.seeds} seeds")
    return 0


def _bench_baseline(name: str, base: EpisodeConfig, tcfg: TrainConfig,
                    overrides: dict, out_dir: str, base_seed: int):
    """Multi-season evaluation of a non-learning agent.

    The evaluation seeds are fixed functions of the run seed, so every
    evaluation point of a stationary policy is identical; one evaluation per
    seed therefore reproduces the whole curve exactly.
    """
    factory = _env_factory(base)
    policy_factory = _baseline_policy_factory(name, base, overrides)
    maxes = []
    for k in range(tcfg.seeds):
        seed = base_seed + k
        mean, std = evaluate(factory, policy_factory, tcfg.eval_runs, seed)
        maxes.append(mean)
        _write_curve(os.path.join(out_dir, f"{name}_seed{seed}_curve.csv"), [(0, mean, std)])
    return maxes


def cmd_bench(args) -> int:
    overrides = _collect_overrides(args)
    cfg = build_episode_config(overrides)
    if args.episodes is not None:
        overrides["train.episodes"] = str(args.episodes)
    if args.seeds is not None:
        overrides["train.seeds"] = str(args.seeds)
    tcfg = build_train_config(overrides)
    agents = [a.strip() for a in args.agents.split(",")] if args.agents else list(ALL_AGENTS)
    for a in agents:
        if a not in ALL_AGENTS:
            print(f"error: unknown agent {a!r}; valid agents: {', '.join(ALL_AGENTS)}", file=sys.stderr)
            return 2
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)

    summary = []
    for name in agents:
        if name in BASELINE_AGENTS:
            maxes = _bench_baseline(name, cfg, tcfg, overrides, out_dir, cfg.seed)
        else:
            _, maxes = _train_one_algo(name, cfg, tcfg, out_dir, cfg.seed, quiet=True)
        arr = np.array(maxes)
        summary.append((name, float(arr.mean()), float(arr.std())))
        print(f"{name}: max average return = {arr.mean():.3f} +/- {arr.std():.3f}")

    summary.sort(key=lambda row: row[1], reverse=True)
    path = os.path.join(out_dir, "bench_summary.csv")
    with open(path, "w") as fh:
        fh.write("agent,max_avg_return,std\n")
        for name, mean, std in summary:
            fh.write(f"{name},{mean!r},{std!r}\n")
    print(f"summary = {path}")
    return 0


def _json_info(info: dict) -> dict:
    out = {}
    for k, v in info.items():
        if isinstance(v, (bool, int, str)):
            out[k] = v
        else:
            out[k] = float(v)
    return out


def serve_stdio(stdin=None, stdout=None) -> int:
    """Serve the environment over line-delimited JSON until close/EOF.

    Requests:  {"cmd": "reset", "config": {...flat keys...}}
               {"cmd": "step", "action": [fert, irrig]}
               {"cmd": "close"}
    Responses: {"obs": [...]} | {"obs": ..., "reward": ..., "done": ...,
               "info": {...}} | {"ok": true} | {"error": "..."}
    """
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    env: CropEnv | None = None
    last_config: dict | None = None

    def reply(obj) -> None:
        stdout.write(json.dumps(obj) + "\n")
        stdout.flush()

    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            reply({"error": f"malformed JSON: {exc}"})
            continue
        try:
            cmd = request.get("cmd") if isinstance(request, dict) else None
            if cmd == "reset":
                config = request.get("config") or {}
                # Same config keeps the env instance, so stochastic-mode
                # resets advance through seasons exactly as in-process use.
                if env is None or config != last_config:
                    env = CropEnv(build_episode_config(config))
                    last_config = config
                obs = env.reset()
                reply({"obs": [float(v) for v in obs]})
            elif cmd == "step":
                if env is None:
                    reply({"error": "step before reset"})
                    continue
                action = request.get("action")
                if (not isinstance(action, (list, tuple)) or len(action) != 2
                        or not all(isinstance(v, (int, float)) for v in action)):
                    reply({"error": "action must be a [fertilizer, irrigation] pair"})
                    continue
                obs, r, done, info = env.step((float(action[0]), float(action[1])))
                reply({
                    "obs": [float(v) for v in obs],
                    "reward": float(r),
                    "done": bool(done),
                    "info": _json_info(info),
                })
            elif cmd == "close":
                reply({"ok": True})
                return 0
            else:
                reply({"error": f"unknown command {cmd!r}; expected reset, step, or close"})
        except Exception as exc:  # protocol errors must not kill the loop
            reply({"error": f"{type(exc).__name__}: {exc}"})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cropsim",
        description="Daily crop-growth simulator: run, train, benchmark, or serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=None, help="base random seed")
        p.add_argument("--mode", choices=["stochastic", "deterministic"], default=None)
        p.add_argument("--days", type=int, default=None, help="season length in days")
        p.add_argument("--config", default=None, help="flat key = value config file")
        p.add_argument("--out", default=None, help="output file or directory")
        p.add_argument("--weather-file", dest="weather_file", default=None,
                       help="CSV weather file instead of synthetic weather")

    p_run = sub.add_parser("run", help="run one episode with a named agent")
    p_run.add_argument("--agent", required=True, choices=ALL_AGENTS)
    p_run.add_argument("--params", default=None, help="trained network .npz (ddpg/td3)")
    add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_train = sub.add_parser("train", help="train an RL agent over several seeds")
    p_train.add_argument("--algo", required=True, choices=RL_AGENTS)
    p_train.add_argument("--seeds", type=int, default=None, help="number of seeds (default 5)")
    p_train.add_argument("--episodes", type=int, default=None, help="episodes per seed (default 200)")
    add_common(p_train)
    p_train.set_defaults(func=cmd_train)

    p_bench = sub.add_parser("bench", help="benchmark agents under the multi-season protocol")
    p_bench.add_argument("--agents", default=None,
                         help=f"comma-separated subset of: {', '.join(ALL_AGENTS)}")
    p_bench.add_argument("--seeds", type=int, default=None)
    p_bench.add_argument("--episodes", type=int, default=None)
    add_common(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_serve = sub.add_parser("serve", help="serve the stdio JSON protocol")
    p_serve.set_defaults(func=lambda args: serve_stdio())

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
