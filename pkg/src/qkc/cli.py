"""``qkc`` command line: compile, inspect, run and tfd-sweep."""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .codegen.asm import emit_module_asm
from .codegen.elfq import inspect_dict, inspect_elfq, read_elfq, write_elfq
from .driver import compile_source
from .errors import QkcError, SourceError
from .optim import OptimConfig
from .passes.target import TargetConfig
from .runtime import DeviceConfig, open_session

_PARAM_RE = re.compile(r"^([A-Za-z_]\w*)\[(\d+)\]=(.+)$")


def _err(msg: str):
    print(msg, file=sys.stderr)


def _g(v: float) -> str:
    return "%.12g" % v


def cmd_compile(args) -> int:
    src = Path(args.source)
    try:
        text = src.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        _err(f"{src}: error: cannot read source: {exc}")
        return 1
    try:
        target = TargetConfig.load(args.target) if args.target else None
        res = compile_source(text, target, args.opt_level)
        out = Path(args.output) if args.output else src.with_suffix(".elfq")
        write_elfq(res.image, out)
        if args.emit_asm:
            Path(args.emit_asm).write_text(emit_module_asm(res.module))
    except SourceError as exc:
        pos = f"{exc.line}:{exc.column}:" if exc.line is not None else ""
        _err(f"{src}:{pos} error[{exc.code}]: {exc.message}")
        return 1
    except (QkcError, OSError) as exc:
        _err(f"{src}: error[{getattr(exc, 'code', 'E_IO')}]: {exc}")
        return 1
    if args.report:
        print(res.report.to_json())
    return 0


def cmd_inspect(args) -> int:
    try:
        img = read_elfq(args.elfq)
    except QkcError as exc:
        _err(f"{args.elfq}: error[{exc.code}]: {exc}")
        return 1
    if args.json:
        print(json.dumps(inspect_dict(img), indent=2))
    else:
        sys.stdout.write(inspect_elfq(img))
    return 0


def _parse_param(text: str) -> tuple[str, int, float]:
    m = _PARAM_RE.match(text)
    if m is None:
        raise ValueError(f"bad --param {text!r}, expected NAME[i]=value")
    return m.group(1), int(m.group(2)), float(m.group(3))


def cmd_run(args) -> int:
    try:
        params = [_parse_param(p) for p in args.param]
    except ValueError as exc:
        _err(f"error: {exc}")
        return 1
    try:
        img = read_elfq(args.elfq)
        s = open_session(img, DeviceConfig(qubits=args.qubits, seed=args.seed))
        for name, idx, val in params:
            s.set_param(name, idx, val)
        s.call_kernel(args.kernel)
    except QkcError as exc:
        _err(f"error[{exc.code}]: {exc}")
        return 1
    for name, n in img.decls_of("cbit").items():
        bits = " ".join(str(s.get_cbit(name, i)) for i in range(n))
        print(f"{name}: {bits}")
    reg = s.get_probability_register()
    width = s.num_qubits
    print("index ket probability")
    for i, p in enumerate(reg):
        if p > 1e-12:
            print(f"{i} |{i:0{width}b}> {_g(p)}")
    return 0


def cmd_tfd_sweep(args) -> int:
    from .tfd import TfdConfig, ToolchainBackend, run_sweep, write_csv

    try:
        cfg = TfdConfig(L=args.l, beta_from=args.beta_from, beta_to=args.beta_to,
                        optim=OptimConfig(), seed=args.seed, with_oracle=args.with_oracle)
        backend = ToolchainBackend(cfg.L, cfg.seed)
        result = run_sweep(cfg, backend)
        if args.out == "-":
            write_csv(result.rows, sys.stdout, cfg.with_oracle)
        else:
            with open(args.out, "w", newline="") as fh:
                write_csv(result.rows, fh, cfg.with_oracle)
    except (QkcError, OSError) as exc:
        _err(f"error[{getattr(exc, 'code', 'E_IO')}]: {exc}")
        return 1
    summary = (f"rows: {len(result.rows)}\n"
               f"compile_count: {backend.compile_count}\n"
               f"evaluations: {result.evals}\n"
               f"dispatches: {backend.dispatches}\n"
               f"compile_seconds: {_g(backend.compile_seconds)}\n"
               f"dispatch_seconds: {_g(backend.dispatch_seconds)}\n"
               f"wall_seconds: {_g(result.wall_seconds)}\n")
    (sys.stderr if args.out == "-" else sys.stdout).write(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qkc", description="Quantum kernel compiler, runtime and TFD workload.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a .qk source to an ELFQ image")
    c.add_argument("source")
    c.add_argument("-o", "--output", help="output path (default: source with .elfq suffix)")
    c.add_argument("--target", help="target description (TOML)")
    c.add_argument("-O", "--opt-level", type=int, choices=(0, 1), default=1)
    c.add_argument("--emit-asm", metavar="PATH", help="also write assembly text")
    c.add_argument("--report", action="store_true", help="print the pass report as JSON")
    c.set_defaults(func=cmd_compile)

    i = sub.add_parser("inspect", help="dump an ELFQ image")
    i.add_argument("elfq")
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_inspect)

    r = sub.add_parser("run", help="dispatch one kernel and print results")
    r.add_argument("elfq")
    r.add_argument("kernel")
    r.add_argument("--param", action="append", default=[], metavar="NAME[i]=v")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--qubits", type=int)
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("tfd-sweep", help="run the warm-started TFD temperature sweep")
    t.add_argument("--l", type=int, default=2, help="qubits per subsystem")
    t.add_argument("--beta-from", type=int, default=-30)
    t.add_argument("--beta-to", type=int, default=30)
    t.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--with-oracle", action="store_true", help="add the fidelity column (L <= 8)")
    t.set_defaults(func=cmd_tfd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
