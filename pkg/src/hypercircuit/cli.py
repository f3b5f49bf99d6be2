"""Command-line front end.

Machine-readable JSON goes to stdout (or ``--out``); log lines go to stderr.

Exit codes: 0 ok, 1 verification failure, 2 parse failure, 3 invalid sigma,
4 non-unitary gate, 5 incompatible embedding, 6 unknown demo.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import demos, verify
from .circuit import (DEFAULT_SORT_CAP, CircuitError, InvalidSigmaError, NonUnitaryGateError,
                      OrderedCircuit, SortCapExceeded, circuit_from_json, topological_sorts)
from .embeddings import (TOP_INIT, compile_circuit, default_tensor, embed_vector, tensor_by_name,
                         top_columns)
from .linalg import basis_state
from .simulator import marginal, measure_all, mix, run

log = logging.getLogger("hypercircuit")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SIGMA, EXIT_UNITARY, EXIT_EMBEDDING, EXIT_DEMO = range(7)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_circuit(path: str | None):
    if not path:
        raise CliError("--input is required", EXIT_PARSE)
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc}", EXIT_PARSE) from None
    try:
        return circuit_from_json(doc)
    except NonUnitaryGateError as exc:
        raise CliError(str(exc), EXIT_UNITARY) from None
    except CircuitError as exc:
        raise CliError(f"invalid circuit: {exc}", EXIT_PARSE) from None


def _sigmas(circuit, file_sigma, flag: str | None, cap: int) -> list[tuple[int, ...]]:
    if flag is None:
        mode = file_sigma if file_sigma is not None else "default"
    elif flag in ("default", "all"):
        mode = flag
    else:
        try:
            mode = [int(x) for x in flag.replace(" ", "").split(",") if x]
        except ValueError:
            raise CliError(f"--sigma must be default, all, or comma-separated ids: {flag!r}", EXIT_PARSE) from None
    try:
        return topological_sorts(circuit, mode, cap)
    except InvalidSigmaError as exc:
        raise CliError(str(exc), EXIT_SIGMA) from None
    except SortCapExceeded as exc:
        raise CliError(str(exc), EXIT_SIGMA) from None


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args) -> int:
    circuit, file_sigma = _load_circuit(args.input)
    index = int(args.basis, 2) if args.basis else 0
    if args.basis and len(args.basis) != circuit.width:
        raise CliError(f"--basis needs {circuit.width} bits", EXIT_PARSE)
    state = basis_state(circuit.domain, circuit.width, index)
    tensor = None
    if args.embedding:
        tensor = _tensor_for(circuit.domain, args.embedding)
    runs = []
    for sigma in _sigmas(circuit, file_sigma, args.sigma, args.cap):
        oc = OrderedCircuit(circuit, sigma)
        if tensor is None:
            dist = measure_all(run(oc, state))
        else:
            cc = compile_circuit(oc, tensor)
            dists = [measure_all(run(cc.target, embed_vector(tensor, col, state)))
                     for col in top_columns(tensor, args.top_init)]
            dist = marginal(mix(dists), [cc.wire_map[w] for w in range(circuit.width)])
        doc = {"sigma": list(sigma), **dist.to_json()}
        if tensor is not None:
            doc.update(embedding=tensor.name, top_init=args.top_init)
        runs.append(doc)
    _emit(runs[0] if len(runs) == 1 else {"runs": runs}, args.out)
    return EXIT_OK


def _tensor_for(domain, name: str | None):
    tensor = default_tensor(domain) if not name else tensor_by_name(name)
    if domain.rank > tensor.source.rank:
        raise CliError(f"embedding {tensor.name} cannot compile a {domain.value} circuit", EXIT_EMBEDDING)
    return tensor


def cmd_compile(args) -> int:
    circuit, file_sigma = _load_circuit(args.input)
    try:
        tensor = _tensor_for(circuit.domain, args.embedding)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_EMBEDDING) from None
    sigmas = _sigmas(circuit, file_sigma, args.sigma, args.cap)
    if len(sigmas) != 1:
        raise CliError("compile needs a single sigma (default or explicit)", EXIT_SIGMA)
    cc = compile_circuit(OrderedCircuit(circuit, sigmas[0]), tensor, optimize=not args.no_optimize)
    _emit(cc.to_json(), args.out)
    log.info("compiled %d gates: width %d -> %d with %s", circuit.size, circuit.width, cc.width, tensor.name)
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    results = verify.run_suite(seed=args.seed, trials=args.trials, corrupt=args.corrupt_embedding,
                               tol=args.tol if args.tol else verify.COMPILED_TOL)
    for r in results:
        print(r.line(), file=sys.stderr)
    doc = verify.suite_to_json(results, args.seed, args.trials)
    _emit(doc, args.out)
    print(f"total {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("FAILED: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_demo(args) -> int:
    if args.name == "ordering":
        if args.input:
            circuit, _ = _load_circuit(args.input)
            try:
                doc = demos.ordering_spread(circuit, cap=args.cap).to_json()
            except SortCapExceeded as exc:
                raise CliError(str(exc), EXIT_SIGMA) from None
        else:
            doc = demos.witness_report()
    elif args.name == "commitment":
        doc = demos.commitment_report().to_json()
    else:
        raise CliError(f"unknown demo {args.name!r}; choose ordering or commitment", EXIT_DEMO)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_sorts(args) -> int:
    circuit, file_sigma = _load_circuit(args.input)
    sigmas = _sigmas(circuit, file_sigma, args.sigma or "all", args.cap)
    _emit({"count": len(sigmas), "sigmas": [list(s) for s in sigmas]}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypercircuit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sigma=True):
        p.add_argument("--input", help="circuit JSON file")
        p.add_argument("--out", help="write JSON here instead of stdout")
        if sigma:
            p.add_argument("--sigma", help='"default", "all", or comma-separated gate ids')
        p.add_argument("--cap", type=int, default=DEFAULT_SORT_CAP, help="max topological sorts to enumerate")

    p = sub.add_parser("simulate", help="simulate a circuit and print outcome probabilities")
    common(p)
    p.add_argument("--basis", help="input basis string, e.g. 010 (default all zeros)")
    p.add_argument("--embedding", choices=["h", "hhat", "shat"],
                   help="simulate through the compiled lower-domain circuit")
    p.add_argument("--top-init", choices=TOP_INIT, default="zero")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compile", help="embed a circuit into a lower scalar domain")
    common(p)
    p.add_argument("--embedding", choices=["h", "hhat", "shat"])
    p.add_argument("--no-optimize", action="store_true", help="always route gates through the top wire")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=verify.DEFAULT_TRIALS)
    p.add_argument("--tol", type=float, help="override the 1e-10 compiled-path tolerance")
    p.add_argument("--corrupt-embedding", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="run a demo: ordering or commitment")
    p.add_argument("name")
    common(p, sigma=False)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("sorts", help="list topological sorts of a circuit")
    common(p)
    p.set_defaults(func=cmd_sorts)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "tol", None) is not None and args.tol <= 0:
        parser.error("--tol must be positive")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
