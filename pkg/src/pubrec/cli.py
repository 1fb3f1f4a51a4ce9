"""Operator command line: seed populations, run diffusion experiments,
validate stores, move seed files, and boot the HTTP service.

All output is machine-parseable (CSV or canonical JSON lines). Exit codes:
0 ok, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .diffusion import nominate_service_to_user
from .graph import GraphError
from .rules import default_rules, load_rules
from .seeding import (
    PopulationSpecError,
    parse_population_spec,
    seed_population,
)
from .service import load_config, serve
from .store import IntegrityError, Store, StoreError

USAGE_ERROR = 2
VALIDATION_ERROR = 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pubrec")
    sub = parser.add_subparsers(dest="command", required=True)

    p_seed = sub.add_parser("seed", help="generate a synthetic population")
    p_seed.add_argument("--size", type=int, required=True)
    p_seed.add_argument("--density", type=float, required=True)
    p_seed.add_argument("--spec", help="population distribution spec file")
    p_seed.add_argument("--random-seed", type=int, default=0)
    p_seed.add_argument("--out", help="seed file to write")
    p_seed.add_argument("--store", help="store file to create")

    p_sim = sub.add_parser("simulate", help="run a snowball nomination")
    p_sim.add_argument("--store", required=True)
    p_sim.add_argument("--seed-user", required=True)
    p_sim.add_argument("--type", type=int, required=True, dest="type_code")
    p_sim.add_argument("--max-hops", type=int, required=True)
    p_sim.add_argument("--rules", help="rule file replacing the built-in set")
    p_sim.add_argument("--out", help="per-user report CSV to write")

    p_val = sub.add_parser("validate", help="check referential integrity")
    p_val.add_argument("--store", required=True)

    p_serve = sub.add_parser("serve", help="boot the HTTP service")
    p_serve.add_argument("--config", help="key = value config file")

    p_imp = sub.add_parser("import", help="load a seed file into a store")
    p_imp.add_argument("--store", required=True)
    p_imp.add_argument("--seed", required=True, dest="seed_file")

    p_exp = sub.add_parser("export", help="write a store out as a seed file")
    p_exp.add_argument("--store", required=True)
    p_exp.add_argument("--out", required=True)
    return parser


def _cmd_seed(args) -> int:
    spec = None
    if args.spec:
        with open(args.spec, encoding="utf-8") as f:
            spec = parse_population_spec(f.read())
    if args.store and os.path.exists(args.store):
        raise StoreError(f"store file already exists: {args.store}")
    store = Store.open(args.store)
    try:
        seed_population(store, args.size, args.density, spec, args.random_seed)
        if args.out:
            store.export_seed(args.out)
    finally:
        store.close()
    print(f"users,{args.size}")
    return 0


def _cmd_simulate(args) -> int:
    ruleset = load_rules(args.rules) if args.rules else default_rules()
    with Store.open(args.store) as store:
        report = nominate_service_to_user(
            store.graph, args.type_code, args.seed_user,
            args.max_hops, ruleset, store.users)
    print("hop,count")
    for hop, count in report.per_hop_counts().items():
        print(f"{hop},{count}")
    print(f"eligible_filtered,{report.eligible_filtered}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(report.to_csv())
    return 0


def _cmd_validate(args) -> int:
    try:
        with Store.open(args.store) as store:
            violations = store.validate()
    except IntegrityError as e:
        violations = e.violations
    if violations:
        for v in violations:
            print(f"violation,{v}")
        return VALIDATION_ERROR
    print("violations,0")
    return 0


def _cmd_serve(args) -> int:
    serve(load_config(args.config))
    return 0


def _cmd_import(args) -> int:
    with Store.open(args.store) as store:
        count = store.import_seed(args.seed_file)
    print(f"records,{count}")
    return 0


def _cmd_export(args) -> int:
    with Store.open(args.store) as store:
        store.export_seed(args.out)
    print(f"exported,{args.out}")
    return 0


_COMMANDS = {
    "seed": _cmd_seed,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
    "serve": _cmd_serve,
    "import": _cmd_import,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except IntegrityError as e:
        for v in e.violations:
            print(f"violation,{v}", file=sys.stderr)
        return VALIDATION_ERROR
    except (StoreError, GraphError, PopulationSpecError, ValueError, OSError) as e:
        print(f"error,{e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
