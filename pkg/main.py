#!/usr/bin/env python3
"""
vacmod - Vacuum Module Verification - Main Script
"""
import argparse
import logging
import os
import random
import sys

import numpy as np

from src.algebra.bigcell import compute_realization, extract_PQ, pq_to_json
from src.algebra.liealg import build_lie_algebra
from src.connection.casimir import FORM_KINDS, connection_matrix
from src.connection.monodromy import default_loop, eigenvalue_sweep, homotopy_check, monodromy, Loop
from src.connection.normal_form import normal_form, random_connection
from src.modules.coeffs import coeff_ring
from src.realization.endo_ring import identify_diffop, lambda_table
from src.realization.wakimoto import build_realization
from src.utils.config import RunConfig
from src.utils.errors import ConfigError, VacmodError
from src.utils.helpers import Timer, create_directories, print_report_summary
from src.utils.serialization import dump_json, vector_to_json, write_csv
from src.verification.suite import report_to_json, verify_all
from src.visualization.plots import plot_eigenvalue_sweep, plot_eigenvalues, plot_loops

# Supported algebras with their classical names
CARTAN_TYPES = {
    "A1": "sl(2)",
    "A2": "sl(3)",
    "B2": "so(5)",
}

# Casimir variants: the truncated sl2 Casimir or the full one including h^2/2
CASIMIR_VARIANTS = {
    "truncated": "e f + f e",
    "full": "e f + f e + h^2 / 2",
}

# Truncation D used when --D is omitted, per type and N
DEFAULT_CUTOFFS = {
    "A1": {1: 3, 2: 2},
    "A2": {1: 2},
    "B2": {1: 1},
}

MODULES = ("adjoint", "defining")
NORMAL_FORM_TRUNCATION = 4


def add_common_arguments(parser):
    """Flags shared by every subcommand"""
    parser.add_argument('--type', type=str, choices=list(CARTAN_TYPES.keys()), default='A1',
                        help=f'Cartan type: {", ".join(CARTAN_TYPES.keys())} (default: A1)')
    parser.add_argument('--N', type=int, default=1,
                        help='Level-subalgebra parameter N >= 1 (default: 1)')
    parser.add_argument('--D', type=int, default=None,
                        help='Truncation of modes and states (default: per type and N)')
    parser.add_argument('--k', type=str, default='symbolic',
                        help='Level: "symbolic" or a rational p/q (default: symbolic)')
    parser.add_argument('--hbar', type=str, default='1/8',
                        help='Rational hbar for monodromy (default: 1/8)')
    parser.add_argument('--casimir-variant', type=str, choices=list(CASIMIR_VARIANTS.keys()), default='truncated',
                        help='Casimir residue variant (default: truncated)')
    parser.add_argument('--out', type=str, default='output',
                        help='Directory to save output (default: output)')
    parser.add_argument('--seed', type=int, default=0,
                        help='Seed of the randomized checks (default: 0)')
    parser.add_argument('--verbose', action='store_true',
                        help='Log every computation step')


def parse_args(argv=None):
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(description='Vacuum modules, free field realizations and Casimir connections')
    commands = parser.add_subparsers(dest='command', required=True)

    verify = commands.add_parser('verify-all', help='Run the full verification suite')
    add_common_arguments(verify)

    mono = commands.add_parser('monodromy', help='Numerical monodromy of the connections')
    add_common_arguments(mono)
    mono.add_argument('--vmod', type=str, choices=list(MODULES), default='adjoint',
                      help='Finite-dimensional module V (default: adjoint)')
    mono.add_argument('--connection', type=str, choices=list(FORM_KINDS), default='nabla',
                      help='Connection to transport (default: nabla)')
    mono.add_argument('--homotopy', action='store_true',
                      help='Also compare a circle with a homotopic ellipse')
    mono.add_argument('--plot', action='store_true',
                      help='Save eigenvalue plots and the hbar sweep as CSV')

    export = commands.add_parser('export', help='Export tables to JSON')
    add_common_arguments(export)

    args = parser.parse_args(argv)
    if args.D is None:
        args.D = DEFAULT_CUTOFFS.get(args.type, {}).get(args.N, 1)
    return args


def setup_logging(verbose):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def cmd_verify_all(config):
    """Run every check and write report.json"""
    print(f"Verifying {config.cartan_type} = {CARTAN_TYPES[config.cartan_type]}, N={config.N}, D={config.D}, "
          f"k={'symbolic' if config.level is None else config.level}")
    with Timer("Verification suite"):
        reports = verify_all(config)
    print_report_summary(reports)
    dump_json("report", report_to_json(config, reports), os.path.join(config.output_dir, "report.json"))
    return 0 if reports and all(r.passed for r in reports) else 1


def cmd_monodromy(config, connection="nabla"):
    """Transport around every root hyperplane and write monodromy.json"""
    alg = build_lie_algebra(config.cartan_type)
    form = connection_matrix(alg, alg.representation(config.vmod), connection, config.casimir_variant)
    hbar = float(config.hbar)
    results = []
    status = 0
    with Timer(f"Monodromy of {connection} on the {config.vmod} module"):
        for root in range(alg.n_roots):
            loop = default_loop(alg, root)
            result = monodromy(form, loop, hbar)
            results.append(result)
            args = np.round(np.angle(result.eigenvalues) / np.pi, 8)
            print(f"Root {alg.positive_roots[root].label}: eigenvalue arguments / pi = {sorted(args)}, "
                  f"error {result.error:.1e}")
            if config.homotopy:
                failures = homotopy_check(form, hbar, root)
                print(f"  homotopic ellipse: {'agrees' if not failures else failures[0]}")
                status = status or int(bool(failures))
    dump_json("monodromy", {"connection": connection, "module": config.vmod, "hbar": str(config.hbar),
                            "results": [r.to_json() for r in results]},
              os.path.join(config.output_dir, "monodromy.json"))
    if config.plot:
        hbars = np.linspace(0.0, 2 * hbar if hbar else 0.5, 17)
        with Timer("hbar sweep"):
            frame = eigenvalue_sweep(form, hbars)
        write_csv(frame, os.path.join(config.output_dir, "eigenvalue_sweep.csv"))
        plot_eigenvalue_sweep(frame, os.path.join(config.output_dir, "eigenvalue_sweep.png"))
        plot_eigenvalues(results, os.path.join(config.output_dir, "eigenvalues.png"))
        circle = results[0].loop
        plot_loops([circle, Loop(circle.root, circle.base, circle.direction, circle.radius, 0.5)],
                   os.path.join(config.output_dir, "loops.png"))
        print(f"Plots saved to {config.output_dir}")
    return status


def cmd_export(config):
    """Write the algebra data, P/Q tables, constants, ring table and a normal form"""
    out = config.output_dir
    alg = build_lie_algebra(config.cartan_type)
    ring = coeff_ring(alg, config.level)
    dump_json("lie_algebra", alg.to_json(), os.path.join(out, "lie_algebra.json"))
    with Timer("Big cell realization"):
        cell = compute_realization(alg)
        tables = extract_PQ(cell)
    dump_json("pq_tables", pq_to_json(cell, tables), os.path.join(out, "pq_tables.json"))
    with Timer("Wakimoto realization"):
        real = build_realization(alg, ring, tables, cell.variables, config.N)
    level = "symbolic" if config.level is None else str(config.level)
    dump_json("constants", {"cartan_type": alg.cartan_type, "N": config.N, "level": level,
                            "constants": {str(i + 1): ring.to_string(c) for i, c in real.constants.items()}},
              os.path.join(out, "constants.json"))
    with Timer("Endomorphism table"):
        generators = [{"label": label, "vacuum_image": vector_to_json(real.module, x.state),
                       "diffop": repr(identify_diffop(x))} for label, x in lambda_table(real.module)]
    dump_json("lambda_table", {"cartan_type": alg.cartan_type, "N": config.N, "generators": generators},
              os.path.join(out, "lambda_table.json"))
    for kind in FORM_KINDS:
        form = connection_matrix(alg, alg.representation("adjoint"), kind, config.casimir_variant)
        dump_json("connection", form.to_json(), os.path.join(out, f"connection_{kind}.json"))
    conn = random_connection(alg, config.N, NORMAL_FORM_TRUNCATION, random.Random(config.seed))
    gauge, nf = normal_form(conn)
    dump_json("normal_form", {"input": conn.to_json(), "gauge": gauge.to_json(), "normal_form": nf.to_json()},
              os.path.join(out, "normal_form.json"))
    print(f"Exports saved to {out}")
    return 0


def main(argv=None):
    """Main execution function"""
    args = parse_args(argv)
    setup_logging(args.verbose)

    try:
        config = RunConfig.from_args(args)
    except ConfigError as e:
        print(f"Error in configuration: {e}")
        return 2

    create_directories([config.output_dir])

    try:
        if config.command == 'verify-all':
            return cmd_verify_all(config)
        if config.command == 'monodromy':
            return cmd_monodromy(config, args.connection)
        return cmd_export(config)
    except ConfigError as e:
        print(f"Error in configuration: {e}")
        return 2
    except VacmodError as e:
        print(f"Error during {config.command}: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
