"""
Citation network statistics and their nonparametric comparison.

    citetopo stats <dataset> [--format snap|konect] [--seed S] [--anf-realizations R]
                   [--anf-trials T] [--kmin-policy both|10|25] [--out DIR] [--manifest FILE]
    citetopo compare <profile>... [--preset paper10|validation10|all21] [--stats a,b,...]
                   [--alpha 0.05|0.10] [--svg PATH] [--out DIR]
    citetopo hopplot <dataset> [--directed] [--exact] [--seed S] [--out FILE]
    citetopo fixtures [--out DIR]

Exit codes: 0 success, 1 usage error, 2 data error, 3 resource error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .cddiagram import cd_layout, render_svg
from .clustering import clustering_all, clustering_profile
from .compare import compare
from .degree import MODES, degree_distribution, neighbour_connectivity
from .distance import DEFAULT_EXACT_CAP, anf_hop_plot, exact_hop_plot
from .errors import CitetopoError, ResourceError
from .graph import DatasetManifest, read_manifest
from .profile import (
    PRESETS, StatProfile, compute_profile, matrix_from_profiles, paper_profiles,
    profiles_from_csv, resolve_statistics,
)

log = logging.getLogger("citetopo")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dataset_args(p):
    p.add_argument("dataset", help="edge-list file, or a dataset name from --manifest")
    p.add_argument("--format", choices=["snap", "konect"], default=None,
                   help="edge-list flavour (default: from manifest, else snap)")
    p.add_argument("--manifest", help="INI manifest with path/format/expected_n/expected_m")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--anf-realizations", type=int, default=100)
    p.add_argument("--anf-trials", type=int, default=32)


def build_parser():
    parser = _Parser(prog="citetopo", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"citetopo {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="compute a statistic profile for one network")
    _dataset_args(p)
    p.add_argument("--kmin-policy", choices=["both", "10", "25"], default="both")
    p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("compare", help="compare four or more profiles")
    p.add_argument("profiles", nargs="+", help="profile JSON files or profile CSV tables")
    p.add_argument("--preset", choices=sorted(PRESETS), default="paper10")
    p.add_argument("--stats", help="comma-separated statistic names (overrides --preset)")
    p.add_argument("--alpha", type=float, choices=[0.05, 0.10], default=0.05)
    p.add_argument("--svg", help="write the critical-difference diagram here")
    p.add_argument("--out", help="directory for report.json, residuals.csv and cd.svg")

    p = sub.add_parser("hopplot", help="hop plot of one network as CSV")
    _dataset_args(p)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--exact", action="store_true", help="exact BFS instead of ANF")
    p.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)
    p.add_argument("--out", help="CSV file (default: stdout)")

    p = sub.add_parser("fixtures", help="write the transcribed published profiles as JSON")
    p.add_argument("--out", default=".", help="output directory")
    return parser


def _load_graph(args):
    entry = None
    if args.manifest:
        entries = read_manifest(args.manifest)
        entry = entries.get(args.dataset)
    if entry is None:
        name = os.path.basename(args.dataset)
        for suffix in (".gz", ".txt", ".tsv"):
            name = name.removesuffix(suffix)
        entry = DatasetManifest(name=name, path=args.dataset, format=args.format or "snap")
    elif args.format:
        entry.format = args.format
    if not os.path.exists(entry.path):
        raise CitetopoError(f"dataset file not found: {entry.path}")
    return entry, entry.load()


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _xy_csv(header, xs, ys):
    rows = [",".join(header)]
    rows += [f"{int(x)},{y:.6g}" for x, y in zip(xs, ys)]
    return "\n".join(rows) + "\n"


def cmd_stats(args):
    entry, g = _load_graph(args)
    prof = compute_profile(g, entry.name, seed=args.seed,
                           anf_realizations=args.anf_realizations,
                           anf_trials=args.anf_trials, kmin_policy=args.kmin_policy)
    for s in prof.undefined:
        log.warning("%s: statistic %s is undefined", entry.name, s)
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, entry.name)
    _write(base + ".profile.json", prof.to_json())
    _write(base + ".profile.csv", prof.to_csv())
    for mode in MODES:
        dd = degree_distribution(g, mode)
        _write(f"{base}.degree_{mode}.csv", _xy_csv(("degree", "count"), dd.degree, dd.count))
        d, knn = neighbour_connectivity(g, mode)
        _write(f"{base}.knn_{mode}.csv",
               _xy_csv(("degree", "mean_neighbour_degree"), d, knn))
    cs = clustering_all(g)
    k, c = clustering_profile(cs, "C")
    _, b = clustering_profile(cs, "B")
    _, dd = clustering_profile(cs, "D")
    lines = ["degree,meanC,meanB,meanD"]
    lines += [f"{int(a)},{x:.6g},{y:.6g},{z:.6g}" for a, x, y, z in zip(k, c, b, dd)]
    _write(base + ".clustering_profile.csv", "\n".join(lines) + "\n")
    print(prof.to_json(), end="")
    return EXIT_OK


def _read_profiles(paths):
    profiles = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if path.endswith(".json"):
            profiles.append(StatProfile.from_json(text))
        else:
            profiles.extend(profiles_from_csv(text, source=path))
    return profiles


def cmd_compare(args):
    profiles = _read_profiles(args.profiles)
    if len(profiles) < 4:
        print(f"citetopo compare: need at least 4 profiles, got {len(profiles)}", file=sys.stderr)
        return EXIT_USAGE
    stats = resolve_statistics(args.preset, args.stats.split(",") if args.stats else None)
    names = list(dict.fromkeys(stats))
    matrix = matrix_from_profiles(profiles, names)
    report = compare(matrix, names, args.alpha)
    layout = cd_layout(report.mean_ranks, report.groups, report.cd)
    svg = render_svg(layout, title=f"Nemenyi critical difference, alpha = {args.alpha}")
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write(os.path.join(args.out, "report.json"), text)
        _write(os.path.join(args.out, "residuals.csv"), report.residual_csv())
        _write(os.path.join(args.out, "statistics.csv"), matrix.to_csv())
        _write(os.path.join(args.out, "cd.svg"), svg)
    if args.svg:
        _write(args.svg, svg)
    print(text, end="")
    return EXIT_OK


def cmd_hopplot(args):
    entry, g = _load_graph(args)
    if args.exact:
        hp = exact_hop_plot(g, args.directed, cap=args.exact_cap)
    else:
        hp = anf_hop_plot(g, args.directed, args.anf_realizations, args.anf_trials, args.seed)
    text = hp.to_csv()
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_fixtures(args):
    os.makedirs(args.out, exist_ok=True)
    for name, prof in paper_profiles().items():
        _write(os.path.join(args.out, f"{name}.profile.json"), prof.to_json())
    return EXIT_OK


COMMANDS = {"stats": cmd_stats, "compare": cmd_compare, "hopplot": cmd_hopplot,
            "fixtures": cmd_fixtures}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    np.seterr(all="ignore")
    try:
        return COMMANDS[args.command](args)
    except ResourceError as exc:
        print(f"citetopo: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CitetopoError as exc:
        print(f"citetopo: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"citetopo: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
