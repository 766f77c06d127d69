"""Command-line interface.

Exit codes: 0 for a definite verdict or a successful build, 2 when a
certification came back inconclusive, 1 on any error.  Reports embed the
exact tolerances and seeds used; files are written atomically.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .certify import INCONCLUSIVE, certify
from .constructions import (
    conjecture_harness,
    harness_family,
    rank2_kc_pipeline,
    werner,
    werner_params,
)
from .pure import complete_partition, factorizing_cuts
from .sdp import SDP_MAX_ITER, SDP_TOL
from .states import (
    DensityOperator,
    PartyStructure,
    PureState,
    StateFormatError,
    _atomic_write,
    load_state,
    save_state,
)

OUT_DIR_ENV = "GMEKRON_OUT_DIR"


def _out_path(args, default_name: str) -> str:
    if getattr(args, "out", None):
        return args.out
    return os.path.join(os.environ.get(OUT_DIR_ENV, "."), default_name)


def _parse_terms(parties: str, terms: str) -> PureState:
    """Build a ket from 'd1,d2,...' dims and 'i1,i2,...:coeff;...' terms."""
    dims = [int(d) for d in parties.split(",")]
    structure = PartyStructure.of_dims(dims)
    entries: dict[tuple[int, ...], complex] = {}
    for term in terms.split(";"):
        term = term.strip()
        if not term:
            continue
        if ":" in term:
            idx_part, coeff_part = term.rsplit(":", 1)
            coeff = complex(coeff_part.strip())
        else:
            idx_part, coeff = term, 1.0 + 0j
        idx = tuple(int(i) for i in idx_part.split(","))
        entries[idx] = entries.get(idx, 0j) + coeff
    return PureState.from_terms(structure, entries)


def _build_named(args) -> PureState | DensityOperator:
    name = args.name
    if name == "ghz":
        st = PartyStructure.of_dims([args.d] * args.n)
        return PureState.from_terms(
            st, {tuple([k] * args.n): 1.0 for k in range(args.d)})
    if name == "w":
        st = PartyStructure.qubits(args.n)
        terms = {}
        for i in range(args.n):
            idx = [0] * args.n
            idx[i] = 1
            terms[tuple(idx)] = 1.0
        return PureState.from_terms(st, terms)
    if name == "bell":
        return PureState.from_terms(PartyStructure.qubits(2),
                                    {(0, 0): 1, (1, 1): 1})
    if name == "singlet":
        return PureState.from_terms(PartyStructure.qubits(2),
                                    {(0, 1): 1, (1, 0): -1})
    if name == "maxmixed":
        dims = [int(d) for d in args.parties.split(",")]
        st = PartyStructure.of_dims(dims)
        return DensityOperator(np.eye(st.total_dim, dtype=complex), st,
                               validate=False)
    if name == "ket":
        return _parse_terms(args.parties, args.terms)
    raise ValueError(f"unknown build target {name!r}")


def _cmd_build(args) -> int:
    state = _build_named(args)
    path = _out_path(args, f"{args.name}.json")
    save_state(path, state)
    print(f"wrote {path} ({state.structure.n} parties, "
          f"dims {state.structure.dims})")
    return 0


def _cmd_partition(args) -> int:
    state = load_state(args.statefile)
    if isinstance(state, DensityOperator):
        state = state.as_pure(args.rank_tol)
    part = complete_partition(state, args.rank_tol)
    print(f"complete partition: {part}")
    cuts = factorizing_cuts(state, args.rank_tol) if state.n >= 2 else []
    if cuts:
        print("factorizing cuts:")
        for cut in cuts:
            print(f"  {cut}")
    else:
        print("factorizing cuts: none")
    return 0


def _cmd_certify(args) -> int:
    state = load_state(args.statefile)
    report = certify(state, sdp_tol=args.sdp_tol, rank_tol=args.rank_tol,
                     max_iter=args.max_iter)
    text = report.to_text()
    print(text)
    if args.out:
        _atomic_write(args.out, text + "\n")
        print(f"wrote {args.out}")
    return 0 if report.definite else 2


def _cmd_werner(args) -> int:
    params = werner_params(args.d, args.p)
    state = werner(args.d, args.p)
    path = _out_path(args, f"werner_d{args.d}_p{args.p:g}.json")
    save_state(path, state)
    print(f"wrote {path}")
    print(f"d = {params.d}, p = {params.p:g}, band = {params.band}")
    return 0


def _cmd_demo_theorem5(args) -> int:
    rep = rank2_kc_pipeline(args.x1, args.x2, sdp_tol=args.sdp_tol,
                            max_iter=args.max_iter)
    out_dir = args.out or os.environ.get(OUT_DIR_ENV, ".")
    os.makedirs(out_dir, exist_ok=True)
    rho_path = os.path.join(out_dir, "rank2_pair_rho.json")
    sigma_path = os.path.join(out_dir, "rank2_pair_sigma.json")
    save_state(rho_path, rep.rho)
    save_state(sigma_path, rep.sigma)
    lines = [
        f"x1 = {rep.x1:g}, x2 = {rep.x2:g}",
        f"rho: 2x2x4 state, trace {rep.rho.trace():g} -> {rho_path}",
        f"sigma: compressed state, trace {rep.sigma.trace():g} -> {sigma_path}",
        f"sigma witness objective: {rep.sigma_solution.objective:+.6e} "
        f"({rep.sigma_solution.status})",
        f"rho witness objective:   {rep.rho_solution.objective:+.6e} "
        f"({rep.rho_solution.status})",
        "",
        rep.sigma_report.to_text(),
    ]
    text = "\n".join(lines)
    print(text)
    report_path = os.path.join(out_dir, "rank2_pair_report.txt")
    _atomic_write(report_path, text + "\n")
    print(f"wrote {report_path}")
    return 0 if rep.certified else 2


def _cmd_harness(args) -> int:
    instances = harness_family(args.family, args.trials, args.eps, args.seed)
    results = conjecture_harness(instances, sdp_tol=args.sdp_tol,
                                 max_iter=args.max_iter)
    lines = [f"family = {args.family}, trials = {args.trials}, "
             f"eps = {args.eps:g}, seed = {args.seed}, "
             f"sdp_tol = {args.sdp_tol:g}"]
    lines += [r.row() for r in results]
    text = "\n".join(lines)
    print(text)
    if args.out:
        _atomic_write(args.out, text + "\n")
        print(f"wrote {args.out}")
    return 0 if all(r.verdict != INCONCLUSIVE for r in results) else 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sdp-tol", type=float, default=SDP_TOL,
                        dest="sdp_tol", help="witness certification tolerance")
    parser.add_argument("--rank-tol", type=float, default=1e-8,
                        dest="rank_tol", help="relative numerical-rank cutoff")
    parser.add_argument("--max-iter", type=int, default=SDP_MAX_ITER,
                        dest="max_iter", help="solver iteration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmekron",
        description="construct multiparty states with Kronecker-type "
                    "products and certify their entanglement class")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a named state to a file")
    p.add_argument("name",
                   choices=["ghz", "w", "bell", "singlet", "maxmixed", "ket"])
    p.add_argument("--n", type=int, default=3, help="number of parties")
    p.add_argument("--d", type=int, default=2, help="local dimension")
    p.add_argument("--parties", default="2,2",
                   help="comma-separated dims (maxmixed, ket)")
    p.add_argument("--terms", default="",
                   help="ket terms, e.g. '0,0,0:1;1,1,1:-1'")
    p.add_argument("--out", help="output path")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("partition",
                       help="complete partition and factorizing cuts of a "
                            "pure state file")
    p.add_argument("statefile")
    p.add_argument("--rank-tol", type=float, default=1e-8, dest="rank_tol")
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("certify", help="entanglement class of a state file")
    p.add_argument("statefile")
    _add_common(p)
    p.add_argument("--out", help="also write the report here")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("werner", help="write a Werner state file")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--out", help="output path")
    p.set_defaults(func=_cmd_werner)

    p = sub.add_parser("demo-theorem5",
                       help="tripartite GME state from two rank-2 two-qubit "
                            "states, with certified report")
    p.add_argument("--x1", type=float, default=1.0)
    p.add_argument("--x2", type=float, default=1.0)
    _add_common(p)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=_cmd_demo_theorem5)

    p = sub.add_parser("harness",
                       help="per-instance evidence table for merged products")
    p.add_argument("--family", default="werner2",
                   choices=["werner2", "rank2", "pure"])
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--eps", type=float, default=1e-3,
                   help="magnitude of the negative offset from the "
                        "distillability edge (werner2)")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.add_argument("--out", help="also write the table here")
    p.set_defaults(func=_cmd_harness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StateFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
