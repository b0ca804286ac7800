"""Command-line front end.

Four subcommands: `bound` evaluates the closed-form bounds and floors,
`chain` runs the exact finite-chain operations on builtin or loaded chains,
`gaussian` drives the autoregressive case study, `mala` the Langevin one.
Exit codes: 0 success, 1 parse or format error, 2 violated mathematical
precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import dm_bounds, finite_chain, gaussian_ar, mala
from .errors import ChainFormatError, PreconditionError
from .report import (
    Report,
    render_curve_figure,
    render_table_figure,
    rows_to_csv,
    write_table,
)

CURVE_COLUMNS = ["n", "rho_n_star", "rosenthal_side_lower", "baxendale_optimum"]
TABLE_COLUMNS = ["n", "floor_a", "floor_b", "scaled_gap_a", "scaled_gap_b"]


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {e}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dm-limits", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", parents=[], help="closed-form bounds and floors")
    b.add_argument(
        "kind",
        choices=["baxendale", "rosenthal", "paraoptima", "pic1", "chain-lower-a", "chain-lower-b"],
    )
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--K", type=float)
    b.add_argument("--eps", type=float)
    b.add_argument("--beta", type=float, default=1.0)
    b.add_argument("--eta", type=float)
    b.add_argument("--L", type=float)
    b.add_argument("--d", type=float)
    b.add_argument("--eps-c", dest="eps_c", type=float)
    b.add_argument("--pi-c", dest="pi_c", type=float)

    c = sub.add_parser("chain", help="exact finite-chain operations")
    c.add_argument(
        "action",
        choices=[
            "load",
            "stationary",
            "rate",
            "epsc",
            "verify-a",
            "verify-b",
            "verify-bivariate",
            "m0",
            "m1",
        ],
    )
    c.add_argument("--file", help="JSON or CSV transition matrix")
    c.add_argument("--builtin", choices=["figure1", "two-state", "rosenthal-2", "cycle", "star"])
    c.add_argument("--lambda", dest="lam", type=float)
    c.add_argument("--K", type=float)
    c.add_argument("--eps", type=float)
    c.add_argument("--beta", type=float, default=1.0)
    c.add_argument("--delta", type=float)
    c.add_argument("--eta", type=float)
    c.add_argument("--L", type=float)
    c.add_argument("--d", type=float)
    c.add_argument("--n", type=int)
    c.add_argument("--theta", type=float)
    c.add_argument("--set", dest="state_set", type=_int_list, help="comma-separated state indices")
    c.add_argument("--spec-file", help="JSON drift spec for verify actions on loaded chains")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--out", help="write the (normalized) chain as JSON here")

    g = sub.add_parser("gaussian", help="Gaussian autoregressive case study")
    g.add_argument("action", choices=["optimize", "floor", "rosenthal-floor", "curve"])
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=float, default=100.0)
    g.add_argument("--n-list", dest="n_list", type=_int_list)
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("--out", help="CSV output path for curve")
    g.add_argument("--no-plot", action="store_true", help="skip the figure next to the CSV")

    m = sub.add_parser("mala", help="Langevin algorithm floors and sampler")
    m.add_argument("action", choices=["floor-a", "floor-b", "table", "simulate"])
    m.add_argument("--n", type=int)
    m.add_argument("--gamma", type=float)
    m.add_argument("--gamma-prime", dest="gamma_prime", type=float)
    m.add_argument("--G", type=float)
    m.add_argument("--M", type=float, default=1.0)
    m.add_argument("--n-list", dest="n_list", type=_int_list)
    m.add_argument("--dim", type=int, default=1)
    m.add_argument("--h", type=float)
    m.add_argument("--steps", type=int)
    m.add_argument("--seed", type=int)
    m.add_argument("--thin", type=int, default=10)
    m.add_argument("--format", choices=["json", "csv"], default="json")
    m.add_argument("--out", help="CSV output path for table")
    m.add_argument("--no-plot", action="store_true")
    return p


_FLAG_NAMES = {"lam": "--lambda", "state_set": "--set"}


def _require(args, names: list[str]) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join(_FLAG_NAMES.get(n, "--" + n.replace("_", "-")) for n in missing)
        raise SystemExit(f"error: missing required flags: {flags}")


# ---------------------------------------------------------------------------
# bound


def _intermediates(report) -> dict:
    return {k: v for k, v in report.as_dict().items() if k != "value"}


def _cmd_bound(args) -> Report:
    rep = Report(command=f"bound {args.kind}")
    if args.kind in ("baxendale", "paraoptima"):
        _require(args, ["lam", "K", "eps"])
        p = dm_bounds.DmParamsA(lam=args.lam, K=args.K, eps=args.eps, beta=args.beta)
        rep.inputs = {"lambda": p.lam, "K": p.K, "eps": p.eps, "beta": p.beta}
        if args.kind == "baxendale":
            out = dm_bounds.baxendale_bound(p)
            rep.add("bound", "baxendale_bound", out.value, **_intermediates(out))
        else:
            out = dm_bounds.paraoptima_lower(p)
            rep.add("floor", "paraoptima_lower", out.value, **_intermediates(out))
    elif args.kind == "rosenthal":
        _require(args, ["eta", "L", "eps", "d"])
        p = dm_bounds.DmParamsB(eta=args.eta, L=args.L, eps=args.eps, d=args.d)
        rep.inputs = {"eta": p.eta, "L": p.L, "eps": p.eps, "d": p.d}
        out = dm_bounds.rosenthal_bound(p)
        rep.add("bound", "rosenthal_bound", out.value, **_intermediates(out))
        rep.add("floor", "rosenthal_paraoptima_lower", dm_bounds.rosenthal_paraoptima_lower(p))
    elif args.kind == "pic1":
        _require(args, ["lam", "K"])
        rep.inputs = {"lambda": args.lam, "K": args.K}
        rep.add(
            "stationary_mass_lower",
            "pic1_stationary_mass_lower",
            dm_bounds.pic1_stationary_mass_lower(args.lam, args.K),
        )
    elif args.kind == "chain-lower-a":
        _require(args, ["eps_c", "pi_c"])
        rep.inputs = {"eps_c": args.eps_c, "pi_c": args.pi_c}
        rep.add(
            "floor", "chain_specific_lower_a",
            dm_bounds.chain_specific_lower_a(args.eps_c, args.pi_c),
        )
    else:
        _require(args, ["eps_c"])
        rep.inputs = {"eps_c": args.eps_c}
        rep.add("floor", "chain_specific_lower_b", dm_bounds.chain_specific_lower_b(args.eps_c))
    return rep


# ---------------------------------------------------------------------------
# chain


def _build_chain(args):
    """Returns (chain, spec) where spec is the canonical drift spec if the builtin has one."""
    if args.file and args.builtin:
        raise SystemExit("error: give either --file or --builtin, not both")
    if args.file:
        path = Path(args.file)
        chain = (
            finite_chain.load_chain_csv(path)
            if path.suffix.lower() == ".csv"
            else finite_chain.load_chain_json(path)
        )
        return chain, None
    if not args.builtin:
        raise SystemExit("error: need --file or --builtin")
    if args.builtin == "figure1":
        _require(args, ["lam", "K", "eps"])
        p = dm_bounds.DmParamsA(lam=args.lam, K=args.K, eps=args.eps, beta=args.beta)
        return finite_chain.witness_figure1(p)
    if args.builtin == "two-state":
        _require(args, ["lam", "delta"])
        return finite_chain.witness_two_state(args.lam, args.delta), None
    if args.builtin == "rosenthal-2":
        _require(args, ["eps"])
        return finite_chain.witness_rosenthal(args.eps), None
    if args.builtin == "cycle":
        _require(args, ["n"])
        return finite_chain.cycle_walk(args.n), None
    _require(args, ["n", "theta"])
    return finite_chain.star_walk(args.n, args.theta), None


def _load_spec_a(path: str) -> finite_chain.DriftSpecA:
    obj = json.loads(Path(path).read_text())
    return finite_chain.DriftSpecA(
        V=np.asarray(obj["V"], dtype=float),
        C=tuple(obj["C"]),
        nu=np.asarray(obj["nu"], dtype=float) if obj.get("nu") is not None else None,
    )


def _cmd_chain(args) -> Report:
    rep = Report(command=f"chain {args.action}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        chain, canonical_spec = _build_chain(args)
        rep.inputs = {
            "source": args.file or args.builtin,
            "n_states": chain.n_states,
        }

        if args.action == "load":
            rep.add("chain", "load", json.loads(finite_chain.chain_to_json(chain)))
            if args.out:
                Path(args.out).write_text(finite_chain.chain_to_json(chain))
                rep.add("written", "load", args.out)
        elif args.action == "stationary":
            pi = finite_chain.stationary_distribution(chain)
            rep.add("stationary", "stationary_distribution", pi.tolist())
        elif args.action == "rate":
            rep.add("rate", "true_rate", finite_chain.true_rate(chain))
        elif args.action == "epsc":
            _require(args, ["state_set"])
            eps, nu = finite_chain.epsilon_c(chain, args.state_set)
            rep.inputs["set"] = list(args.state_set)
            rep.add("eps_c", "epsilon_c", eps, nu=None if nu is None else nu.tolist())
        elif args.action == "verify-a":
            if canonical_spec is not None:
                spec = canonical_spec
                p = dm_bounds.DmParamsA(lam=args.lam, K=args.K, eps=args.eps, beta=args.beta)
            else:
                _require(args, ["spec_file", "lam", "K", "eps"])
                spec = _load_spec_a(args.spec_file)
                p = dm_bounds.DmParamsA(lam=args.lam, K=args.K, eps=args.eps, beta=args.beta)
            res = finite_chain.verify_a(chain, spec, p, tol=args.tol)
            rep.add("holds", "verify_a", res.ok, reason=res.reason)
        elif args.action == "verify-b":
            _require(args, ["eta", "L", "eps", "d"])
            if args.spec_file:
                obj = json.loads(Path(args.spec_file).read_text())
                V = np.asarray(obj["V"], dtype=float)
            else:
                V = np.zeros(chain.n_states)  # the flat drift used by the graph examples
            spec = finite_chain.DriftSpecB(V=V, d=args.d)
            p = dm_bounds.DmParamsB(eta=args.eta, L=args.L, eps=args.eps, d=args.d)
            res = finite_chain.verify_b(chain, spec, p, tol=args.tol)
            rep.add("holds", "verify_b", res.ok, reason=res.reason)
        elif args.action == "verify-bivariate":
            if args.spec_file:
                obj = json.loads(Path(args.spec_file).read_text())
                spec = finite_chain.BivariateDriftSpec(
                    V1=np.asarray(obj["V1"], dtype=float),
                    V2=np.asarray(obj["V2"], dtype=float),
                    C_tilde=np.asarray(obj["C_tilde"], dtype=bool),
                    lambda_prime=float(obj["lambda_prime"]),
                    K_prime=float(obj["K_prime"]),
                )
            else:
                # default: V1 = V2 = 1/2 with the product pair set over --set
                _require(args, ["state_set"])
                n = chain.n_states
                half = np.full(n, 0.5)
                mask = np.zeros((n, n), dtype=bool)
                idx = np.asarray(args.state_set, dtype=int)
                mask[np.ix_(idx, idx)] = True
                spec = finite_chain.BivariateDriftSpec(
                    V1=half, V2=half, C_tilde=mask, lambda_prime=0.5, K_prime=2.0
                )
            res, mass = finite_chain.verify_bivariate(chain, spec, tol=args.tol)
            rep.add("holds", "verify_bivariate", res.ok, reason=res.reason, mass_sum=mass)
        elif args.action == "m0":
            pi = finite_chain.stationary_distribution(chain)
            rep.add("m0", "min_majority_cardinality", finite_chain.min_majority_cardinality(pi))
        else:  # m1
            adj = finite_chain.adjacency_from_chain(chain)
            rep.add("m1", "max_degree", finite_chain.max_degree(adj))

        pi_note = None
        if args.action in ("rate", "stationary"):
            pi = finite_chain.stationary_distribution(chain)
            if (pi > 1e-14).sum() == 1:
                pi_note = "stationary law is a point mass; reversibility checks are trivial on its support"
        for w in caught:
            rep.warnings.append(str(w.message))
        if pi_note:
            rep.warnings.append(pi_note)
    return rep


# ---------------------------------------------------------------------------
# gaussian / mala


def _emit_table(rep, rows, columns, args, renderer) -> str | None:
    """CSV/figure side channel for table commands; returns CSV text when asked for."""
    if args.out:
        write_table(rows, columns, args.out)
        rep.add("written", "write_table", str(args.out))
        if not args.no_plot:
            fig = renderer(rows, args.out)
            rep.add("figure", "render_figure", str(fig))
    if args.format == "csv":
        return rows_to_csv(rows, columns)
    return None


def _cmd_gaussian(args) -> tuple[Report, str | None]:
    rep = Report(command=f"gaussian {args.action}")
    csv_text = None
    if args.action == "optimize":
        _require(args, ["n"])
        cfg = gaussian_ar.GaussianArConfig(n=args.n, k=args.k)
        rep.inputs = {"n": cfg.n, "k": cfg.k}
        report, a, d = gaussian_ar.optimize_baxendale(cfg)
        rep.add("bound", "optimize_baxendale", report.value, a=a, d=d, **_intermediates(report))
        rep.add("true_rate", "true_rate_reference", gaussian_ar.true_rate_reference())
    elif args.action == "floor":
        _require(args, ["n"])
        rep.inputs = {"n": args.n}
        value, argmin_d = gaussian_ar.rho_star_lower(args.n)
        rep.add("floor", "rho_star_lower", value, argmin_d=argmin_d)
        rep.add("true_rate", "true_rate_reference", gaussian_ar.true_rate_reference())
    elif args.action == "rosenthal-floor":
        _require(args, ["n"])
        rep.inputs = {"n": args.n}
        rep.add("floor", "rosenthal_side_lower", gaussian_ar.rosenthal_side_lower(args.n))
    else:  # curve
        _require(args, ["n_list"])
        rep.inputs = {"n_list": args.n_list, "k": args.k}
        rows = gaussian_ar.divergence_curve(args.n_list, k=args.k)
        rep.add("curve", "divergence_curve", rows)
        csv_text = _emit_table(rep, rows, CURVE_COLUMNS, args, render_curve_figure)
    return rep, csv_text


def _cmd_mala(args) -> tuple[Report, str | None]:
    rep = Report(command=f"mala {args.action}")
    csv_text = None
    if args.action == "floor-a":
        _require(args, ["n", "gamma", "G"])
        rep.inputs = {"n": args.n, "gamma": args.gamma, "G": args.G, "M": args.M}
        out = mala.rho_opt_lower_a(args.n, args.gamma, args.G, args.M)
        rep.add("floor", "rho_opt_lower_a", out.value, gap=out.gap, argmin_d=out.argmin_d)
    elif args.action == "floor-b":
        _require(args, ["n", "gamma", "G"])
        rep.inputs = {"n": args.n, "gamma": args.gamma, "G": args.G, "M": args.M}
        out = mala.rho_opt_lower_b(args.n, args.gamma, args.G, args.M)
        rep.add(
            "floor", "rho_opt_lower_b", out.value,
            simplified=out.simplified, gap=out.gap, gap_simplified=out.gap_simplified,
        )
    elif args.action == "table":
        _require(args, ["gamma", "gamma_prime", "G", "n_list"])
        rep.inputs = {
            "gamma": args.gamma, "gamma_prime": args.gamma_prime,
            "G": args.G, "M": args.M, "n_list": args.n_list,
        }
        rows = [r.as_dict() for r in mala.asymptotic_table(
            args.gamma, args.gamma_prime, args.G, args.M, args.n_list
        )]
        rep.add("table", "asymptotic_table", rows)
        csv_text = _emit_table(rep, rows, TABLE_COLUMNS, args, render_table_figure)
    else:  # simulate
        _require(args, ["h", "steps", "seed"])
        rep.inputs = {
            "dim": args.dim, "h": args.h, "steps": args.steps,
            "seed": args.seed, "thin": args.thin,
        }
        target = mala.standard_normal_target(args.dim, args.h)
        summary = mala.simulate(target, args.steps, seed=args.seed, thin=args.thin)
        rep.add("summary", "simulate", summary.as_dict())
    return rep, csv_text


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        if isinstance(e.code, str):
            print(e.code, file=sys.stderr)
            return 1
        return 0 if e.code in (0, None) else 1
    try:
        csv_text = None
        if args.command == "bound":
            rep = _cmd_bound(args)
        elif args.command == "chain":
            rep = _cmd_chain(args)
        elif args.command == "gaussian":
            rep, csv_text = _cmd_gaussian(args)
        else:
            rep, csv_text = _cmd_mala(args)
    except SystemExit as e:  # missing-flag errors raised by _require
        print(e.code, file=sys.stderr)
        return 1
    except ChainFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except PreconditionError as e:
        print(f"precondition violated: {e}", file=sys.stderr)
        return 2
    print(csv_text if csv_text is not None else rep.to_json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
