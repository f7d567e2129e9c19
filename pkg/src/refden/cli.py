"""Command-line front end.

Subcommands: ``simulate`` (parameter-scan experiment grids), ``denoise``
(single matrix file), ``verify`` (Monte Carlo claim verification), ``assoc``
(synthetic confounder/association pipeline).  Options may also come from a
``key=value`` config file via --config; explicit flags win on conflict.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 assertion
failure in verify.
"""

from __future__ import annotations

import argparse
import sys

from .assoc import ScenarioSpec, inflation_factor, make_scenario, run_pipeline
from .errors import InvalidArgumentError, InvalidInputError, NumericalError
from .estimators import VARIANTS, EstimatorConfig, denoise
from .experiment import SCAN_VARIABLES, ExperimentSpec, run_experiment, write_table
from .matio import read_matrix, write_matrix
from .synth import SUPPORT_STYLES, NoiseSpec
from .theory import THEOREM_IDS, VerifyParams, verify_theorem


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _to_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise InvalidArgumentError(f"not a boolean: {text!r}")


def _to_list(text: str) -> tuple:
    return tuple(float(tok) for tok in text.replace(",", " ").split())


def _to_names(text: str) -> tuple:
    return tuple(tok for tok in text.replace(",", " ").split())


def _load_config(path) -> dict:
    cfg = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise InvalidInputError(f"{path}:{lineno}: expected key=value")
            key, value = stripped.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


class _Options:
    """Merged view over CLI flags (sentinel None), config file, defaults."""

    def __init__(self, args, cfg):
        self.args = args
        self.cfg = cfg

    def get(self, key, convert, default):
        value = getattr(self.args, key, None)
        if value is not None:
            return convert(value) if isinstance(value, str) else value
        if key in self.cfg:
            return convert(self.cfg[key])
        return default


def _add_common(parser):
    parser.add_argument("--config", help="key=value config file; flags win on conflict")
    parser.add_argument("--seed", type=int, help="master seed (default 0)")
    parser.add_argument("--threads", type=int, help="worker threads (default 1)")


def _add_noise(parser):
    parser.add_argument("--sigma", type=float, help="noise level (default 1)")
    parser.add_argument("--noise", choices=("gaussian", "student_t"),
                        help="noise distribution (default gaussian)")
    parser.add_argument("--df", type=float, help="student_t degrees of freedom (default 6)")
    parser.add_argument("--standardize", help="unit-variance student_t draws (default true)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="refden",
                     description="Column-sparse low-rank matrix denoising toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a parameter-scan experiment grid")
    sim.add_argument("--scan", choices=SCAN_VARIABLES, help="scanned variable")
    sim.add_argument("--values", help="comma-separated scan values")
    sim.add_argument("--m", type=int, help="rows (default 200)")
    sim.add_argument("--n", type=int, help="columns (default 200)")
    sim.add_argument("--r", type=int, help="rank (default 5)")
    sim.add_argument("--t", type=int, help="active columns (default 100)")
    sim.add_argument("--x", type=float, help="signal singular value (default 4)")
    sim.add_argument("--support", choices=SUPPORT_STYLES, help="right-vector style")
    sim.add_argument("--replicates", type=int, help="replicates per cell (default 50)")
    sim.add_argument("--estimators", help="comma-separated estimator names")
    sim.add_argument("--out", required=True, help="output table path")
    _add_noise(sim)
    _add_common(sim)

    den = sub.add_parser("denoise", help="denoise a matrix file")
    den.add_argument("--input", required=True, help="input matrix path")
    den.add_argument("--variant", choices=VARIANTS, help="estimator (default tsvd)")
    den.add_argument("--r", type=int, required=True, help="rank")
    den.add_argument("--t", type=int, help="retained columns (selecting variants)")
    den.add_argument("--out", required=True, help="output matrix path")
    _add_common(den)

    ver = sub.add_parser("verify", help="Monte Carlo verification of one claim")
    ver.add_argument("--theorem", choices=THEOREM_IDS, required=True)
    ver.add_argument("--m", type=int, help="rows (default 200)")
    ver.add_argument("--n", type=int, help="columns (default 200)")
    ver.add_argument("--x", type=float, help="signal singular value (default 4)")
    ver.add_argument("--t", type=int, help="active columns (default 50)")
    ver.add_argument("--support", choices=SUPPORT_STYLES, help="style (default flat)")
    ver.add_argument("--variant", choices=("refactor", "refactor_plus"),
                     help="estimator under test (default refactor)")
    ver.add_argument("--C", type=float, help="entry-mass constant (default 64)")
    ver.add_argument("--C0", type=float, help="sparsity constant (default 0.05)")
    ver.add_argument("--alpha", type=float, help="tail constant (default 4)")
    ver.add_argument("--epsilon", type=float, help="slack in the reported bound (default 0.1)")
    ver.add_argument("--seeds", type=int, help="number of replicates (default 100)")
    ver.add_argument("--threshold", type=float,
                     help="required empirical frequency (default 0.95)")
    ver.add_argument("--out", help="per-seed table path (optional)")
    _add_noise(ver)
    _add_common(ver)

    aso = sub.add_parser("assoc", help="synthetic association pipeline with QQ output")
    aso.add_argument("--scenario", choices=("null", "confounded"),
                     help="scenario kind (default confounded)")
    aso.add_argument("--m", type=int, help="subjects/rows (default 400)")
    aso.add_argument("--sites", type=int, help="columns tested (default 2000)")
    aso.add_argument("--t", type=int, help="active columns (default 600)")
    aso.add_argument("--x", type=float, help="confounder singular value (default 2)")
    aso.add_argument("--confounding", type=float,
                     help="phenotype-confounder logit slope (default 2)")
    aso.add_argument("--select-t", type=int, dest="select_t",
                     help="columns retained by the estimators (default: t)")
    aso.add_argument("--out", required=True, help="QQ table path")
    _add_noise(aso)
    _add_common(aso)

    return parser


def _noise_spec(opt: _Options) -> NoiseSpec:
    return NoiseSpec(
        distribution=opt.get("noise", str, "gaussian"),
        sigma=opt.get("sigma", float, 1.0),
        df=opt.get("df", float, 6.0),
        standardize=opt.get("standardize", _to_bool, True),
    )


def _cmd_simulate(opt: _Options) -> int:
    scan = opt.get("scan", str, None)
    values = opt.get("values", _to_list, None)
    if scan is None or values is None:
        raise InvalidArgumentError("simulate requires --scan and --values")
    spec = ExperimentSpec(
        scan=scan,
        values=values,
        m=opt.get("m", int, 200),
        n=opt.get("n", int, 200),
        r=opt.get("r", int, 5),
        t=opt.get("t", int, 100),
        x=opt.get("x", float, 4.0),
        noise=_noise_spec(opt),
        support_style=opt.get("support", str, "gaussian_orthonormalized"),
        replicates=opt.get("replicates", int, 50),
        estimators=opt.get("estimators", _to_names, ("refactor", "tsvd", "jl")),
        master_seed=opt.get("seed", int, 0),
    )
    result = run_experiment(spec, threads=opt.get("threads", int, 1))
    out = opt.get("out", str, None)
    write_table(result, out)
    print(f"wrote {len(spec.values)} scan rows to {out}")
    return 0


def _cmd_denoise(opt: _Options) -> int:
    variant = opt.get("variant", str, "tsvd")
    matrix = read_matrix(opt.get("input", str, None))
    config = EstimatorConfig(variant=variant, r=opt.get("r", int, None),
                             t=opt.get("t", int, None))
    result = denoise(matrix, config)
    out = opt.get("out", str, None)
    write_matrix(out, result.estimate)
    if result.selection is not None:
        kept = " ".join(str(j + 1) for j in result.selection.retained)
        print(f"retained columns (1-based): {kept}")
    print(f"wrote estimate to {out}")
    return 0


def _cmd_verify(opt: _Options) -> int:
    params = VerifyParams(
        m=opt.get("m", int, 200),
        n=opt.get("n", int, 200),
        x=opt.get("x", float, 4.0),
        t=opt.get("t", int, 50),
        support_style=opt.get("support", str, "flat"),
        variant=opt.get("variant", str, "refactor"),
        noise=_noise_spec(opt),
        C=opt.get("C", float, 64.0),
        C0=opt.get("C0", float, 0.05),
        alpha=opt.get("alpha", float, 4.0),
        epsilon=opt.get("epsilon", float, 0.1),
        master_seed=opt.get("seed", int, 0),
    )
    theorem = opt.get("theorem", str, None)
    threshold = opt.get("threshold", float, 0.95)
    report = verify_theorem(theorem, params, opt.get("seeds", int, 100),
                            threads=opt.get("threads", int, 1))
    out = opt.get("out", str, None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(report.to_table())
    conds = report.conditions
    print(f"theorem {report.theorem_id}: frequency {report.frequency:.4f} "
          f"({report.passes}/{report.n_seeds} seeds)")
    print(f"conditions: beta={conds.beta:.6g} "
          f"weak_signal_threshold={conds.weak_signal_threshold:.6g} "
          f"bbp_threshold={conds.bbp_threshold:.6g} signal_ok={conds.signal_ok} "
          f"entry_ok={conds.entry_ok} sparsity_ok={conds.sparsity_ok}")
    if not report.asserted:
        print("reported only (no assertion)")
        return 0
    if report.frequency < threshold:
        print(f"FAIL: frequency below threshold {threshold}")
        return 3
    print(f"PASS: frequency >= threshold {threshold}")
    return 0


def _cmd_assoc(opt: _Options) -> int:
    scenario = opt.get("scenario", str, "confounded")
    confounding = opt.get("confounding", float, 2.0)
    if scenario == "null":
        confounding = 0.0
    spec = ScenarioSpec(
        m=opt.get("m", int, 400),
        n=opt.get("sites", int, 2000),
        t=opt.get("t", int, 600),
        x=opt.get("x", float, 2.0),
        confounding=confounding,
        noise=_noise_spec(opt),
    )
    seed = opt.get("seed", int, 0)
    y, phenotype, _model = make_scenario(spec, seed)
    select_t = opt.get("select_t", int, spec.t)

    methods = (("refactor", "refactor_star"), ("tsvd", "tsvd"), ("jl", "jl_star"))
    observed = {}
    for label, variant in methods:
        config = EstimatorConfig(variant=variant, r=1, t=select_t)
        result = run_pipeline(y, phenotype, config)
        observed[label] = result
        print(f"{label}: inflation {inflation_factor(result.p_values):.4f}")
    undeflated = run_pipeline(y, phenotype, None)
    print(f"none: inflation {inflation_factor(undeflated.p_values):.4f}")

    out = opt.get("out", str, None)
    expected = observed["refactor"].qq_expected
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("exp refactor tsvd jl\n")
        for i in range(expected.size):
            fh.write(f"{expected[i]:.10g} "
                     f"{observed['refactor'].qq_observed[i]:.10g} "
                     f"{observed['tsvd'].qq_observed[i]:.10g} "
                     f"{observed['jl'].qq_observed[i]:.10g}\n")
    print(f"wrote QQ table to {out}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "denoise": _cmd_denoise,
    "verify": _cmd_verify,
    "assoc": _cmd_assoc,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _load_config(args.config) if getattr(args, "config", None) else {}
        return _COMMANDS[args.command](_Options(args, cfg))
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (InvalidArgumentError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
