"""Command-line front end: `nichols-lift <command> CONFIG [options]`.

Exit codes: 0 all requested checks pass, 1 a check failed, 2 a degree or rule
budget ran out, 3 the input is invalid.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import SmashElement, TensorElement, format_element, format_group, format_tensor
from .config import ConfigError, Session, evaluator_for, parse_config, resolve
from .lifting import (
    BasisMismatchError,
    CocycleError,
    DeformationParams,
    InadmissibleError,
    RejectedParameters,
    Section,
    admissibility,
    build_cleft,
    build_lifting,
    check_cocycle,
    good_module_check,
    lift_relation,
    qls_certifies_nonzero,
)
from .nichols import (
    NotHomogeneousError,
    OutOfScopeError,
    Power,
    centrality_check,
    normal_form_of,
    primitive_space,
    relation_weight,
    truncation_order,
    validate_stratification,
)
from .rewrite import DegreeBudgetError, RuleBudgetError, SystemCache, UncertifiedSystemError, UnsupportedLeadError
from .scalars import CycNumber

EXIT_PASS, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class BudgetExhausted(RuntimeError):
    pass


@dataclass
class Report:
    command: str
    input_hash: str
    entries: list[tuple[str, str]] = field(default_factory=list)
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    seconds: float = 0.0

    def add(self, key: str, value) -> None:
        self.entries.append((key, _text(value)))

    def check(self, name: str, ok: bool, witness: str = "") -> None:
        self.checks.append((name, bool(ok), witness))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def render(self, fmt: str) -> str:
        if fmt == "machine":
            lines = [f"command={self.command}", f"input_hash={self.input_hash}"]
            lines += [f"{k}={_one_line(v)}" for k, v in self.entries]
            for name, ok, witness in self.checks:
                lines.append(f"check.{name}={'pass' if ok else 'fail'}")
                if witness:
                    lines.append(f"check.{name}.witness={_one_line(witness)}")
            lines.append(f"verdict={'pass' if self.passed else 'fail'}")
            return "\n".join(lines) + "\n"
        width = max([len(k) for k, _ in self.entries] + [0])
        lines = [f"nichols-lift {self.command}  (input {self.input_hash})", ""]
        lines += [f"  {k.ljust(width)}  {v}" for k, v in self.entries]
        if self.checks:
            lines.append("")
        for name, ok, witness in self.checks:
            lines.append(f"  [{'PASS' if ok else 'FAIL'}] {name}")
            if witness:
                lines.append(f"         witness: {witness}")
        lines.append("")
        lines.append(f"  verdict: {'pass' if self.passed else 'FAIL'}   ({self.seconds:.1f} s)")
        return "\n".join(lines) + "\n"


def _text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple) and v and all(isinstance(x, int) for x in v):
        return format_group(v)
    return str(v)


def _one_line(s: str) -> str:
    return s.replace("\n", "; ")


# helpers -----------------------------------------------------------------------------

def _parse_lambda(text: Optional[str], session: Session, template: DeformationParams) -> DeformationParams:
    if not text:
        return template.assign([0] * len(template.slots))
    ev = evaluator_for(session)
    values = {}
    for item in text.split(","):
        if "=" not in item:
            raise ConfigError(f"expected name=value, got {item!r}", "--lambda")
        name, val = (p.strip() for p in item.split("=", 1))
        rel = session.parameter_names.get(name, name if name in session.relations else None)
        if rel is None:
            raise ConfigError(f"unknown parameter {name!r}", "--lambda")
        values[rel] = ev.scalar(val, f"--lambda {name}")
    return template.assign(values)


def _param_label(session: Session, rel: str) -> str:
    for p, r in session.parameter_names.items():
        if r == rel and p != rel:
            return p
    return rel


def _need_strat(session: Session):
    if session.stratification is None:
        raise ConfigError("this command needs a stratification", "stratification.strata")
    return session.stratification


def _element(session: Session, text: str, what: str):
    return evaluator_for(session).relation(text, what)


def _certified(R, what: str) -> None:
    dim = R.dimension(smash=True)
    if not dim.exact:
        raise BudgetExhausted(f"{what}: normal forms not certified at degree bound {R.degree_bound}")


def _describe_params(session: Session, params: DeformationParams) -> str:
    return ", ".join(f"{_param_label(session, s.name)}={s.value if s.value is not None else 0}" for s in params.slots)


def _datum_entries(report: Report, session: Session) -> None:
    d = session.datum
    report.add("field", f"Q(zeta_{d.order})")
    report.add("group", "x".join(f"Z{m}" for m in d.group.invariant_factors))
    for i in range(d.theta):
        report.add(f"g{i + 1}", d.g[i])
        report.add(f"chi{i + 1}", "(" + ",".join(map(str, d.chi[i])) + ")")
    report.add("order", ">".join(f"x{c}" for c in session.order.precedence))
    report.add("degree_bound", session.stratification.degree_bound if session.stratification else session.config.degree_bound)


# commands ---------------------------------------------------------------------------------

def cmd_check_stratification(session: Session, args, report: Report) -> None:
    S = _need_strat(session)
    _datum_entries(report, session)
    rep = validate_stratification(S)
    for c in rep.checks:
        report.add(f"stratum[{c.level}].{c.name}", f"degree {c.degree}, g = {format_group(c.g)}, chi = {c.chi}")
        report.check(f"skew_primitive[{c.level}].{c.name}", c.skew_primitive, c.defect)
        report.check(f"nonzero[{c.level}].{c.name}", c.nonzero_at_level, "" if c.nonzero_at_level else "vanishes at its level")
    if not rep.passed:
        return
    H = S.final_system()
    _certified(H, "final level")
    dim = H.dimension(smash=False)
    report.add("dim_B(V)", dim.value)
    report.add("top_degree", H.certificate.top_degree)
    hs = H.hilbert_series(H.certificate.top_degree)
    report.add("hilbert_series", " ".join(map(str, hs)))
    report.check("palindromic_hilbert_series", hs == hs[::-1])


def _lift_checks(session: Session, S, params: DeformationParams, report: Report, prefix: str) -> None:
    for k in range(S.depth):
        A = build_cleft(S, params, k)
        sec = Section(A.system, S.system(k))
        for el in S.strata[k]:
            r = lift_relation(el, sec)
            report.check(f"{prefix}lift[{k}].{el.name}.colinear", r.colinear)
            report.check(f"{prefix}lift[{k}].{el.name}.coaction_identity", r.coaction_identity)
            report.check(f"{prefix}lift[{k}].{el.name}.residual", r.residual == "0", "" if r.residual == "0" else r.residual)


def _verify(session: Session, S, params: DeformationParams, report: Report, prefix: str, lift_checks: bool) -> None:
    report.add(f"{prefix}lambda", _describe_params(session, params))
    try:
        A = build_cleft(S, params)
    except RejectedParameters as err:
        report.check(f"{prefix}cleft_nonzero", False, err.witness)
        return
    report.check(f"{prefix}cleft_nonzero", True)
    report.check(f"{prefix}cleft_cofree", A.checks["leads_preserved"] and A.checks["counts_match"], A.checks["difference"])
    if lift_checks:
        _lift_checks(session, S, params, report, prefix)
    L = build_lifting(params, S)
    if not L.dimension_exact:
        raise BudgetExhausted(f"L({params.describe()}) not certified at degree bound {S.degree_bound}")
    for rel in L.relations:
        report.add(f"{prefix}relation", rel)
    for name, ok in L.hopf_checks.items():
        report.check(f"{prefix}hopf_ideal.{name}", ok)
    report.add(f"{prefix}dimension", L.dimension)
    report.check(f"{prefix}dimension_matches", L.dimension == L.expected_dimension,
                 f"expected {L.expected_dimension}" if L.dimension != L.expected_dimension else "")
    report.check(f"{prefix}graded_counts_match", L.graded_counts_match)


def _admissibility_entries(session: Session, template: DeformationParams, report: Report) -> None:
    for s in template.slots:
        label = _param_label(session, s.name)
        report.add(f"param.{label}", f"level {s.level}, relation {s.name}, "
                   f"{'free' if s.admissible else 'forced 0'} ({s.reason})")


def cmd_liftings(session: Session, args, report: Report) -> None:
    S = _need_strat(session)
    _datum_entries(report, session)
    H = S.final_system()
    _certified(H, "final level")
    report.add("dim_B(V)", H.dimension().value)
    report.add("dim_B(V)#kG", H.dimension(smash=True).value)
    template = admissibility(S)
    _admissibility_entries(session, template, report)
    free = [i for i, s in enumerate(template.slots) if s.admissible]
    report.add("admissible_tuple", "(" + ", ".join(
        _param_label(session, s.name) if s.admissible else "0" for s in template.slots) + ")")
    values = session.config.settings.get("catalog_values", [0, 1])
    lift_checks = bool(session.config.settings.get("lift_checks", True))
    ev = evaluator_for(session)
    vals = [ev.scalar(str(v), "settings.catalog_values") for v in values]
    for n, combo in enumerate(itertools.product(vals, repeat=len(free))):
        seq = [CycNumber.zero(session.datum.order)] * len(template.slots)
        for i, v in zip(free, combo):
            seq[i] = v
        params = template.assign(seq)
        report.add(f"lifting[{n}].qls_precheck",
                   "certified" if qls_certifies_nonzero(S, params) else "undecided")
        _verify(session, S, params, report, f"lifting[{n}].", lift_checks)


def cmd_verify_lifting(session: Session, args, report: Report) -> None:
    S = _need_strat(session)
    template = admissibility(S)
    params = _parse_lambda(args.lambda_, session, template)
    _datum_entries(report, session)
    _verify(session, S, params, report, "", lift_checks=True)


def cmd_coaction(session: Session, args, report: Report) -> None:
    S = _need_strat(session)
    params = _parse_lambda(args.lambda_, session, admissibility(S))
    u = _element(session, args.element, "--element")
    level = S.depth if args.level is None else args.level
    if not 0 <= level <= S.depth:
        raise ConfigError(f"level must lie in 0..{S.depth}", "--level")
    A = build_cleft(S, params, level)
    H = S.system(level)
    sec = Section(A.system, H)
    rho = sec.coaction(u)
    _, g, _ = relation_weight(u)
    one = SmashElement.one(session.datum)
    y = normal_form_of(u, A.system)
    x = normal_form_of(u, H)
    expected = TensorElement.pure(y, one) + TensorElement.pure(SmashElement.group(session.datum, g), x)
    report.add("lambda", _describe_params(session, params))
    report.add("level", level)
    report.add("element", args.element)
    report.add("y_in_A", format_element(y, S.order))
    report.add("rho(y)", format_tensor(rho))
    report.check("rho(y) = y (x) 1 + g (x) x", rho == expected,
                 "" if rho == expected else format_tensor(rho - expected))


def cmd_cocycle(session: Session, args, report: Report) -> None:
    S = _need_strat(session)
    params = _parse_lambda(args.lambda_, session, admissibility(S))
    A = build_cleft(S, params)
    H = S.final_system()
    _certified(H, "final level")
    sec = Section(A.system, H)
    report.add("lambda", _describe_params(session, params))
    if args.h is not None or args.k is not None:
        h = _element(session, args.h or "1", "--h")
        k = _element(session, args.k or "1", "--k")
        h = normal_form_of(h, H)
        k = normal_form_of(k, H)
        report.add("sigma(h,k)", sec.cocycle(h, k).to_literal())
    samples = args.samples
    if samples:
        rng = random.Random(args.seed)
        words = [w for lv in H.normal_words(args.max_degree) for w in lv]
        grp = session.datum.group
        elems = list(grp.elements())

        def pick():
            w = rng.choice(words)
            g = rng.choice(elems) if rng.random() < 0.3 else session.datum.identity
            return SmashElement.monomial(session.datum, w, g)

        triples = [(pick(), pick(), pick()) for _ in range(samples)]
        rep = check_cocycle(sec, triples)
        report.add("samples", rep.samples)
        report.check("sigma_normalized", rep.normalized, "; ".join(rep.failures[:3]))
        report.check("sigma_cocycle_identity", rep.cocycle_identity, "; ".join(rep.failures[:3]))
    ver = sec.verify(args.max_degree)
    report.check("section_colinear", ver["colinear"], "; ".join(ver["failures"][:3]))
    report.check("section_convolution_inverse", ver["convolution_inverse"], "; ".join(ver["failures"][:3]))


def cmd_good_module(session: Session, args, report: Report) -> None:
    S = _need_strat(session)
    params = _parse_lambda(args.lambda_, session, admissibility(S))
    steps = good_module_check(S, params, args.levels)
    report.add("lambda", _describe_params(session, params))
    for st in steps:
        report.check(f"good_module[{st.level}].{st.name}", st.passed, "" if st.passed else st.defect)


def cmd_primitives(session: Session, args, report: Report) -> None:
    level = args.level
    if session.stratification is not None:
        S = session.stratification
        level = S.depth if level is None else level
        R = S.system(level)
    else:
        from .nichols import free_system
        R = free_system(session.datum, session.order, args.degree)
        level = 0
    vecs = primitive_space(R, args.degree)
    report.add("level", level)
    report.add("degree", args.degree)
    report.add("dimension", len(vecs))
    for i, v in enumerate(vecs):
        report.add(f"primitive[{i}]", f"{format_element(v.element, R.order)}   g = {format_group(v.g)}")


def cmd_central(session: Session, args, report: Report) -> None:
    S = _need_strat(session)
    level = S.depth if args.level is None else args.level
    u = _element(session, args.element, "--element")
    rep = centrality_check(u, S.system(level))
    report.add("level", level)
    report.add("element", args.element)
    for x, c in rep.commutators.items():
        report.check(f"commutes_with_{x}", c == "0", "" if c == "0" else c)
    report.check("character_trivial_on_group", rep.character_trivial)


def cmd_truncation(session: Session, args, report: Report) -> None:
    S = _need_strat(session)
    if args.level is None:
        raise ConfigError("truncation needs --level", "--level")
    u = _element(session, args.element, "--element")
    if isinstance(u, Power):
        u = u.base ** u.exponent
    R = S.system(args.level)
    _, g, chi = relation_weight(u)
    gens = [normal_form_of(el.relation, S.system(0)) for k in range(args.level) for el in S.strata[k]]
    rep = truncation_order(u, g, chi, R, generators=gens if not args.direct else None, witness=args.witness)
    report.add("level", args.level)
    report.add("element", args.element)
    report.add("q", rep.q.to_literal())
    report.add("N", rep.N)
    report.add("method", rep.method)
    if rep.witness:
        report.add("witness_word", format_element(SmashElement.monomial(session.datum, rep.witness)))
        report.add("witness_coefficient", rep.witness_coefficient.to_literal())
    report.add("status", rep.status)
    if args.expect:
        report.check("status_as_expected", rep.status.split()[0] == args.expect, rep.status)


def monomial_oracle(words: list[str], letters: str, max_degree: int) -> list[list[str]]:
    """Words avoiding every given subword, by brute force, grouped by degree."""
    out = [[""]]
    for _ in range(max_degree):
        out.append(sorted(w + c for w in out[-1] for c in letters if not any(m in w + c for m in words)))
    return out


def cmd_normal_words(session: Session, args, report: Report) -> None:
    from .nichols import free_system
    from .rewrite import complete

    d = session.datum
    rels = []
    for name, r in session.relations.items():
        rels.append(r.base ** r.exponent if isinstance(r, Power) else r)
    D = args.degree_bound or session.config.degree_bound
    R = complete(rels, session.order, D) if rels else free_system(d, session.order, D)
    m = args.max_degree
    if m is None:
        m = int(session.config.settings.get("oracle_degree", min(D, 8)))
    levels = R.normal_words(m)
    report.add("rules", len(R.rules))
    report.add("hilbert_series", " ".join(str(len(lv)) for lv in levels))
    dim = R.dimension()
    report.add("dimension", dim)
    monomial = all(len(r.terms) == 1 and next(iter(r.terms))[1] == d.identity for r in rels)
    if monomial:
        words = [next(iter(r.terms))[0] for r in rels]
        oracle = monomial_oracle(words, d.letters(), m)
        got = [sorted(lv) for lv in levels]
        got += [[]] * (len(oracle) - len(got))
        same = got == oracle
        report.check("monomial_oracle", same, "" if same else "normal words differ from subword-avoiding words")


COMMANDS = {
    "liftings": cmd_liftings,
    "verify-lifting": cmd_verify_lifting,
    "coaction": cmd_coaction,
    "cocycle": cmd_cocycle,
    "good-module": cmd_good_module,
    "primitives": cmd_primitives,
    "check-stratification": cmd_check_stratification,
    "central": cmd_central,
    "truncation": cmd_truncation,
    "normal-words": cmd_normal_words,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nichols-lift", description="Liftings of Nichols algebras of diagonal type.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="session file (TOML)")
    common.add_argument("--degree-bound", type=int, help="completion degree bound D")
    common.add_argument("--order", help="letter precedence, e.g. x2>x1")
    common.add_argument("--cache-dir", help="directory for completed rewrite systems")
    common.add_argument("--format", choices=["human", "machine"], help="report format")
    common.add_argument("--lambda", dest="lambda_", help="parameter values name=value,...")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("coaction", "central", "truncation"):
            sp.add_argument("--element", required=True)
            sp.add_argument("--level", type=int)
        if name == "truncation":
            sp.add_argument("--witness", help="word to test, letters only, e.g. 1122")
            sp.add_argument("--direct", action="store_true", help="reduce u^N instead of projecting")
            sp.add_argument("--expect", choices=["polynomial", "truncated_at"])
        if name == "cocycle":
            sp.add_argument("--h")
            sp.add_argument("--k")
            sp.add_argument("--samples", type=int, default=200)
            sp.add_argument("--max-degree", type=int, default=6)
            sp.add_argument("--seed", type=int, default=0)
        if name == "good-module":
            sp.add_argument("--levels", type=int, help="number of strata to check (default all)")
        if name == "normal-words":
            sp.add_argument("--max-degree", type=int)
        if name == "primitives":
            sp.add_argument("--degree", type=int, required=True)
            sp.add_argument("--level", type=int)
    return p


def run(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    t0 = time.time()
    fmt = args.format or "human"
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
        fmt = args.format or cfg.output_format
        SystemCache.configure(args.cache_dir or cfg.cache_dir)
        session = resolve(cfg, order_override=args.order, degree_bound=args.degree_bound)
        report = Report(args.command, session.input_hash)
        COMMANDS[args.command](session, args, report)
    except (ConfigError, InadmissibleError, OSError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExhausted, DegreeBudgetError, RuleBudgetError, UncertifiedSystemError) as err:
        print(f"budget exhausted: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except (NotHomogeneousError, OutOfScopeError, UnsupportedLeadError, BasisMismatchError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (CocycleError, RejectedParameters) as err:
        print(f"verification failure: {err}", file=sys.stderr)
        return EXIT_FAIL
    report.seconds = time.time() - t0
    out.write(report.render(fmt))
    return EXIT_PASS if report.passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
