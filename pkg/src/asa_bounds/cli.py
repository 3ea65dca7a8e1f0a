"""
asa-bounds : surface en ligne de commande.

Sous-commandes : cohomology, hyper, density, density-relation, es-degree,
asa, quasi-iso, reproduce, catalog. stdout ne porte que le résultat
(JSON déterministe ou texte), les journaux vont sur stderr.

Codes de sortie : 0 succès, 1 échec (reproduce), 2 entrée illisible,
3 invariant violé, 4 verdict UNDECIDED avec --strict.
"""
from __future__ import annotations

import argparse
import logging
import sys

from asa_bounds.catalog import FAMILIES, parse_descriptor, quasi_iso_check
from asa_bounds.cohomology import h, hyper_h1, long_exact_check
from asa_bounds.engine import check_corollary, emit_report, evaluate
from asa_bounds.errors import AsaError, ParseError
from asa_bounds.items import DeltaValue, Verdict, fraction_str
from asa_bounds.number_fields import (
    cyclotomic_E_S,
    density_estimate,
    density_relation_check,
    prime_table,
    sha1_Zn_group,
)
from asa_bounds.reproduce import render_table, report_table, run_suite, suite_to_json
from asa_bounds.settings import Settings, load_settings
from asa_bounds.utils.parsing import (
    build_placeset,
    load_module_file,
    parse_congruence,
    parse_fraction,
    parse_group,
    parse_module,
    parse_poly,
)
from asa_bounds.utils.serialize import dataframe_to_jsonl, dumps

logger = logging.getLogger("asa_bounds")

EXIT_UNDECIDED = 4


class _Parser(argparse.ArgumentParser):
    """argparse quitte en 2 sur erreur de syntaxe : même code que ParseError."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def _out(args, payload: dict, text: str) -> None:
    sys.stdout.write((dumps(payload) if args.json else text) + "\n")


def _add_placeset_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("ensemble de places S")
    g.add_argument("--split", action="store_true", help="premiers totalement décomposés dans L")
    g.add_argument("--all", dest="all_places", action="store_true", help="tous les premiers")
    g.add_argument("--congruence", help="m:a1,a2,... (p ≡ a_i mod m)")
    g.add_argument("--pattern", help="motifs de Frobenius, ex. 1,1;2")
    g.add_argument("--no-archimedean", action="store_true", help="S ne contient pas les places infinies")
    g.add_argument("--symbolic-density", help="densité exacte déclarée, ex. 1/3")


def _placeset(args):
    return build_placeset(args.split, args.all_places, args.congruence, args.pattern,
                          args.no_archimedean, args.symbolic_density)


def _group(args):
    return parse_group(args.gamma) if getattr(args, "gamma", None) else None


# -------------------------
# Sous-commandes
# -------------------------
def cmd_cohomology(args, settings: Settings) -> int:
    group = parse_group(args.group)
    module = load_module_file(args.module_file) if args.module_file else parse_module(args.module, group)
    if module.group != group:
        raise ParseError(f"le module est défini sur {module.group.name}, pas sur {group.name}")
    res = h(args.deg, group, module, with_cocycles=args.cocycles)
    text = res.render()
    if args.cocycles and res.representative_cocycles:
        text += "\n" + "\n".join(f"  cocycle {k}: {list(v)}" for k, v in enumerate(res.representative_cocycles))
    _out(args, {"group": group.name, "module": module.name, **res.to_json()}, text)
    return 0


def cmd_hyper(args, settings: Settings) -> int:
    d = parse_descriptor(args.group, _group(args))
    cx = d.c0_hat if args.c0 else d.c_hat
    res = hyper_h1(d.gamma, cx, with_cocycles=args.cocycles)
    payload = {"descriptor": d.name, "gamma": d.gamma.name, "complex": "C0" if args.c0 else "C", **res.to_json()}
    text = res.render()
    if args.long_exact:
        rep = long_exact_check(d.gamma, cx)
        payload["long_exact"] = rep.to_json()
        text += "\n" + "\n".join(f"  {j.name}: {'exact' if j.exact else 'NOT exact'}" for j in rep.junctions)
        text += f"\n  order identity: {rep.order_identity_holds}"
    _out(args, payload, text)
    return 0


def cmd_density(args, settings: Settings) -> int:
    nf = parse_poly(args.poly, asserted_galois=args.galois)
    spec = _placeset(args)
    bound = args.bound or settings.prime_bound
    est = density_estimate(nf, spec, bound, mode=args.mode, s=args.s or settings.dirichlet_s,
                           workers=args.workers or settings.density_workers, chunk=settings.density_chunk)
    if args.table:
        dataframe_to_jsonl(prime_table(nf, bound, spec), args.table)
        logger.info("table des premiers écrite : %s", args.table)
    text = f"{est.value:.6f}  [{est.interval[0]:.6f}, {est.interval[1]:.6f}]  " \
           f"({est.prime_count_matching}/{est.prime_count_total} premiers <= {bound})"
    if est.expectation is not None:
        text += f"\nexpectation: {float(est.expectation):.6f} ({fraction_str(est.expectation)})"
    _out(args, {"field": nf.to_json(), "placeset": spec.to_json(), **est.to_json()}, text)
    return 0


def cmd_density_relation(args, settings: Settings) -> int:
    nf = parse_poly(args.poly, asserted_galois=True)
    spec = _placeset(args)
    bound = args.bound or settings.prime_bound
    rep = density_relation_check(nf, spec, bound, workers=args.workers or settings.density_workers,
                                 chunk=settings.density_chunk)
    text = f"lhs {rep.lhs:.6f}  rhs {rep.rhs:.6f}  |diff| {abs(rep.difference):.6f}"
    _out(args, rep.to_json(), text)
    return 0


def cmd_es_degree(args, settings: Settings) -> int:
    m, residues = parse_congruence(args.congruence)
    es = cyclotomic_E_S(m, residues)
    payload = es.to_json()
    text = f"[E_S : Q] = {es.degree}  Gal(E_S/Q) = {es.galois_group.render()}"
    if args.zn:
        sha = sha1_Zn_group(m, residues, args.zn)
        payload["sha1_Zn"] = {"n": args.zn, "group": sha.to_json()}
        text += f"\nШ¹_S(Q, Z/{args.zn}) = {sha.render()}"
    _out(args, payload, text)
    return 0


def cmd_asa(args, settings: Settings) -> int:
    d = parse_descriptor(args.group, _group(args))
    spec = _placeset(args)
    delta = DeltaValue.exact(parse_fraction(args.delta), source="--delta") if args.delta else None
    nf = parse_poly(args.poly, asserted_galois=args.galois) if args.poly else None
    l_sub = d.gamma.generated([int(x) for x in args.l_subgroup.split(",")]) if args.l_subgroup else None
    report = evaluate(d, spec, delta, l_sub, nf, args.bound or settings.prime_bound,
                      args.workers or settings.density_workers)
    if args.corollary and report.delta is not None:
        cor = check_corollary(d, l_sub, spec, report.delta)
        report.notes.append(f"corollary: {cor.form or 'no form applies'} ({cor.verdict.value})")
    sys.stdout.write(emit_report(report, "json" if args.json else "text") + "\n")
    if args.strict and report.verdict is Verdict.UNDECIDED:
        return EXIT_UNDECIDED
    return 0


def cmd_quasi_iso(args, settings: Settings) -> int:
    d = parse_descriptor(args.group, _group(args), check=False)
    rep = quasi_iso_check(d)
    text = f"|H1(C)| = {rep.h1_c.order}  |H1(C0)| = {rep.h1_c0.order}  {'equal' if rep.equal else 'DIFFER'}"
    _out(args, rep.to_json(), text)
    return 0 if rep.equal else 1


def cmd_reproduce(args, settings: Settings) -> int:
    bound = args.bound or settings.prime_bound
    df = run_suite(bound, args.workers or settings.density_workers)
    if args.out:
        dataframe_to_jsonl(df, args.out)
    if args.reports_out:
        dataframe_to_jsonl(report_table(), args.reports_out)
    payload = suite_to_json(df, bound)
    text = render_table(df) + f"\n{payload['passed']}/{payload['total']} passed"
    _out(args, payload, text)
    return 0 if payload["all_passed"] else 1


def cmd_catalog(args, settings: Settings) -> int:
    if not args.group:
        _out(args, {"families": list(FAMILIES)}, "\n".join(FAMILIES))
        return 0
    d = parse_descriptor(args.group, _group(args))
    payload = d.to_json()
    text = "\n".join(f"{k}: {v}" for k, v in sorted(payload.items()))
    _out(args, payload, text)
    return 0


# -------------------------
# Parser
# -------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--json", dest="json", action="store_true", default=True, help="sortie JSON (défaut)")
    mode.add_argument("--text", dest="json", action="store_false", help="sortie lisible")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = _Parser(prog="asa-bounds", description="Bornes ASA : cohomologie galoisienne et densités")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cohomology", parents=[common], help="H^i(Γ, M), i = 0, 1, 2")
    c.add_argument("--group", required=True)
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--module")
    src.add_argument("--module-file")
    c.add_argument("--deg", type=int, choices=(0, 1, 2), required=True)
    c.add_argument("--cocycles", action="store_true", help="représentants des générateurs")
    c.set_defaults(func=cmd_cohomology)

    c = sub.add_parser("hyper", parents=[common], help="H^1(Γ, Ĉ) d'une entrée du catalogue")
    c.add_argument("--group", required=True, help="descripteur, ex. gl:2")
    c.add_argument("--gamma", help="groupe de Galois (entrées déployées)")
    c.add_argument("--c0", action="store_true", help="utiliser Ĉ0 au lieu de Ĉ")
    c.add_argument("--long-exact", action="store_true", help="contrôle de la suite exacte longue")
    c.add_argument("--cocycles", action="store_true")
    c.set_defaults(func=cmd_hyper)

    c = sub.add_parser("density", parents=[common], help="densité naturelle ou de Dirichlet")
    c.add_argument("--poly", required=True)
    c.add_argument("--galois", action="store_true", help="corps déclaré galoisien")
    c.add_argument("--bound", type=int)
    c.add_argument("--mode", choices=("natural", "dirichlet"), default="natural")
    c.add_argument("--s", type=float)
    c.add_argument("--workers", type=int)
    c.add_argument("--table", help="écrit la table par premier (JSONL)")
    _add_placeset_args(c)
    c.set_defaults(func=cmd_density)

    c = sub.add_parser("density-relation", parents=[common], help="[L:Q]·δ(split ∩ S) contre δ_L(S_L)")
    c.add_argument("--poly", required=True)
    c.add_argument("--bound", type=int)
    c.add_argument("--workers", type=int)
    _add_placeset_args(c)
    c.set_defaults(func=cmd_density_relation)

    c = sub.add_parser("es-degree", parents=[common], help="[E_S : Q] pour S défini par congruence")
    c.add_argument("--congruence", required=True)
    c.add_argument("--zn", type=int, help="affiche aussi Ш¹_S(Q, Z/n)")
    c.set_defaults(func=cmd_es_degree)

    c = sub.add_parser("asa", parents=[common], help="rapport ASA complet")
    c.add_argument("--group", required=True)
    c.add_argument("--gamma")
    c.add_argument("--delta", help="δ_L(S_L) exact, ex. 1/2")
    c.add_argument("--poly", help="corps L pour l'estimation de δ")
    c.add_argument("--galois", action="store_true")
    c.add_argument("--bound", type=int)
    c.add_argument("--workers", type=int)
    c.add_argument("--l-subgroup", help="générateurs de Gal(/L) dans Γ, ex. 1,2")
    c.add_argument("--corollary", action="store_true", help="ajoute la forme de corollaire applicable")
    c.add_argument("--strict", action="store_true", help="code 4 si le verdict est UNDECIDED")
    _add_placeset_args(c)
    c.set_defaults(func=cmd_asa)

    c = sub.add_parser("quasi-iso", parents=[common], help="|H^1(Ĉ)| = |H^1(Ĉ0)|")
    c.add_argument("--group", required=True)
    c.add_argument("--gamma")
    c.set_defaults(func=cmd_quasi_iso)

    c = sub.add_parser("reproduce", parents=[common], help="suite de reproduction")
    c.add_argument("--bound", type=int)
    c.add_argument("--workers", type=int)
    c.add_argument("--out", help="écrit aussi la table (JSONL)")
    c.add_argument("--reports-out", help="écrit les rapports d'exemple et leurs drapeaux (JSONL)")
    c.set_defaults(func=cmd_reproduce)

    c = sub.add_parser("catalog", parents=[common], help="familles ou descripteur détaillé")
    c.add_argument("--group")
    c.add_argument("--gamma")
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        settings = load_settings()
        args = build_parser().parse_args(argv)
        level = logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else settings.log_level
        logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        return args.func(args, settings)
    except AsaError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
