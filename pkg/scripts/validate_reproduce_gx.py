"""
Validation Great Expectations de la table de reproduction (JSONL écrit par
`asa-bounds reproduce --out ...`).

CRITICAL : schéma de la table, identifiants uniques, tous les contrôles réussis.
WARNING  : tolérances présentes sur les contrôles empiriques, détails vides.
REPORTS  : rapports d'exemple (`--reports-out`), drapeaux de cohérence tous à True.
"""
import argparse
import os
import sys
from pathlib import Path

import great_expectations as gx
import pandas as pd

from report_utils import (
    extract_failed_expectations,
    result_as_dict,
    try_git_commit,
    utc_now_iso,
    write_json_report,
)

EMPIRICAL_PREFIXES = ("chebotarev:", "density_relation:", "density_extension:")
REPORT_FLAGS = ("bound_is_consistent", "verdict_is_consistent", "delta_in_range")


def gx_context():
    os.environ["GX_ANALYTICS_ENABLED"] = "False"
    return gx.get_context(mode="ephemeral")


def run_suite(context, df: pd.DataFrame, level: str, add_expectations) -> dict:
    """Une source pandas + une suite par niveau ; renvoie le résultat GX en dict."""
    name = f"reproduce_{level}"
    asset = context.data_sources.add_pandas(name=f"{name}_source").add_dataframe_asset(name=f"{name}_table")
    suite = f"{name}_suite"
    try:
        context.suites.get(suite)
    except Exception:  # GX lève des types différents selon la version
        context.suites.add(gx.ExpectationSuite(name=suite))
    validator = context.get_validator(
        batch_request=asset.build_batch_request(options={"dataframe": df}),
        expectation_suite_name=suite,
    )
    add_expectations(validator)
    return result_as_dict(validator.validate())


def add_critical_expectations(v):
    for col in ("check_id", "citation", "passed", "expected", "observed"):
        v.expect_column_to_exist(col)
    v.expect_column_values_to_not_be_null("check_id")
    v.expect_column_values_to_be_unique("check_id")
    v.expect_column_values_to_match_regex("check_id", r"^[A-Za-z_0-9]+:")
    v.expect_column_values_to_not_match_regex("citation", r"^\s*$")
    v.expect_column_values_to_be_in_set("passed", [True])


def add_warning_expectations(v):
    v.expect_column_values_to_be_in_set("empirical_has_tolerance", [True])
    v.expect_column_values_to_be_between("tolerance", min_value=0.0, max_value=0.05)
    v.expect_column_values_to_be_in_set("detail_is_empty", [True], mostly=0.99)


def add_report_expectations(v):
    for col in ("group", "verdict", "route", *REPORT_FLAGS):
        v.expect_column_to_exist(col)
    v.expect_column_values_to_be_in_set("verdict", ["ASA_HOLDS", "ASA_HOLDS_SA", "UNDECIDED"])
    for col in REPORT_FLAGS:
        v.expect_column_values_to_be_in_set(col, [True])


def main() -> int:
    p = argparse.ArgumentParser()
    p.add_argument("--file", default="data/reproduce/checks.jsonl")
    p.add_argument("--reports-file", default="data/reproduce/reports.jsonl")
    p.add_argument("--report-dir", default="reports/gx")
    p.add_argument("--report-name", default="reproduce_report.json")
    args = p.parse_args()

    path = Path(args.file)
    if not path.exists():
        print(f"Fichier introuvable: {path}", file=sys.stderr)
        return 2

    df = pd.read_json(path, lines=True)

    # ===== Flags calculés =====
    empirical = df["check_id"].astype(str).str.startswith(EMPIRICAL_PREFIXES)
    df["empirical_has_tolerance"] = ~empirical | df["tolerance"].notna()
    df["detail_is_empty"] = df["detail"].fillna("").astype(str).str.strip() == ""

    # ===== GX runtime =====
    context = gx_context()
    sections = {"critical": run_suite(context, df, "critical", add_critical_expectations), "warning": None}
    okcrit = bool(sections["critical"].get("success", False))
    print("CRITICAL success =", okcrit)
    # les avertissements n'ont de sens que sur une table au bon schéma
    if okcrit:
        sections["warning"] = run_suite(context, df, "warning", add_warning_expectations)
        print("WARNING success  =", bool(sections["warning"].get("success", False)))

    reports_path = Path(args.reports_file)
    okreports = True
    sections["reports"] = None
    if reports_path.exists():
        reports_df = pd.read_json(reports_path, lines=True)
        sections["reports"] = run_suite(context, reports_df, "reports", add_report_expectations)
        okreports = bool(sections["reports"].get("success", False))
        print("REPORTS success  =", okreports)
    else:
        print(f"Rapports absents ({reports_path}) : suite REPORTS ignorée")

    failed_ids = df.loc[~df["passed"].astype(bool), "check_id"].tolist()
    for check_id in failed_ids[:25]:
        print(" - échec:", check_id)

    # ===== Rapport JSON =====
    report = {
        "dataset": "reproduce",
        "file": str(path),
        "reports_file": str(reports_path) if reports_path.exists() else None,
        "rows": int(len(df)),
        "failed_checks": failed_ids,
        "gx_version": gx.__version__,
        "run_at_utc": utc_now_iso(),
        "git_commit": try_git_commit(),
    }
    for level, res in sections.items():
        report[level] = None if res is None else {
            "success": bool(res.get("success", False)),
            "statistics": res.get("statistics", {}),
            "failed_expectations": extract_failed_expectations(res),
        }

    out = write_json_report(args.report_dir, args.report_name, report)
    print("Rapport écrit :", out)
    return 0 if okcrit and okreports else 1


if __name__ == "__main__":
    raise SystemExit(main())
