"""Enchaîne `asa-bounds reproduce --out` puis la validation GX de la table produite."""
import argparse
import subprocess
import sys

DEFAULT_TABLE = "data/reproduce/checks.jsonl"
DEFAULT_REPORTS = "data/reproduce/reports.jsonl"


def main() -> int:
    p = argparse.ArgumentParser()
    p.add_argument("--bound", type=int, help="borne B des contrôles de densité")
    p.add_argument("--table", default=DEFAULT_TABLE)
    p.add_argument("--reports", default=DEFAULT_REPORTS)
    args = p.parse_args()

    cmd = [sys.executable, "-m", "asa_bounds.cli", "reproduce", "--text", "--out", args.table, "--reports-out", args.reports]
    if args.bound:
        cmd += ["--bound", str(args.bound)]
    rc = subprocess.run(cmd).returncode
    if rc not in (0, 1):
        # 0/1 : table écrite (réussie ou non) ; autre code : rien à valider
        return rc

    return subprocess.run([sys.executable, "scripts/validate_reproduce_gx.py", "--file", args.table,
                           "--reports-file", args.reports]).returncode


if __name__ == "__main__":
    raise SystemExit(main())
