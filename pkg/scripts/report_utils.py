"""Aides communes aux scripts d'exploitation (rapports de validation horodatés)."""
import subprocess
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

from asa_bounds.utils.serialize import write_json


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def try_git_commit() -> str | None:
    try:
        return subprocess.check_output(["git", "rev-parse", "HEAD"], text=True, stderr=subprocess.DEVNULL).strip()
    except (OSError, subprocess.CalledProcessError):
        return None


def result_as_dict(result: Any) -> Dict[str, Any]:
    """Résultat GX (objet ou dict) en dict simple."""
    if hasattr(result, "to_json_dict"):
        return result.to_json_dict()
    return dict(result)


def extract_failed_expectations(result: Any, limit: int = 200) -> List[Dict[str, Any]]:
    failed: List[Dict[str, Any]] = []
    for r in result_as_dict(result).get("results", []):
        if r.get("success", True):
            continue
        cfg = r.get("expectation_config", {})
        failed.append({
            "expectation_type": cfg.get("expectation_type") or cfg.get("type"),
            "column": (cfg.get("kwargs") or {}).get("column"),
            "kwargs": cfg.get("kwargs"),
            "unexpected_count": (r.get("result") or {}).get("unexpected_count"),
        })
        if len(failed) >= limit:
            break
    return failed


def write_json_report(report_dir: str, filename: str, payload: Dict[str, Any]) -> str:
    out_path = Path(report_dir) / filename
    write_json(out_path, payload)
    return str(out_path)
