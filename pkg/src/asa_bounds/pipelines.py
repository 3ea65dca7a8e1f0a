# asa_bounds/pipelines.py
from __future__ import annotations

from fractions import Fraction

from asa_bounds.items import AsaReport, Verdict
from asa_bounds.settings import ENGINE_VERSION, SCHEMA_VERSION


def _frac_or_none(x) -> Fraction | None:
    try:
        if x is None:
            return None
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError):
        return None


class ReportPipeline:
    """
    Dernière étape avant émission : versions + drapeaux de cohérence
    (exportés par `reproduce --reports-out`, attendus à True par la validation GX).
    """

    SCHEMA_VERSION = SCHEMA_VERSION
    ENGINE_VERSION = ENGINE_VERSION

    def process_item(self, item: AsaReport | dict) -> dict:
        data = item.to_json() if isinstance(item, AsaReport) else dict(item)

        # --- 1) versions (pas d'horodatage : sortie reproductible) ---
        data["schema_version"] = self.SCHEMA_VERSION
        data["engine_version"] = self.ENGINE_VERSION

        # --- 2) borne = δ^-r · |H1| · |H2| quand δ est exact ---
        delta = data.get("delta") or {}
        factors = data.get("factors") or {}
        bound = _frac_or_none(data.get("bound"))
        d = _frac_or_none(delta.get("value")) if delta.get("kind") == "exact" else None
        if data.get("route") == "exact_cyclotomic" or bound is None or d is None or d <= 0:
            data["bound_is_consistent"] = bound is None or bound >= 1
        else:
            expected = Fraction(int(factors.get("h1", 1)) * int(factors.get("h2", 1))) / d ** int(factors.get("r", 0))
            data["bound_is_consistent"] = bound == expected

        # --- 3) verdict : SA seulement avec δ exact et borne < 2 ---
        verdict = data.get("verdict")
        if verdict == Verdict.ASA_HOLDS_SA.value:
            data["verdict_is_consistent"] = bound is not None and bound < 2 and (
                delta.get("kind") == "exact" or data.get("route") == "exact_cyclotomic")
        else:
            data["verdict_is_consistent"] = verdict in (Verdict.ASA_HOLDS.value, Verdict.UNDECIDED.value)

        # --- 4) δ dans [0, 1] ---
        if delta.get("kind") == "exact":
            data["delta_in_range"] = d is not None and 0 <= d <= 1
        elif delta:
            lo, hi = delta.get("interval") or (None, None)
            data["delta_in_range"] = lo is not None and 0 <= lo <= delta["value"] <= hi <= 1
        else:
            data["delta_in_range"] = True

        return data
