import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from asa_bounds.errors import ConfigError

PROJECT_NAME = "asa_bounds"

# Versions stampées sur chaque rapport (traçabilité, cf. pipelines.py)
SCHEMA_VERSION = "asa.report.v1"
ENGINE_VERSION = "asa_engine:v1"

# Densités
PRIME_BOUND = 100_000          # borne B par défaut (surchargée par ASA_PRIME_BOUND)
MIN_PRIME_BOUND = 100
DIRICHLET_S = 1.05             # s > 1 du mode dirichlet
DENSITY_CHUNK = 20_000         # taille des tranches de nombres premiers
DENSITY_WORKERS = 1            # > 1 : tranches réparties sur des processus

# Cohomologie : les cochaînes de degré 3 ont (|Γ|-1)^3 blocs
MAX_GROUP_ORDER = 24
COHOMOLOGY_CACHE_SIZE = 256  # présentations mémoïsées par (degré, Γ, M)

LOG_LEVEL = "WARNING"

ROOT = Path(__file__).resolve().parents[2]


def _env_int(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.replace("_", ""))
    except ValueError as e:
        raise ConfigError(f"{name}={raw!r} n'est pas un entier") from e
    if value < minimum:
        raise ConfigError(f"{name}={value} doit être >= {minimum}")
    return value


def _env_float(name: str, default: float, lower: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError as e:
        raise ConfigError(f"{name}={raw!r} n'est pas un nombre") from e
    if value <= lower:
        raise ConfigError(f"{name}={value} doit être > {lower}")
    return value


@dataclass(frozen=True)
class Settings:
    prime_bound: int = PRIME_BOUND
    dirichlet_s: float = DIRICHLET_S
    density_chunk: int = DENSITY_CHUNK
    density_workers: int = DENSITY_WORKERS
    log_level: str = LOG_LEVEL

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            prime_bound=_env_int("ASA_PRIME_BOUND", PRIME_BOUND, MIN_PRIME_BOUND),
            dirichlet_s=_env_float("ASA_DIRICHLET_S", DIRICHLET_S, 1.0),
            density_chunk=_env_int("ASA_DENSITY_CHUNK", DENSITY_CHUNK, 1000),
            density_workers=_env_int("ASA_DENSITY_WORKERS", DENSITY_WORKERS, 1),
            log_level=(os.getenv("ASA_LOG_LEVEL") or LOG_LEVEL).upper(),
        )


def load_settings(dotenv_path: Path | None = None) -> Settings:
    """Charge le .env à la racine du dépôt (s'il existe) puis lit l'environnement."""
    load_dotenv(dotenv_path=dotenv_path or ROOT / ".env")
    current_max_group_order()  # ConfigError dès le démarrage
    return Settings.from_env()


def current_max_group_order() -> int:
    """Seule lecture de ASA_MAX_GROUP_ORDER, relue à chaque calcul."""
    return _env_int("ASA_MAX_GROUP_ORDER", MAX_GROUP_ORDER, 1)
