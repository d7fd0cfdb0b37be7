# sympgrass/config.py

import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import ValidationError

from sympgrass.engine.errors import InvalidInput, UsageError
from sympgrass.models.experiment_models import ExperimentConfig, Tolerances

# ------------------------------------------------------------------
# Load .env from project root (safe regardless of cwd)
# ------------------------------------------------------------------
_env_path = Path(__file__).resolve().parent.parent / ".env"
load_dotenv(dotenv_path=_env_path)

OUT_DIR = Path(os.getenv("SYMPGRASS_OUT_DIR", "results"))
LOG_LEVEL = os.getenv("SYMPGRASS_LOG_LEVEL", "INFO").upper()
DEFAULT_JOBS = int(os.getenv("SYMPGRASS_JOBS", "1"))


def parse_tolerances(pairs) -> Tolerances:
    """KEY=VAL overrides on top of the defaults; unknown keys are a usage error."""
    overrides = {}
    for pair in pairs or ():
        key, sep, raw = pair.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"tolerance override must look like KEY=VAL, got {pair!r}")
        if key not in Tolerances.model_fields:
            raise UsageError(
                f"unknown tolerance {key!r}; known: {', '.join(sorted(Tolerances.model_fields))}"
            )
        try:
            overrides[key] = float(raw)
        except ValueError:
            raise UsageError(f"tolerance {key} needs a number, got {raw!r}")
    try:
        return Tolerances(**overrides)
    except ValidationError as exc:
        raise InvalidInput(f"invalid tolerance: {exc.errors()[0]['msg']}") from exc


def make_config(**fields) -> ExperimentConfig:
    fields.setdefault("jobs", DEFAULT_JOBS)
    try:
        return ExperimentConfig(**fields)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise InvalidInput(f"invalid experiment config ({where}): {first['msg']}") from exc


def default_output_path(suite: str) -> Path:
    return OUT_DIR / f"{suite}.json"
