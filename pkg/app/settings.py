"""
Settings - environment configuration (.env supported)
"""

from __future__ import annotations
import os
from functools import lru_cache
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# Load environment variables from .env if present (safe local development)
load_dotenv()


class Settings(BaseModel):
    """Runtime knobs shared by the CLI, the API and the dashboard"""

    seed: int = 20240229
    max_degree: int = Field(default=6, ge=0, le=12)
    suq2_convention: Literal["standard", "inverted"] = "standard"
    api_url: str = "http://localhost:8000"
    metrics_file: str = "podles_metrics.json"
    word_count: int = Field(default=500, ge=1)
    jacobi_triples: int = Field(default=50, ge=1)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Read PODLES_* variables once"""
    values = {
        "seed": os.getenv("PODLES_SEED"),
        "max_degree": os.getenv("PODLES_MAX_DEGREE"),
        "suq2_convention": os.getenv("PODLES_SUQ2_CONVENTION"),
        "api_url": os.getenv("PODLES_API_URL"),
        "metrics_file": os.getenv("PODLES_METRICS_FILE"),
        "word_count": os.getenv("PODLES_WORD_COUNT"),
        "jacobi_triples": os.getenv("PODLES_JACOBI_TRIPLES"),
    }
    return Settings(**{k: v for k, v in values.items() if v is not None})
