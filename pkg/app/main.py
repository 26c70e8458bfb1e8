from __future__ import annotations

from typing import Any, Dict, List, Optional

from fastapi import FastAPI
from pydantic import BaseModel, Field
import asyncio
from dotenv import load_dotenv

from app.calculus import gauge_derivative, xi_forms
from app.settings import get_settings
from app.suite_orchestrator import VERSION, SuiteOrchestrator
from app.vfields import bcd_inverses

# Load environment variables from .env if present (safe local development)
load_dotenv()

app = FastAPI(
    title="Podles Sphere Engine",
    description="""
    Exact symbolic engine for the quantum sphere

    - **Algebra**: normal ordering of z, zb, rhoi and the SU_q(2) images
    - **Calculus**: forms, derivatives, the one-form Xi, vector fields
    - **Integration**: the invariant integral and its recursion
    - **North pole**: the w-patch and the Poisson limit
    - **Verification**: identity suites with reproducible seeds
    """,
    version=VERSION,
)

settings = get_settings()
orchestrator = SuiteOrchestrator(settings)


@app.on_event("startup")
async def startup_prewarm_tables():
    """Build the filtered inverse tables and gauge derivatives in a background thread.

    The first verify request would otherwise pay for them.
    """
    async def _prewarm():
        await asyncio.to_thread(bcd_inverses, min(orchestrator.max_degree, 5))
        await asyncio.to_thread(xi_forms)
        for n in range(4):
            await asyncio.to_thread(gauge_derivative, n)
        print("🔁 Startup pre-warm complete: inverse tables, Xi and gauge derivatives cached")

    asyncio.create_task(_prewarm())


class CommandRequest(BaseModel):
    command: str
    args: List[str] = Field(default_factory=list)
    flags: Dict[str, Any] = Field(default_factory=dict)


class CommandResponse(BaseModel):
    version: str
    command: str
    result: Optional[Any] = None
    error: Optional[dict] = None
    exit_code: int
    latency_ms: float


class StatsResponse(BaseModel):
    summary: dict
    suite_comparison: dict
    recent_runs: list


@app.get("/health")
def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "service": "Podles Sphere Engine",
        "version": VERSION,
    }


@app.post("/command", response_model=CommandResponse)
async def process_command(payload: CommandRequest) -> CommandResponse:
    """
    Run one engine command and return the versioned envelope

    Commands: normalize, mul, comm, star, d, act, integrate, pb, patch,
    limit-classical, verify
    """
    # symbolic work is synchronous
    result = await asyncio.to_thread(orchestrator.process_command, payload.command, payload.args, payload.flags)
    return CommandResponse(**result)


@app.get("/verify/{suite}", response_model=CommandResponse)
async def verify_suite(suite: str, seed: Optional[int] = None) -> CommandResponse:
    """Run one suite (or "all"); an unknown name comes back as an UnknownSuite error"""
    result = await asyncio.to_thread(orchestrator.verify, suite, seed)
    return CommandResponse(**result)


@app.get("/stats", response_model=StatsResponse)
async def get_statistics() -> StatsResponse:
    """Get system statistics and metrics"""
    stats = orchestrator.get_orchestrator_stats()

    return StatsResponse(
        summary=stats["summary"],
        suite_comparison=stats["suite_comparison"],
        recent_runs=stats["recent_runs"],
    )


@app.get("/metrics/export")
async def export_metrics():
    """Export metrics to file"""
    filepath = settings.metrics_file
    if orchestrator.metrics.export_metrics(filepath):
        return {
            "status": "success",
            "filepath": filepath,
            "message": "Metrics exported successfully",
        }
    else:
        return {
            "status": "error",
            "message": "Failed to export metrics",
        }


@app.post("/config/max-degree")
async def set_max_degree(max_degree: int):
    """Update the degree bound used by the suites"""
    if 0 <= max_degree <= 12:
        orchestrator.max_degree = max_degree
        return {
            "status": "success",
            "new_max_degree": max_degree,
        }
    else:
        return {
            "status": "error",
            "message": "max_degree must be between 0 and 12",
        }
