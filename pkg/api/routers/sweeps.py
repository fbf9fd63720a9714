from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool
from loguru import logger
from pydantic import ValidationError

from api.models import PresetListResponse, SweepRequest, SweepResponse, SweepRowResponse
from comparator_mimo.domain.scenario import Scenario
from comparator_mimo.exceptions import (
    ConfigurationError,
    InvalidInputError,
    ScenarioParseError,
    SweepFailure,
)
from comparator_mimo.harness import list_presets, load_preset, report_to_csv, run_sweep

router = APIRouter()


def build_scenario(request: SweepRequest) -> Scenario:
    """Scenario from a preset (with overrides) or from explicit fields."""
    if (request.preset is None) == (request.scenario is None):
        raise InvalidInputError("Provide exactly one of 'preset' or 'scenario'")
    if request.preset is not None:
        fields = load_preset(request.preset).model_dump(by_alias=True)
    else:
        fields = dict(request.scenario or {})
    fields.update(request.overrides)
    try:
        return Scenario.model_validate(fields)
    except ValidationError as e:
        raise InvalidInputError(str(e)) from e


@router.get("/presets", response_model=PresetListResponse)
async def get_presets():
    """Names of the shipped preset scenarios."""
    return PresetListResponse(presets=list_presets())


@router.post("/sweeps", response_model=SweepResponse)
async def create_sweep(request: SweepRequest):
    """Run a scenario synchronously and return its report."""
    try:
        scenario = build_scenario(request)
        logger.info(f"Running sweep '{scenario.name}' with {request.threads} thread(s)")
        report = await run_in_threadpool(run_sweep, scenario, request.threads)
    except (InvalidInputError, ConfigurationError, ScenarioParseError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except SweepFailure as e:
        logger.error(f"Sweep failed: {str(e)}")
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error running sweep: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Error running sweep: {str(e)}")

    return SweepResponse(
        name=scenario.name,
        scenario_hash=report.scenario_hash,
        skipped_trials=report.skipped_trials,
        rows=[SweepRowResponse(**row.model_dump()) for row in report.rows],
        csv=report_to_csv(report),
    )
