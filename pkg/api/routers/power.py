from typing import List, Optional

from fastapi import APIRouter, HTTPException, Query

from api.models import PowerRowResponse, PowerTableResponse
from comparator_mimo.exceptions import InvalidInputError
from comparator_mimo.power import power_table

router = APIRouter()


@router.get("/power", response_model=PowerTableResponse)
async def get_power_table(
    n_antennas: int = Query(16, description="Receive antennas N_r", ge=0),
    alpha: int = Query(32, description="Comparators of the network receiver", ge=0),
    q_bits: Optional[List[int]] = Query(None, description="ADC resolutions to list"),
):
    """Receiver power of 1-bit, comparator-network and q-bit front ends."""
    try:
        rows = power_table(n_antennas, alpha, q_bits or list(range(2, 11)))
    except InvalidInputError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return PowerTableResponse(
        n_antennas=n_antennas,
        rows=[
            PowerRowResponse(
                architecture=row.architecture,
                milliwatts=row.milliwatts,
                q_bits=row.q_bits,
                alpha=row.alpha,
            )
            for row in rows
        ],
    )
