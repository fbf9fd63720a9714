from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from loguru import logger

from api.routers import config, power, sweeps
from comparator_mimo.harness import list_presets


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Lifespan event handler for the FastAPI application.
    Reports the preset scenarios available to the sweep endpoint.
    """
    logger.info("Starting API initialization...")
    presets = list_presets()
    if presets:
        logger.info(f"{len(presets)} preset scenarios available")
    else:
        logger.warning("No preset scenarios found; only explicit scenarios can be run")
    logger.success("API initialization completed successfully")

    yield

    logger.info("API shutdown complete")


app = FastAPI(
    title="Comparator MIMO API",
    description="Sweeps and power model of comparator-network 1-bit MIMO receivers",
    version="0.1.0",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],  # In production, replace with specific origins
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(config.router, prefix="/api", tags=["config"])
app.include_router(power.router, prefix="/api", tags=["power"])
app.include_router(sweeps.router, prefix="/api", tags=["sweeps"])


@app.get("/")
async def root():
    return {"message": "Comparator MIMO API is running"}


@app.get("/health")
async def health():
    return {"status": "healthy"}
