import logging
import os
from typing import List, Optional

from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ajlint import __version__
from ajlint.classifier.patterns import InvasivenessPattern
from ajlint.config import load_settings
from ajlint.memory.run_store import RunStore
from ajlint.pipeline import AnalysisPipeline
from ajlint.router.policy_router import EXIT_INPUT_ERROR, PolicyRouter

logger = logging.getLogger(__name__)

settings = load_settings()

# Initialize FastAPI app
app = FastAPI(
    title="ajlint",
    description="Classifies the advices and aspects of AJML programs by invasiveness pattern.",
    version=__version__,
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Initialize components
run_store = RunStore(settings.history_db)
policy_router = PolicyRouter(run_store)
pipeline = AnalysisPipeline(run_store, policy_router)


@app.get("/")
async def root():
    return {"message": "Welcome to ajlint", "version": __version__}


@app.post("/analyze")
async def analyze(
    files: List[UploadFile] = File(...),
    fail_on: str = Form(""),
    verify: Optional[str] = Form(None),
    map_taxonomies: bool = Form(True),
):
    """
    Analyze uploaded .ajml files and return the classification report
    """
    try:
        patterns = [InvasivenessPattern.parse(name) for name in fail_on.split(",") if name.strip()]
    except ValueError as e:
        raise HTTPException(status_code=422, detail=[str(e)])

    sources = []
    for upload in files:
        name = os.path.basename(upload.filename or "upload.ajml")
        try:
            sources.append((name, (await upload.read()).decode("utf-8")))
        except UnicodeDecodeError:
            raise HTTPException(status_code=422, detail=[f"{name}: error: file is not valid UTF-8"])

    result = pipeline.analyze_sources(
        sources,
        fail_on=patterns,
        verify_entry=verify or None,
        map_taxonomies=map_taxonomies,
        fuel=settings.fuel,
    )
    if result.exit_status == EXIT_INPUT_ERROR:
        raise HTTPException(status_code=422, detail=result.errors)

    verification = result.verification
    return JSONResponse(content={
        "run_id": result.run_id,
        "exit_status": result.exit_status,
        "outcome": policy_router.describe(result.exit_status)["meaning"],
        "report": result.report.model_dump(by_alias=True, exclude_none=True),
        "warnings": [str(w) for w in result.warnings],
        "violations": [str(v) for v in verification.violations] if verification else [],
        "verification_fault": verification.fault if verification else None,
    })


@app.get("/runs")
async def list_runs():
    return run_store.list_runs()


@app.get("/runs/{run_id}")
async def get_run(run_id: str):
    """
    Get the stored record of an analysis run
    """
    data = run_store.get_run(run_id)
    if not data:
        raise HTTPException(status_code=404, detail=f"Run ID {run_id} not found")
    return data
