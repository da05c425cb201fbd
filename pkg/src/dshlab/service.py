"""HTTP service exposing the toolkit: curves, verification suites, demos.

The CLI talks to this app in-process by default (no socket); `dsh serve`
runs the same app under uvicorn for remote use. Endpoints that produce
CSV return it as text so clients can write it straight to disk.
"""

from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from . import __version__
from .csvio import rows_to_csv
from .demos import (
    annulus_demo,
    privacy_demo,
    range_demo,
    run_annulus_demo,
)
from .familyspec import FAMILY_NAMES, SpecError, parse_family
from .indexes import AnnulusQueryParams
from .verify import SUITES, cpf_curve_rows, run_suite

app = FastAPI(title="dshlab", version=__version__)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/families")
def families() -> dict:
    return {"families": list(FAMILY_NAMES), "suites": sorted(SUITES)}


class CurveRequest(BaseModel):
    family: str
    grid: list[float]
    n: int = Field(default=0, ge=0, description="MC samples per point; 0 = closed form only")
    seed: int = 0
    dim: int = Field(default=16, ge=1)


@app.post("/cpf/curve", response_class=PlainTextResponse)
def cpf_curve(req: CurveRequest) -> str:
    try:
        fam = parse_family(req.family, default_dim=req.dim)
    except SpecError as e:
        raise HTTPException(status_code=422, detail=str(e))
    rows = cpf_curve_rows(fam, req.grid, n=req.n, seed=req.seed)
    return rows_to_csv(rows)


class VerifyRequest(BaseModel):
    suite: str
    seed: Optional[int] = None


class CheckResultModel(BaseModel):
    name: str
    verdict: str
    detail: str


class VerifyResponse(BaseModel):
    suite: str
    ok: bool
    results: list[CheckResultModel]


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    if req.suite not in SUITES:
        raise HTTPException(
            status_code=422,
            detail=f"unknown suite {req.suite!r}; choose from {sorted(SUITES)}",
        )
    results = run_suite(req.suite, seed=req.seed)
    return VerifyResponse(
        suite=req.suite,
        ok=all(r.ok for r in results),
        results=[
            CheckResultModel(name=r.name, verdict=r.verdict, detail=r.detail)
            for r in results
        ],
    )


class AnnulusPlantedRequest(BaseModel):
    mode: Literal["planted"] = "planted"
    domain: Literal["hamming", "sphere"] = "hamming"
    n: int = Field(default=10_000, ge=1)
    n_queries: int = Field(default=200, ge=1)
    seed: int = 0


class AnnulusDatasetRequest(BaseModel):
    mode: Literal["dataset"] = "dataset"
    domain: Literal["hamming", "sphere"]
    points: list[list[float]]
    queries: list[list[float]]
    family: str
    r_minus: float
    r: float
    r_plus: float
    seed: int = 0


class AnnulusResponse(BaseModel):
    domain: str
    dim: int
    n_points: int
    n_queries: int
    L: int
    pwr: int
    cutoff: Optional[int]
    mean_recall: float
    mean_candidates: float
    max_candidates: int
    csv: str


def _dataset_array(domain: str, rows: list[list[float]], dim: int) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.float64)
    if arr.size == 0:
        arr = arr.reshape(0, dim)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise HTTPException(status_code=422, detail=f"points must be rows of length {dim}")
    if domain == "hamming":
        if not np.isin(arr, (0.0, 1.0)).all():
            raise HTTPException(status_code=422, detail="hamming points must be 0/1")
        return arr.astype(np.uint8)
    return arr


@app.post("/demos/annulus", response_model=AnnulusResponse)
def demos_annulus(req: AnnulusPlantedRequest | AnnulusDatasetRequest) -> AnnulusResponse:
    if req.mode == "planted":
        rep = annulus_demo(req.domain, n=req.n, n_queries=req.n_queries, seed=req.seed)
    else:
        try:
            fam = parse_family(req.family, default_dim=_req_dim(req))
        except SpecError as e:
            raise HTTPException(status_code=422, detail=str(e))
        if fam.domain_tag != req.domain:
            raise HTTPException(
                status_code=422,
                detail=f"family lives on {fam.domain_tag!r}, dataset says {req.domain!r}",
            )
        points = _dataset_array(req.domain, req.points, fam.dimension)
        queries = _dataset_array(req.domain, req.queries, fam.dimension)
        try:
            params = AnnulusQueryParams(r=req.r, r_minus=req.r_minus, r_plus=req.r_plus)
        except ValueError as e:
            raise HTTPException(status_code=422, detail=str(e))
        rep = run_annulus_demo(points, queries, fam, params, seed=req.seed)
    return AnnulusResponse(
        domain=rep.domain,
        dim=rep.dim,
        n_points=rep.n_points,
        n_queries=rep.n_queries,
        L=rep.L,
        pwr=rep.pwr,
        cutoff=rep.cutoff,
        mean_recall=rep.mean_recall,
        mean_candidates=rep.mean_candidates,
        max_candidates=rep.max_candidates,
        csv=rep.to_csv(),
    )


def _req_dim(req: AnnulusDatasetRequest) -> int:
    if req.points:
        return len(req.points[0])
    if req.queries:
        return len(req.queries[0])
    raise HTTPException(status_code=422, detail="dataset mode needs points or queries")


class RangeDemoRequest(BaseModel):
    n: int = Field(default=10_000, ge=1)
    n_queries: int = Field(default=200, ge=1)
    seed: int = 0


class RangeDemoResponse(BaseModel):
    domain: str
    dim: int
    n_points: int
    n_queries: int
    L: int
    pwr: int
    offsets: list[int]
    class_frequency: list[float]
    mean_duplicate_factor: float
    all_within_r_plus: bool
    csv: str


@app.post("/demos/range", response_model=RangeDemoResponse)
def demos_range(req: RangeDemoRequest) -> RangeDemoResponse:
    rep = range_demo(n=req.n, n_queries=req.n_queries, seed=req.seed)
    return RangeDemoResponse(
        domain=rep.domain,
        dim=rep.dim,
        n_points=rep.n_points,
        n_queries=rep.n_queries,
        L=rep.L,
        pwr=rep.pwr,
        offsets=list(rep.offsets),
        class_frequency=list(rep.class_frequency),
        mean_duplicate_factor=rep.mean_duplicate_factor,
        all_within_r_plus=rep.all_within_r_plus,
        csv=rep.to_csv(),
    )


class PrivacyDemoRequest(BaseModel):
    d: int = Field(default=128, ge=1)
    r: float = 0.1
    c: float = 2.0
    epsilon: float = 0.05
    delta: float = 0.05
    rho: float = 0.5
    C: float = 14.0
    n_pairs: int = Field(default=2000, ge=1)
    seed: int = 0


class PrivacyDemoResponse(BaseModel):
    t: int
    n_hashes: int
    bits: int
    step_exponent: int
    n_pairs: int
    close_yes_rate: float
    far_yes_rate: float
    mean_leakage_close: float
    mean_leakage_far: float
    csv: str


@app.post("/demos/privacy", response_model=PrivacyDemoResponse)
def demos_privacy(req: PrivacyDemoRequest) -> PrivacyDemoResponse:
    try:
        rep = privacy_demo(
            d=req.d,
            r=req.r,
            c=req.c,
            epsilon=req.epsilon,
            delta=req.delta,
            rho=req.rho,
            n_pairs=req.n_pairs,
            seed=req.seed,
            C=req.C,
        )
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return PrivacyDemoResponse(
        t=rep.params.t,
        n_hashes=rep.params.n_hashes,
        bits=rep.params.bits,
        step_exponent=rep.step_exponent,
        n_pairs=rep.n_pairs,
        close_yes_rate=rep.close_yes_rate,
        far_yes_rate=rep.far_yes_rate,
        mean_leakage_close=rep.mean_leakage_close,
        mean_leakage_far=rep.mean_leakage_far,
        csv=rep.to_csv(),
    )
