"""FastAPI service exposing the profile toolkit over HTTP.

Stateless wrapper around the core package: clients post timing tables as
JSON and get back curves, rankings, flip reports, generated tables, or
rendered SVG. Run with::

    uvicorn profbench.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .. import adversarial, nested, profiles, report
from ..errors import ProfbenchError
from . import schemas

app = FastAPI(
    title="profbench",
    description="Classic and nested performance profiles for solver benchmarking",
    version="0.1.0",
)


@app.exception_handler(ProfbenchError)
async def _domain_error(request: Request, exc: ProfbenchError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={"detail": str(exc), "error": type(exc).__name__},
    )


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/v1/profile", response_model=schemas.ProfileResponse)
def classic_profile(req: schemas.ProfileRequest) -> schemas.ProfileResponse:
    m = req.table.to_matrix()
    r = profiles.compute_ratios(m, None, req.config.failure_ratio)
    curves = {s: profiles.compute_profile(r, s) for s in m.solvers}
    values = (
        {s: curves[s].evaluate(req.tau) for s in m.solvers}
        if req.tau is not None
        else None
    )
    return schemas.ProfileResponse(
        solvers=list(m.solvers),
        failure_ratio=r.failure_ratio,
        curves={
            s: schemas.CurveModel(tau=list(c.taus), value=list(c.values))
            for s, c in curves.items()
        },
        values_at_tau=values,
    )


@app.post("/v1/nested")
def nested_result(req: schemas.NestedRequest) -> dict:
    m = req.table.to_matrix()
    result = nested.nested_profiles(m, req.config.to_config())
    return report.nested_to_obj(result)


@app.post("/v1/rank", response_model=schemas.RankResponse)
def rank(req: schemas.NestedRequest) -> schemas.RankResponse:
    m = req.table.to_matrix()
    cfg = req.config.to_config()
    result = nested.nested_profiles(m, cfg)
    entries = []
    for pos, solver in enumerate(result.ranking, start=1):
        if solver in result.eliminated:
            via = f"best of wave {result.eliminated.index(solver) + 1}"
        else:
            via = f"overall value at tau={cfg.reporting_tau:g}"
        entries.append(
            schemas.RankEntry(
                rank=pos,
                solver=solver,
                value=result.overall[solver].evaluate(cfg.reporting_tau),
                via=via,
            )
        )
    return schemas.RankResponse(
        ranking=list(result.ranking),
        reporting_tau=cfg.reporting_tau,
        entries=entries,
        convention=nested.RANKING_NOTE,
    )


@app.post("/v1/generate", response_model=schemas.TimingTable)
def generate_table(req: schemas.GenerateRequest) -> schemas.TimingTable:
    if req.sizes is None:
        spec = adversarial.default_spec(req.solvers)
        if req.time_base != 1.0:
            spec = adversarial.AdversarialSpec(
                spec.n_solvers, spec.partition_sizes, req.time_base
            )
    else:
        spec = adversarial.AdversarialSpec(
            req.solvers, tuple(req.sizes), req.time_base
        )
    return schemas.TimingTable.from_matrix(adversarial.generate(spec))


@app.post("/v1/flipcheck", response_model=schemas.FlipResponse)
def flipcheck(req: schemas.NestedRequest) -> schemas.FlipResponse:
    m = req.table.to_matrix()
    flip = adversarial.check_flip(m, req.config.to_config())
    return schemas.FlipResponse(**flip.to_dict())


@app.post("/v1/plot")
def plot(req: schemas.PlotRequest) -> Response:
    m = req.table.to_matrix()
    if req.source == "classic":
        r = profiles.compute_ratios(m, None, req.config.failure_ratio)
        curves = {s: profiles.compute_profile(r, s) for s in m.solvers}
        rm = r.failure_ratio
    else:
        result = nested.nested_profiles(m, req.config.to_config())
        curves = {s: result.overall[s] for s in m.solvers}
        rm = result.failure_ratio

    opts = req.plot
    if opts.tau_max is not None:
        tau_max = opts.tau_max
    else:
        fraction = report.AutoFraction(opts.tau_max_fraction or 0.6)
        finite = [t for c in curves.values() for t in c.taus if t < rm]
        tau_max = fraction.fraction * max(finite) if finite else fraction

    spec = report.PlotSpec(
        log_scale=opts.log2,
        tau_max=tau_max,
        width=opts.width,
        height=opts.height,
        title=opts.title,
    )
    return Response(
        content=report.render_svg(curves, spec),
        media_type="image/svg+xml",
    )
