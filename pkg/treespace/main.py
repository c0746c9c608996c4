# treespace/main.py
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .logging_config import configure_logging
from .routers import constructions, dual, space


def create_app() -> FastAPI:
    configure_logging()
    app = FastAPI(title="treespace")

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    app.include_router(space.router)
    app.include_router(dual.router)
    app.include_router(constructions.router)
    return app


app = create_app()
