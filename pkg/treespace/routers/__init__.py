# treespace/routers/__init__.py

from contextlib import contextmanager

from fastapi import HTTPException

from ..errors import TreespaceError


@contextmanager
def translate_errors():
    """Maps treespace errors onto HTTP errors with their status codes."""
    try:
        yield
    except TreespaceError as e:
        raise HTTPException(status_code=e.status_code, detail=str(e)) from e
