# treespace/settings.py

import logging
import os

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError, field_validator

from .errors import MalformedInputError

load_dotenv()


class Settings(BaseModel):
    log_level: str = "WARNING"
    search_slack: int = 64
    brute_force_max_columns: int = 20
    enumeration_max_support: int = 16
    pc_max_level: int = 12
    suite_seed: int = 0

    @field_validator("log_level")
    @classmethod
    def known_level(cls, value: str) -> str:
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value!r}")
        return value

    @field_validator("search_slack", "brute_force_max_columns", "enumeration_max_support",
                     "pc_max_level")
    @classmethod
    def positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be a positive integer")
        return value


_ENV = {
    "log_level": "TREESPACE_LOG_LEVEL",
    "search_slack": "TREESPACE_SEARCH_SLACK",
    "brute_force_max_columns": "TREESPACE_BRUTE_FORCE_MAX_COLUMNS",
    "enumeration_max_support": "TREESPACE_ENUMERATION_MAX_SUPPORT",
    "pc_max_level": "TREESPACE_PC_MAX_LEVEL",
    "suite_seed": "TREESPACE_SUITE_SEED",
}


def load_settings() -> Settings:
    values = {field: os.getenv(var) for field, var in _ENV.items()}
    try:
        return Settings(**{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        raise MalformedInputError(f"invalid environment configuration: {e}") from e


settings = load_settings()
