import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from ajlint.oracle.interpreter import DEFAULT_FUEL

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseModel):
    """
    Process-wide settings read from the environment (and an optional ``.env`` file).

    Command-line flags override every value here.
    """

    fuel: int = Field(default=DEFAULT_FUEL, gt=0)
    log_level: str = "WARNING"
    history_db: Optional[str] = None
    host: str = "0.0.0.0"
    port: int = Field(default=8000, gt=0, lt=65536)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level '{value}'")
        return level


def load_settings() -> Settings:
    load_dotenv()
    values = {
        "fuel": os.getenv("AJLINT_FUEL"),
        "log_level": os.getenv("AJLINT_LOG_LEVEL"),
        "history_db": os.getenv("AJLINT_HISTORY_DB") or None,
        "host": os.getenv("AJLINT_HOST"),
        "port": os.getenv("AJLINT_PORT"),
    }
    return Settings(**{key: value for key, value in values.items() if value is not None})
