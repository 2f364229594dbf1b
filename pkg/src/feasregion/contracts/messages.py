"""Message vocabulary shared by reports and exceptions."""

from typing import Any

from pydantic import BaseModel, Field


class Message(BaseModel):
    """A message (error or warning) produced by a library operation."""

    code: str = Field(..., description="Machine-readable error/warning code")
    message: str = Field(..., description="Human-readable message")
    context: dict[str, Any] = Field(
        default_factory=dict,
        description="Additional context for debugging",
    )


def err(code: str, message: str, **context: Any) -> Message:
    """Helper to create an error message."""
    return Message(code=code, message=message, context=context)


def warn(code: str, message: str, **context: Any) -> Message:
    """Helper to create a warning message."""
    return Message(code=code, message=message, context=context)
