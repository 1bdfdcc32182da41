"""Base model with common serialization."""
import enum
from dataclasses import fields, is_dataclass
from typing import Any


def to_plain(value: Any) -> Any:
    """Convert a model value into JSON-compatible data with a stable order."""
    if isinstance(value, BaseModel):
        return value.to_dict()
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (set, frozenset)):
        return sorted(to_plain(item) for item in value)
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    return value


class BaseModel:
    """Mixin for frozen dataclass models."""

    def to_dict(self) -> dict[str, Any]:
        """Convert model instance to dictionary."""
        if not is_dataclass(self):
            raise TypeError(f"{type(self).__name__} is not a dataclass")
        return {f.name: to_plain(getattr(self, f.name)) for f in fields(self) if f.repr}
