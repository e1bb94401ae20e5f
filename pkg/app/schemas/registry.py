from datetime import datetime, timezone
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from app.constants import PREDEFINED_CLASSES, SPAWNED_CLASS_PREFIX
from app.exceptions import DuplicateClass


class ClassOrigin(str, Enum):
    PREDEFINED = "predefined"
    SPAWNED = "spawned"


class RegisteredClass(BaseModel):
    name: str
    origin: ClassOrigin
    created_at: datetime


class ClassRegistry(BaseModel):
    """Ordered, uniquely named classes known to the classifier"""

    classes: List[RegisteredClass] = Field(default_factory=list)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(entry.name for entry in self.classes)

    @property
    def spawned_count(self) -> int:
        return sum(1 for entry in self.classes if entry.origin == ClassOrigin.SPAWNED)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def next_spawn_name(self) -> str:
        return f"{SPAWNED_CLASS_PREFIX}{self.spawned_count + 1}"

    def add(
        self,
        name: str,
        origin: ClassOrigin,
        created_at: Optional[datetime] = None,
    ) -> "ClassRegistry":
        """Append a class in place"""
        if name in self:
            raise DuplicateClass(f"class already registered: {name!r}")
        self.classes.append(RegisteredClass(
            name=name,
            origin=origin,
            created_at=created_at or datetime.now(timezone.utc),
        ))
        return self


def default_registry(created_at: Optional[datetime] = None) -> ClassRegistry:
    """Registry holding the three predefined car classes"""
    stamp = created_at or datetime(1970, 1, 1, tzinfo=timezone.utc)
    registry = ClassRegistry()
    for name in PREDEFINED_CLASSES:
        registry.add(name, ClassOrigin.PREDEFINED, created_at=stamp)
    return registry
