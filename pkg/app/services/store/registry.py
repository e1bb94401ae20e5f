"""Flat-file class registry: one `name,origin,created_at` line per class"""
from __future__ import annotations

import csv
import io
import logging
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Iterator

from app.exceptions import DuplicateClass, StoreIoError
from app.schemas.registry import ClassOrigin, ClassRegistry, RegisteredClass, default_registry
from app.utils.files import atomic_write_text, exclusive_lock

logger = logging.getLogger(__name__)


def dumps_registry(registry: ClassRegistry) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for entry in registry.classes:
        writer.writerow([entry.name, entry.origin.value, entry.created_at.isoformat()])
    return buffer.getvalue()


def loads_registry(text: str) -> ClassRegistry:
    registry = ClassRegistry()
    for number, fields in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not fields:
            continue
        if len(fields) != 3:
            raise StoreIoError(f"registry line {number}: expected name,origin,created_at")
        name, origin, created_at = fields
        try:
            entry = RegisteredClass(
                name=name,
                origin=ClassOrigin(origin),
                created_at=datetime.fromisoformat(created_at),
            )
        except ValueError as e:
            raise StoreIoError(f"registry line {number}: {e}") from e
        registry.add(entry.name, entry.origin, created_at=entry.created_at)
    return registry


class RegistryStore:
    """Single-writer, multi-reader persistence of the class registry"""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def load(self) -> ClassRegistry:
        """Registry on disk, or the predefined classes when no file exists yet"""
        if not self.path.exists():
            return default_registry()
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as e:
            raise StoreIoError(f"cannot read registry {self.path}: {e}") from e
        return loads_registry(text)

    def save(self, registry: ClassRegistry) -> Path:
        with exclusive_lock(self.path):
            return self.write_locked(registry)

    @contextmanager
    def locked(self) -> Iterator[ClassRegistry]:
        """Hold the registry lock for the block and yield the registry as on disk"""
        with exclusive_lock(self.path):
            yield self.load()

    def write_locked(self, registry: ClassRegistry) -> Path:
        """Write the registry; the caller must be inside locked()"""
        return atomic_write_text(self.path, dumps_registry(registry))

    def append_class(
        self,
        registry: ClassRegistry,
        name: str,
        origin: ClassOrigin = ClassOrigin.SPAWNED,
    ) -> ClassRegistry:
        """
        Add name to the registry as re-read under the lock, then sync the
        in-memory registry to the file. DuplicateClass when either copy has name.
        """
        if name in registry:
            raise DuplicateClass(f"class already registered: {name!r}")

        with self.locked() as current:
            current.add(name, origin)
            self.write_locked(current)

        registry.classes[:] = current.classes
        logger.info("Registered class %s (%s) in %s", name, origin.value, self.path)
        return registry


def append_class(
    registry: ClassRegistry,
    name: str,
    origin: ClassOrigin,
    path: str | Path,
) -> ClassRegistry:
    """Append a class and persist the registry atomically at path"""
    return RegistryStore(path).append_class(registry, name, origin)
