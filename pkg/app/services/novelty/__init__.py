"""Novelty detection and dynamic class generation"""

from .novelty import (
    check_ranges,
    detect_novel,
    ranges_from_model,
    spawn_class,
    zscore_bounds,
)

__all__ = ['zscore_bounds', 'ranges_from_model', 'check_ranges', 'detect_novel', 'spawn_class']
