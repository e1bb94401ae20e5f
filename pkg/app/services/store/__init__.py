"""Persistence of models and the class registry"""

from .model_file import dumps_model, load_model, loads_model, save_model
from .registry import RegistryStore, append_class, dumps_registry, loads_registry

__all__ = [
    'save_model', 'load_model', 'dumps_model', 'loads_model',
    'RegistryStore', 'append_class', 'dumps_registry', 'loads_registry',
]
