"""Storage parameters, model instances and the formulation builders."""
from .builders import (BUILDERS, build, build_bo, build_bof, build_bir, build_bor, build_tir, build_to,
                       build_tor)
from .model import BINARY, CONTINUOUS, ModelInstance, Variable, relax
from .params import (BASIC_OF, FAMILIES, INVESTMENT, OPERATION, RESERVES, TIGHT_OF, ReserveProfile,
                     StorageParams, Violation, validate_params)

__all__ = [
    "StorageParams", "ReserveProfile", "Violation", "validate_params",
    "ModelInstance", "Variable", "relax", "BINARY", "CONTINUOUS",
    "build", "build_bo", "build_to", "build_bor", "build_tor", "build_bir", "build_tir", "build_bof", "BUILDERS",
    "FAMILIES", "OPERATION", "RESERVES", "INVESTMENT", "TIGHT_OF", "BASIC_OF",
]
