"""Multidimensional cube: member trees, base cells, aggregation."""

from .core import (EMPTY, CellValue, Cube, CubeManager, build_cube,
                   invalidate)
from .fold import KERNEL_LANE, active_lane, fold_groups
from .members import Member, MemberTree

__all__ = ["EMPTY", "CellValue", "Cube", "CubeManager", "build_cube",
           "invalidate", "KERNEL_LANE", "active_lane", "fold_groups",
           "Member", "MemberTree"]
