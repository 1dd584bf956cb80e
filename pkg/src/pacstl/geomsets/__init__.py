"""Intervals, ellipsoids, zonotopes and their planar projections."""
from pacstl.geomsets.interval import Interval, hull, imax, imin
from pacstl.geomsets.planar import PlanarEllipse, PlanarPolygon, norm_range
from pacstl.geomsets.sets import (
    ConvexSet,
    Ellipsoid,
    Zonotope,
    contains,
    project_coord,
    project_plane,
    set_from_dict,
    support,
)

__all__ = [
    "ConvexSet",
    "Ellipsoid",
    "Interval",
    "PlanarEllipse",
    "PlanarPolygon",
    "Zonotope",
    "contains",
    "hull",
    "imax",
    "imin",
    "norm_range",
    "project_coord",
    "project_plane",
    "set_from_dict",
    "support",
]
