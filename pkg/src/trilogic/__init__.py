"""Triangle logics for spatial and spatio-temporal databases over exact rationals."""
from .errors import TrilogicError
from .geom import Affinity, Point2, Triangle, point, triangle
from .st import STPoint, STTransform, STTriangle
from .model import Database, Relation, Schema, load_database, parse_database, format_database
from .logic import parse, parse_queries, to_text
from .translate import lift, lower
from .evaluate import evaluate, evaluate_ground, check_generic, witness_universe
from .repr import aftr, boundary, drawing, export_svg

__all__ = [
    "TrilogicError", "Affinity", "Point2", "Triangle", "point", "triangle",
    "STPoint", "STTransform", "STTriangle",
    "Database", "Relation", "Schema", "load_database", "parse_database", "format_database",
    "parse", "parse_queries", "to_text", "lift", "lower",
    "evaluate", "evaluate_ground", "check_generic", "witness_universe",
    "aftr", "boundary", "drawing", "export_svg",
]
