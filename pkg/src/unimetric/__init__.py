"""Covering numbers, uniform measures and Orlicz-type chaining bounds on finite metric spaces."""
from . import covering, fields, grr, measure, metric_core, orlicz
from .metric_core import MetricSpace, cycle_space, grid_space, make_space, matrix_space
from .covering import cover_number, pack_number, cover_profile
from .measure import DiscreteMeasure, uniform_measure, ball_mass
from .orlicz import Phi2, PowerYoung, ExpQuadratic, MGFunction

__version__ = "0.1.0"
