"""Topological-vertex partition functions and Gopakumar-Vafa invariants in exact arithmetic."""

from .qseries import HalfLaurent, QRational, TPoly, qnum, to_t_polynomial
from .partitions import Partition, partitions_of

__version__ = "0.1.0"
