"""Command-line front end: parse a system file, run one analysis, report."""

from .dsl import ParseError, SystemFile, parse, pretty
from .fixtures import FIXTURES, Fixture
from .main import main, run

__all__ = ["FIXTURES", "Fixture", "ParseError", "SystemFile", "main", "parse", "pretty", "run"]
