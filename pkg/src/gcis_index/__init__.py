"""Grammar-compressed self-index based on grammar compression by induced
suffix sorting (GCIS)."""

from .builder import BuildOptions, build
from .grammar import Grammar, GrammarStats
from .index_file import convert, dumps, load, loads, save
from .locate import LocateReport, count, locate

__all__ = [
    "BuildOptions",
    "Grammar",
    "GrammarStats",
    "LocateReport",
    "build",
    "convert",
    "count",
    "dumps",
    "load",
    "loads",
    "locate",
    "save",
]
