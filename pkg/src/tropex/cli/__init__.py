"""Command line front end: expression syntax, JSON output and SVG drawings."""

from .main import COMMANDS, CommandResult, build_parser, main, run
from .parser import (
    format_polynomial, format_smooth, format_value, parse_point, parse_polynomial, parse_smooth,
)
from .svg import render_svg

__all__ = [
    "COMMANDS", "CommandResult", "build_parser", "format_polynomial", "format_smooth",
    "format_value", "main", "parse_point", "parse_polynomial", "parse_smooth", "render_svg", "run",
]
