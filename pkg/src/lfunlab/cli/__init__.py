"""Experiment runner: subcommands, configuration merging and record output."""

from .main import build_parser, main, merge_config, parse_q_range
from .runner import SUBCOMMANDS, RunConfig, run

__all__ = ["RunConfig", "SUBCOMMANDS", "build_parser", "main", "merge_config", "parse_q_range", "run"]
