from .app import CliApp, RunConfig, build_app, parse_group_input, run

__all__ = ["CliApp", "RunConfig", "build_app", "parse_group_input", "run"]
