from __future__ import annotations

import logging
import sys
from typing import Optional, Sequence

from .cli.app import build_app
from .config import get_settings
from .errors import UsageError


def configure_logging(level: str | None = None) -> None:
    logging.basicConfig(
        level=(level or "WARNING").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = get_settings()
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    configure_logging(settings.log_level)
    app = build_app(settings)
    return app.run(argv)
