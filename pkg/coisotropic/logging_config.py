import logging


def setup_logging(level: str = "WARNING") -> None:
    """Configure root logging on stderr; stdout is reserved for reports."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        force=True,
    )
    # sympy is chatty at DEBUG
    logging.getLogger("sympy").setLevel(logging.WARNING)
