"""Bundled example models.

Every case the documentation and tests talk about ships as a .cg file in
this package, so analyses are reproducible from the installed wheel
alone. `model_path` hands back a real filesystem path suitable for the
CLI.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..modelio import ModelSpec, parse_model


def _root():
    return resources.files(__package__)


def list_models() -> tuple[str, ...]:
    """Names of all bundled models, without the .cg suffix."""
    names = [
        entry.name[:-3]
        for entry in _root().iterdir()
        if entry.name.endswith(".cg")
    ]
    return tuple(sorted(names))


def model_path(name: str) -> Path:
    """Filesystem path of a bundled model (or .coef config) file."""
    filename = name if "." in name else f"{name}.cg"
    path = Path(str(_root().joinpath(filename)))
    if not path.is_file():
        raise FileNotFoundError(f"no bundled file {filename!r}")
    return path


def model_text(name: str) -> str:
    return model_path(name).read_text(encoding="utf-8")


def load_model(name: str) -> ModelSpec:
    """Parse a bundled model by name, e.g. ``load_model("mentor")``."""
    return parse_model(model_text(name))
