"""Built-in structuring elements and filters, shipped as SEM assets."""

from __future__ import annotations

import logging
from importlib import resources
from pathlib import Path

from .errors import ValueRangeError
from .grid import GreyImage, check_ceilings
from .netpbm import parse_sem, read_image

logger = logging.getLogger(__name__)

BUILTIN_ELEMENTS = ("flat3", "flat5", "k2", "b2", "c2")


def builtin(name: str, ceiling: int | None = None) -> GreyImage:
    """Load a built-in element, optionally re-read under another ceiling.

    Raises:
        KeyError: for an unknown name.
    """
    if name not in BUILTIN_ELEMENTS:
        raise KeyError(f"unknown built-in element {name!r}; choose from {', '.join(BUILTIN_ELEMENTS)}")
    text = (resources.files("morphsample") / "assets" / f"{name}.sem").read_text()
    element = parse_sem(text)
    return element if ceiling is None else rebase(element, ceiling)


def rebase(element: GreyImage, ceiling: int) -> GreyImage:
    """Reinterpret an element under a different ceiling.

    Raises:
        ValueRangeError: if an offset exceeds the new ceiling.
    """
    if element.max_value() > ceiling:
        raise ValueRangeError(
            f"element offsets reach {element.max_value()}, above ceiling {ceiling}"
        )
    return element.with_ceiling(ceiling)


def load_element(ref: str, ceiling: int | None = None) -> GreyImage:
    """Resolve ``ref`` as a built-in name first, then as a PGM/SEM path.

    Built-ins adopt ``ceiling``; an element read from a file must already have it.

    Raises:
        CeilingMismatchError: if a file element's ceiling differs from ``ceiling``.
    """
    if ref in BUILTIN_ELEMENTS:
        return builtin(ref, ceiling)
    element = read_image(Path(ref))
    logger.debug(f"Loaded element {ref}: {element!r}")
    if ceiling is not None:
        check_ceilings(element.ceiling, ceiling)
    return element
