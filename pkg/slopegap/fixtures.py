"""
fixtures.py — Bundled square-tiled surfaces.

    torus        one square
    three-tile   L-shaped surface in genus 2, orbit of three surfaces
    four-tile    r = (1 2)(3 4), u = (2 3); three cusps of width 2
    ten-tile     two horizontal 5-cylinders glued by (1 9)(2 10); index 12
"""

from typing import Callable, Dict

from slopegap.errors import OrigamiFormatError
from slopegap.origami import Origami, is_isomorphic, parse_origami

TORUS = "(1)|(1)"
THREE_TILE = "(1,2)|(1,2,3)"
FOUR_TILE = "(1,2)(3,4)|(2,3)"
TEN_TILE = "(1,2,3,4,5)(6,7,8,9,10)|(1,9)(2,10)"


def torus() -> Origami:
    return parse_origami(TORUS)


def three_tile() -> Origami:
    return parse_origami(THREE_TILE)


def four_tile() -> Origami:
    return parse_origami(FOUR_TILE)


def ten_tile() -> Origami:
    return parse_origami(TEN_TILE)


NAMED: Dict[str, Callable[[], Origami]] = {
    "torus": torus,
    "three-tile": three_tile,
    "four-tile": four_tile,
    "ten-tile": ten_tile,
}


def resolve(text: str) -> Origami:
    """Accept either a bundled name or origami text."""
    key = text.strip().lower()
    if key in NAMED:
        return NAMED[key]()
    if "|" not in text:
        raise OrigamiFormatError(
            f"unknown surface {text!r}; use a bundled name ({', '.join(NAMED)}) "
            f"or the '(..)(..)|(..)' notation"
        )
    return parse_origami(text)


def is_ten_tile(o: Origami) -> bool:
    return is_isomorphic(o, ten_tile())
