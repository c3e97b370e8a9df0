"""Reading image documents, point sets and decompositions from files.

Image document (JSON)::

    {"dim": 3, "adjacency": "c1",
     "cubes": [{"lo": [0, 0, 0], "hi": [6, 6, 6]}],
     "holes": [{"lo": [2, 2, 2], "hi": [4, 4, 4]}]}

``adjacency`` is ``"c1"``, ``"cN"`` (meaning u = dim), ``"c<k>"`` or a bare
integer. Instead of ``cubes`` a document may list ``points``. Holes are
subtracted after the cubes are united.

Point sets are either JSON (a list of points, or an object with a
``points`` list) or plain text with one point per line, coordinates
separated by spaces or commas and ``#`` starting a comment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .construct import CubeDecomposition, CubeSpec
from .errors import DigifreezeError
from .lattice import DigitalImage, Point


class DocumentError(DigifreezeError):
    """A file could not be parsed or failed validation."""


@dataclass(frozen=True)
class ImageDocument:
    dim: int
    u: int
    points: Optional[Tuple[Point, ...]] = None
    cubes: Optional[Tuple[CubeSpec, ...]] = None
    holes: Tuple[CubeSpec, ...] = ()

    def point_set(self) -> set:
        if self.points is not None:
            return set(self.points)
        out = set()
        for c in self.cubes:
            out.update(c.points())
        for h in self.holes:
            out.difference_update(h.points())
        return out

    def image(self, u: Optional[int] = None) -> DigitalImage:
        pts = self.point_set()
        if not pts:
            raise DocumentError("document describes an empty image")
        return DigitalImage(pts, u=self.u if u is None else u, dim=self.dim)

    def decomposition(self) -> Optional[CubeDecomposition]:
        """The document's cubes as a decomposition, when they describe X exactly."""
        if self.cubes and not self.holes:
            return CubeDecomposition(self.cubes)
        return None


def parse_adjacency(value, dim: int, where: str = "adjacency") -> int:
    if isinstance(value, bool):
        raise DocumentError(f"{where}: expected 'c1', 'cN' or an integer, got {value!r}")
    if isinstance(value, int):
        u = value
    elif isinstance(value, str):
        text = value.strip()
        if text.lower() in ("cn", "c_n"):
            u = dim
        else:
            digits = text[1:].lstrip("_") if text[:1].lower() == "c" else text
            try:
                u = int(digits)
            except ValueError:
                raise DocumentError(f"{where}: expected 'c1', 'cN' or an integer, got {value!r}") from None
    else:
        raise DocumentError(f"{where}: expected 'c1', 'cN' or an integer, got {value!r}")
    if not 1 <= u <= dim:
        raise DocumentError(f"{where}: u={u} must lie in 1..{dim}")
    return u


def _read(source: Union[str, Path]) -> Tuple[str, str]:
    path = Path(source)
    try:
        return path.read_text(), str(path)
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror or exc}") from None


def _load_json(text: str, name: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{name}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _int_vector(value, dim: Optional[int], where: str) -> Point:
    if not isinstance(value, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in value):
        raise DocumentError(f"{where}: expected a list of integers, got {value!r}")
    if dim is not None and len(value) != dim:
        raise DocumentError(f"{where}: expected {dim} coordinates, got {len(value)}")
    return tuple(value)


def _cube(value, dim: int, where: str) -> CubeSpec:
    if isinstance(value, dict):
        if set(value) != {"lo", "hi"}:
            raise DocumentError(f"{where}: a cube needs exactly the fields 'lo' and 'hi'")
        lo, hi = value["lo"], value["hi"]
    elif isinstance(value, list) and len(value) == 2:
        lo, hi = value
    else:
        raise DocumentError(f"{where}: expected {{'lo': [...], 'hi': [...]}}")
    lo = _int_vector(lo, dim, f"{where}.lo")
    hi = _int_vector(hi, dim, f"{where}.hi")
    if any(a > b for a, b in zip(lo, hi)):
        raise DocumentError(f"{where}: lo exceeds hi on some axis")
    return CubeSpec(lo, hi)


def parse_image_document(data, name: str = "<document>") -> ImageDocument:
    if not isinstance(data, dict):
        raise DocumentError(f"{name}: top level must be an object")
    allowed = {"dim", "adjacency", "points", "cubes", "holes"}
    extra = set(data) - allowed
    if extra:
        raise DocumentError(f"{name}: unknown field(s) {', '.join(sorted(extra))}")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError(f"{name}: dim: expected a positive integer, got {dim!r}")
    u = parse_adjacency(data.get("adjacency", "c1"), dim, f"{name}: adjacency")
    has_points, has_cubes = "points" in data, "cubes" in data
    if has_points == has_cubes:
        raise DocumentError(f"{name}: give exactly one of 'points' or 'cubes'")
    if "holes" in data and not has_cubes:
        raise DocumentError(f"{name}: holes: only allowed together with cubes")
    if has_points:
        raw = data["points"]
        if not isinstance(raw, list) or not raw:
            raise DocumentError(f"{name}: points: expected a nonempty list")
        pts = tuple(_int_vector(p, dim, f"{name}: points[{i}]") for i, p in enumerate(raw))
        return ImageDocument(dim, u, points=pts)
    raw = data["cubes"]
    if not isinstance(raw, list) or not raw:
        raise DocumentError(f"{name}: cubes: expected a nonempty list")
    cubes = tuple(_cube(c, dim, f"{name}: cubes[{i}]") for i, c in enumerate(raw))
    holes_raw = data.get("holes", [])
    if not isinstance(holes_raw, list):
        raise DocumentError(f"{name}: holes: expected a list")
    holes = tuple(_cube(c, dim, f"{name}: holes[{i}]") for i, c in enumerate(holes_raw))
    doc = ImageDocument(dim, u, cubes=cubes, holes=holes)
    if not doc.point_set():
        raise DocumentError(f"{name}: holes remove every point of the image")
    return doc


def load_image_document(source: Union[str, Path]) -> ImageDocument:
    text, name = _read(source)
    return parse_image_document(_load_json(text, name), name)


def parse_point_set(text: str, dim: Optional[int] = None, name: str = "<points>") -> set:
    stripped = text.lstrip()
    if stripped[:1] in ("[", "{"):
        data = _load_json(text, name)
        if isinstance(data, dict):
            if "points" not in data:
                raise DocumentError(f"{name}: object has no 'points' field")
            data = data["points"]
        if not isinstance(data, list):
            raise DocumentError(f"{name}: expected a list of points")
        return {_int_vector(p, dim, f"{name}: points[{i}]") for i, p in enumerate(data)}
    out = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            p = tuple(int(tok) for tok in line.replace(",", " ").split())
        except ValueError:
            raise DocumentError(f"{name}: line {lineno}: expected integers, got {line!r}") from None
        if dim is not None and len(p) != dim:
            raise DocumentError(f"{name}: line {lineno}: expected {dim} coordinates, got {len(p)}")
        out.add(p)
    return out


def load_point_set(source: Union[str, Path], dim: Optional[int] = None) -> set:
    text, name = _read(source)
    return parse_point_set(text, dim, name)


def format_point_set(points, header: Optional[List[str]] = None) -> str:
    """Plain-text point list in canonical order; parse_point_set reads it back."""
    lines = [f"# {h}" for h in (header or [])]
    lines += [" ".join(str(c) for c in p) for p in sorted(points)]
    return "\n".join(lines) + "\n"


def load_decomposition(source: Union[str, Path], dim: int) -> CubeDecomposition:
    text, name = _read(source)
    data = _load_json(text, name)
    if isinstance(data, dict):
        if "cubes" not in data:
            raise DocumentError(f"{name}: object has no 'cubes' field")
        data = data["cubes"]
    if not isinstance(data, list) or not data:
        raise DocumentError(f"{name}: expected a nonempty list of cubes")
    return CubeDecomposition(tuple(_cube(c, dim, f"{name}: cubes[{i}]") for i, c in enumerate(data)))
