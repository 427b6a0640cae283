"""Table-top scenes: tagged objects, regions, and the four trial setups.

Setup layouts (millimetre units, y grows away from the participant):

    1   eight everyday objects, each tagged, spread over the table
    2   a three-hole box (color-coded holes) plus nine color disks
    3   the same box with 12/14/16-sided holes plus nine polygon disks
    4   eight table regions, each tagged, holding 2-3 lettered disks

Scenes serialize to a single JSON document with top-level keys
``extent``, ``objects``, ``regions``.  Loading validates the schema and
reports problems by field path (for example ``objects[3].material``).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .rfmodel import Material, TagPlacement
from .tagdb import TagUid

SETUP_NUMBERS = (1, 2, 3, 4)
REGION_COUNT = 8


class SceneError(ValueError):
    """A scenario document violates the scene schema."""


@dataclass(frozen=True)
class Rect:
    x_min_mm: float
    y_min_mm: float
    x_max_mm: float
    y_max_mm: float

    def __post_init__(self) -> None:
        for name in ("x_min_mm", "y_min_mm", "x_max_mm", "y_max_mm"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.x_max_mm <= self.x_min_mm or self.y_max_mm <= self.y_min_mm:
            raise ValueError("rect must have positive extent")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min_mm <= x <= self.x_max_mm and self.y_min_mm <= y <= self.y_max_mm

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x_min_mm + self.x_max_mm) / 2, (self.y_min_mm + self.y_max_mm) / 2)


@dataclass(frozen=True)
class SceneObject:
    object_id: str
    name: str
    shape: str
    color: str
    material: Material
    x_mm: float
    y_mm: float
    tag: TagUid | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_mm", float(self.x_mm))
        object.__setattr__(self, "y_mm", float(self.y_mm))


@dataclass(frozen=True)
class Region:
    region_id: int
    bounds: Rect
    tag: TagUid

    def __post_init__(self) -> None:
        if not 1 <= self.region_id <= REGION_COUNT:
            raise ValueError(f"region_id must be 1..{REGION_COUNT}")


@dataclass
class Scene:
    extent: Rect
    objects: list[SceneObject] = field(default_factory=list)
    regions: list[Region] = field(default_factory=list)
    setup: int | None = None

    def tag_placements(self) -> list[TagPlacement]:
        """Every physical tag: tagged objects plus region tags (at centers)."""
        placements = [
            TagPlacement(uid=o.tag, x_mm=o.x_mm, y_mm=o.y_mm, mount=o.material)
            for o in self.objects
            if o.tag is not None
        ]
        for r in self.regions:
            cx, cy = r.bounds.center
            placements.append(TagPlacement(uid=r.tag, x_mm=cx, y_mm=cy, mount=Material.PLASTIC))
        return placements

    def labels_by_uid(self) -> dict[TagUid, str]:
        """Spoken label for each tag: object names, 'region N' for regions."""
        labels = {o.tag: o.name for o in self.objects if o.tag is not None}
        labels.update({r.tag: f"region {r.region_id}" for r in self.regions})
        return labels

    def validate(self) -> None:
        seen: set[TagUid] = set()
        for i, obj in enumerate(self.objects):
            if obj.tag is not None:
                if obj.tag in seen:
                    raise SceneError(f"objects[{i}].tag: duplicate tag uid {obj.tag.hex}")
                seen.add(obj.tag)
        for i, region in enumerate(self.regions):
            if region.tag in seen:
                raise SceneError(f"regions[{i}].tag: duplicate tag uid {region.tag.hex}")
            seen.add(region.tag)


def setup_uid(setup: int, index: int) -> TagUid:
    """Stable per-setup tag uids; placements vary with the seed, uids do not."""
    return TagUid(bytes([0xA0 + setup, 0x00, index >> 8, index & 0xFF]))


def build_setup(n: int, seed: int = 0) -> Scene:
    """Build trial setup ``n`` (1..4) with seed-fixed random placements."""
    if n not in SETUP_NUMBERS:
        raise ValueError(f"setup must be one of {SETUP_NUMBERS}, got {n}")
    rng = random.Random(f"setup/{n}/{seed}")
    builder = {1: _setup_1, 2: _setup_2, 3: _setup_3, 4: _setup_4}[n]
    scene = builder(rng)
    scene.setup = n
    scene.validate()
    return scene


_SETUP1_CATALOG = [
    ("socks", "soft", "white", Material.FABRIC),
    ("chocolate box", "box", "brown", Material.PAPER),
    ("yellow disk", "disk", "yellow", Material.PLASTIC),
    ("red disk", "disk", "red", Material.PLASTIC),
    ("blue power bank", "slab", "blue", Material.PLASTIC),
    ("green power bank", "slab", "green", Material.PLASTIC),
    ("notebook", "book", "gray", Material.PAPER),
    ("water bottle", "bottle", "clear", Material.PLASTIC),
]


def _jitter(rng: random.Random, cx: float, cy: float, spread: float) -> tuple[float, float]:
    return cx + rng.uniform(-spread, spread), cy + rng.uniform(-spread, spread)


def _setup_1(rng: random.Random) -> Scene:
    extent = Rect(0, 0, 600, 600)
    cells = [(x, y) for y in (100, 300, 500) for x in (100, 300, 500)]
    rng.shuffle(cells)
    objects = []
    for i, (name, shape, color, material) in enumerate(_SETUP1_CATALOG):
        x, y = _jitter(rng, *cells[i], spread=60)
        objects.append(
            SceneObject(
                object_id=f"obj-{i + 1}",
                name=name,
                shape=shape,
                color=color,
                material=material,
                x_mm=x,
                y_mm=y,
                tag=setup_uid(1, i),
            )
        )
    return Scene(extent=extent, objects=objects)


_HOLE_COLORS = ("red", "green", "blue")
_POLY_SIDES = (12, 14, 16)


def _box_scene(rng: random.Random, setup_no: int, hole_names: list[str],
               hole_colors: list[str], disk_names: list[str], disk_colors: list[str],
               disk_shapes: list[str]) -> Scene:
    """Common geometry of setups 2/3: 3 holes along the top, 9 disks below."""
    extent = Rect(0, 0, 600, 600)
    objects = []
    for i, (name, color) in enumerate(zip(hole_names, hole_colors)):
        objects.append(
            SceneObject(
                object_id=f"hole-{i + 1}",
                name=name,
                shape="hole",
                color=color,
                material=Material.PLASTIC,
                x_mm=150.0 + 150.0 * i,
                y_mm=520.0,
                tag=setup_uid(setup_no, i),
            )
        )
    cells = [(x, y) for y in (120, 260) for x in (90, 190, 290, 390, 490)]
    rng.shuffle(cells)
    for j, (name, color, shape) in enumerate(zip(disk_names, disk_colors, disk_shapes)):
        x, y = _jitter(rng, *cells[j], spread=30)
        objects.append(
            SceneObject(
                object_id=f"disk-{j + 1}",
                name=name,
                shape=shape,
                color=color,
                material=Material.PLASTIC,
                x_mm=x,
                y_mm=y,
                tag=setup_uid(setup_no, 3 + j),
            )
        )
    return Scene(extent=extent, objects=objects)


def _setup_2(rng: random.Random) -> Scene:
    hole_names = [f"{c} hole" for c in _HOLE_COLORS]
    disk_names = [f"{c} disk {k + 1}" for c in _HOLE_COLORS for k in range(3)]
    disk_colors = [c for c in _HOLE_COLORS for _ in range(3)]
    return _box_scene(
        rng, 2, hole_names, list(_HOLE_COLORS), disk_names, disk_colors, ["disk"] * 9
    )


def _setup_3(rng: random.Random) -> Scene:
    hole_names = [f"{s}-sided hole" for s in _POLY_SIDES]
    disk_names = [f"{s}-sided disk {k + 1}" for s in _POLY_SIDES for k in range(3)]
    disk_shapes = [f"polygon-{s}" for s in _POLY_SIDES for _ in range(3)]
    return _box_scene(
        rng, 3, hole_names, ["white"] * 3, disk_names, ["white"] * 9, disk_shapes
    )


_LETTER_COLORS = {"A": "red", "B": "green", "C": "blue"}


def _setup_4(rng: random.Random) -> Scene:
    extent = Rect(0, 0, 1200, 600)
    regions = []
    for i in range(REGION_COUNT):
        col, row = i % 4, i // 4
        bounds = Rect(300.0 * col, 300.0 * row, 300.0 * (col + 1), 300.0 * (row + 1))
        regions.append(Region(region_id=i + 1, bounds=bounds, tag=setup_uid(4, i)))

    # each region holds 2-3 disks with distinct letters; at least one A overall
    while True:
        letter_sets = [rng.sample(["A", "B", "C"], rng.choice([2, 3])) for _ in regions]
        if any("A" in letters for letters in letter_sets):
            break

    objects = []
    tag_index = REGION_COUNT
    for region, letters in zip(regions, letter_sets):
        cx, cy = region.bounds.center
        for k, letter in enumerate(sorted(letters)):
            x, y = _jitter(rng, cx - 60 + 60 * k, cy, spread=25)
            objects.append(
                SceneObject(
                    object_id=f"r{region.region_id}-{letter}",
                    name=f"object {letter}",
                    shape="disk",
                    color=_LETTER_COLORS[letter],
                    material=Material.PLASTIC,
                    x_mm=x,
                    y_mm=y,
                    tag=setup_uid(4, tag_index),
                )
            )
            tag_index += 1
    return Scene(extent=extent, objects=objects, regions=regions)


# --- JSON form ---------------------------------------------------------------


def scene_to_dict(scene: Scene) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "extent": _rect_to_dict(scene.extent),
        "objects": [
            {
                "object_id": o.object_id,
                "name": o.name,
                "shape": o.shape,
                "color": o.color,
                "material": o.material.value,
                "x_mm": o.x_mm,
                "y_mm": o.y_mm,
                "tag": o.tag.hex if o.tag else None,
            }
            for o in scene.objects
        ],
        "regions": [
            {
                "region_id": r.region_id,
                "bounds": _rect_to_dict(r.bounds),
                "tag": r.tag.hex,
            }
            for r in scene.regions
        ],
    }
    if scene.setup is not None:
        doc["setup"] = scene.setup
    return doc


def scene_to_json(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_scene(scene: Scene, path: Path | str) -> None:
    Path(path).write_text(scene_to_json(scene), encoding="utf-8")


def _rect_to_dict(rect: Rect) -> dict[str, float]:
    return {
        "x_min_mm": rect.x_min_mm,
        "y_min_mm": rect.y_min_mm,
        "x_max_mm": rect.x_max_mm,
        "y_max_mm": rect.y_max_mm,
    }


def _need(doc: dict, key: str, kind, path: str):
    if key not in doc:
        raise SceneError(f"{path}.{key}: missing")
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SceneError(f"{path}.{key}: expected a number, got {value!r}")
        return float(value)
    if not isinstance(value, kind):
        raise SceneError(f"{path}.{key}: expected {kind.__name__}, got {value!r}")
    return value


def _rect_from_dict(doc: Any, path: str) -> Rect:
    if not isinstance(doc, dict):
        raise SceneError(f"{path}: expected an object")
    try:
        return Rect(
            x_min_mm=_need(doc, "x_min_mm", float, path),
            y_min_mm=_need(doc, "y_min_mm", float, path),
            x_max_mm=_need(doc, "x_max_mm", float, path),
            y_max_mm=_need(doc, "y_max_mm", float, path),
        )
    except ValueError as exc:
        if isinstance(exc, SceneError):
            raise
        raise SceneError(f"{path}: {exc}") from exc


def scene_from_dict(doc: Any) -> Scene:
    """Parse and validate a scenario document.

    Raises:
        SceneError: schema violation, named by field path; duplicate tag
            uids and unknown material strings are rejected.
    """
    if not isinstance(doc, dict):
        raise SceneError("scenario root must be a JSON object")
    for key in ("extent", "objects", "regions"):
        if key not in doc:
            raise SceneError(f"{key}: missing")
    extent = _rect_from_dict(doc["extent"], "extent")
    if not isinstance(doc["objects"], list):
        raise SceneError("objects: expected a list")
    if not isinstance(doc["regions"], list):
        raise SceneError("regions: expected a list")

    objects = []
    for i, entry in enumerate(doc["objects"]):
        path = f"objects[{i}]"
        if not isinstance(entry, dict):
            raise SceneError(f"{path}: expected an object")
        material_text = _need(entry, "material", str, path)
        try:
            material = Material(material_text)
        except ValueError:
            raise SceneError(f"{path}.material: unknown material {material_text!r}") from None
        tag_text = entry.get("tag")
        tag = None
        if tag_text is not None:
            if not isinstance(tag_text, str):
                raise SceneError(f"{path}.tag: expected hex string or null")
            try:
                tag = TagUid.from_hex(tag_text)
            except ValueError as exc:
                raise SceneError(f"{path}.tag: {exc}") from None
        objects.append(
            SceneObject(
                object_id=_need(entry, "object_id", str, path),
                name=_need(entry, "name", str, path),
                shape=_need(entry, "shape", str, path),
                color=_need(entry, "color", str, path),
                material=material,
                x_mm=_need(entry, "x_mm", float, path),
                y_mm=_need(entry, "y_mm", float, path),
                tag=tag,
            )
        )

    regions = []
    for i, entry in enumerate(doc["regions"]):
        path = f"regions[{i}]"
        if not isinstance(entry, dict):
            raise SceneError(f"{path}: expected an object")
        region_id = _need(entry, "region_id", int, path)
        bounds = _rect_from_dict(entry.get("bounds"), f"{path}.bounds")
        tag_text = _need(entry, "tag", str, path)
        try:
            tag = TagUid.from_hex(tag_text)
        except ValueError as exc:
            raise SceneError(f"{path}.tag: {exc}") from None
        try:
            regions.append(Region(region_id=region_id, bounds=bounds, tag=tag))
        except ValueError as exc:
            raise SceneError(f"{path}.region_id: {exc}") from None

    setup = doc.get("setup")
    if setup is not None and setup not in SETUP_NUMBERS:
        raise SceneError(f"setup: must be one of {SETUP_NUMBERS}")
    scene = Scene(extent=extent, objects=objects, regions=regions, setup=setup)
    scene.validate()
    return scene


def load_scene(path: Path | str) -> Scene:
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SceneError(f"not valid JSON: {exc}") from exc
    return scene_from_dict(doc)
