"""Geometric 2D model of a short-range tag reader worn on a hand.

The reader sits at a pose (position + facing) above a table plane.  A tag
is readable when it is not mounted on metal, lies within ``max_range_mm``
of the reader, and is within ``max_half_angle_deg`` of the facing
direction.  Among readable tags the reader locks onto the one best
aligned with the antenna boresight; alignment also sets scan latency and
effective antenna gain:

    latency_ms = base_latency_ms * (1 + |offset| / max_half_angle_deg)
    gain_dbi   = peak_gain_dbi   * (1 - |offset| / 90)

Distances in millimetres, angles in degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .tagdb import TagUid


class Material(str, Enum):
    """Mounting surface under a tag. Metal detunes the antenna completely."""

    PLASTIC = "plastic"
    FABRIC = "fabric"
    WOOD = "wood"
    PAPER = "paper"
    METAL = "metal"


@dataclass(frozen=True)
class RfParams:
    max_range_mm: float = 50.0
    max_half_angle_deg: float = 60.0
    peak_gain_dbi: float = 5.5
    base_latency_ms: float = 100.0

    def __post_init__(self) -> None:
        if self.max_range_mm <= 0:
            raise ValueError("max_range_mm must be positive")
        if not 0 < self.max_half_angle_deg <= 90:
            raise ValueError("max_half_angle_deg must be in (0, 90]")
        if self.peak_gain_dbi <= 0:
            raise ValueError("peak_gain_dbi must be positive")
        if self.base_latency_ms <= 0:
            raise ValueError("base_latency_ms must be positive")


@dataclass(frozen=True)
class HandPose:
    """Reader position and facing. ``facing_deg`` is normalized to [0, 360)."""

    x_mm: float
    y_mm: float
    facing_deg: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "facing_deg", self.facing_deg % 360.0)


@dataclass(frozen=True)
class TagPlacement:
    uid: TagUid
    x_mm: float
    y_mm: float
    mount: Material
    diameter_mm: float = 18.0

    def __post_init__(self) -> None:
        if self.diameter_mm <= 0:
            raise ValueError("diameter_mm must be positive")


@dataclass(frozen=True)
class ReadResult:
    """One successful read. ``offset_deg`` is signed, positive to the left."""

    uid: TagUid
    distance_mm: float
    offset_deg: float
    latency_ms: float
    gain_dbi: float


def offset_to(pose: HandPose, x_mm: float, y_mm: float) -> float:
    """Signed angle from the pose's facing to the point, in [-180, 180).

    A point exactly at the pose is defined to be on boresight (offset 0).
    """
    dx = x_mm - pose.x_mm
    dy = y_mm - pose.y_mm
    if dx == 0 and dy == 0:
        return 0.0
    bearing = math.degrees(math.atan2(dy, dx))
    return (bearing - pose.facing_deg + 180.0) % 360.0 - 180.0


def distance_to(pose: HandPose, x_mm: float, y_mm: float) -> float:
    return math.hypot(x_mm - pose.x_mm, y_mm - pose.y_mm)


def latency_at(offset_deg: float, params: RfParams) -> float:
    """Scan latency for an alignment offset; grows linearly off boresight."""
    return params.base_latency_ms * (1.0 + abs(offset_deg) / params.max_half_angle_deg)


def gain_at(offset_deg: float, params: RfParams) -> float:
    """Effective antenna gain for an alignment offset."""
    return params.peak_gain_dbi * (1.0 - abs(offset_deg) / 90.0)


def scan(
    pose: HandPose, tags: list[TagPlacement], params: RfParams = RfParams()
) -> ReadResult | None:
    """Attempt one read. Returns the locked-on tag or None.

    Candidates must be non-metal, within range, and within the antenna
    cone.  The winner minimizes (|offset|, distance, uid); the uid
    tie-break makes the result total and deterministic.
    """
    best: tuple[float, float, bytes] | None = None
    best_read: ReadResult | None = None
    for tag in tags:
        if tag.mount is Material.METAL:
            continue
        d = distance_to(pose, tag.x_mm, tag.y_mm)
        if d > params.max_range_mm:
            continue
        off = offset_to(pose, tag.x_mm, tag.y_mm)
        if abs(off) > params.max_half_angle_deg:
            continue
        key = (abs(off), d, tag.uid.value)
        if best is None or key < best:
            best = key
            best_read = ReadResult(
                uid=tag.uid,
                distance_mm=d,
                offset_deg=off,
                latency_ms=latency_at(off, params),
                gain_dbi=gain_at(off, params),
            )
    return best_read


def scan_latency_profile(
    offsets_deg: list[float], params: RfParams = RfParams()
) -> list[float]:
    """Latencies for a sweep of alignment offsets.

    Raises:
        ValueError: an offset falls outside [0, max_half_angle_deg].
    """
    out: list[float] = []
    for off in offsets_deg:
        if not 0 <= off <= params.max_half_angle_deg:
            raise ValueError(
                f"offset {off} outside [0, {params.max_half_angle_deg}] deg"
            )
        out.append(latency_at(off, params))
    return out
