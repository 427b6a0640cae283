"""Synthetic participant: drives the device through the four trial protocols.

This is a data generator for exercising the pipeline end to end.  It
makes no claim to reproduce human statistics beyond the shape one would
expect: attempt times follow an exponential learning curve from ``t0_s``
down to a ``t_inf_s`` plateau, per-event noise is truncated-normal, and
placement errors are Bernoulli draws.

Every trial with the glove is realized as a genuine event script replayed
through :func:`glovesim.device.run_script`; the transcript's timestamps,
actions, and database effects all come from the real control loop.  The
tactile control condition of the comparison trial has no reader, so its
transcript carries times and errors but an empty event list.

Trial protocols:

    1   introduce all eight objects (scan, press, speak a label)
    2   move nine color disks into color-matched holes
    3   same board with polygon disks (glove condition of the comparison)
    4   walk the region ring, find the lettered object, deliver it
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, replace

from .device import (
    ButtonDown,
    DeviceConfig,
    Event,
    RecordingInput,
    StoreBinding,
    TagRead,
    Tick,
    run_script,
)
from .rfmodel import HandPose, RfParams, scan
from .scene import Region, Scene, SceneObject
from .tagdb import TagDatabase, make_clip
from .transcript import TrialTranscript

TEST_IDS = (1, 2, 3, 4)
_REACTION_MS = 1000
_MIN_TICK_MS = 1

# counterclockwise ring over the region grid (bottom row out, top row back)
_REGION_RING = (1, 2, 3, 4, 8, 7, 6, 5)


@dataclass(frozen=True)
class AgentParams:
    t0_s: float = 70.17
    t_inf_s: float = 27.87
    learn_rate: float = 0.35
    time_sd_s: float = 8.0
    p_error: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.t0_s >= self.t_inf_s > 0:
            raise ValueError("need t0_s >= t_inf_s > 0")
        if self.learn_rate < 0:
            raise ValueError("learn_rate must be >= 0")
        if self.time_sd_s < 0:
            raise ValueError("time_sd_s must be >= 0")
        if not 0.0 <= self.p_error <= 1.0:
            raise ValueError("p_error must be within [0, 1]")


def attempt_mean_s(attempt: int, params: AgentParams) -> float:
    """Expected time for 1-based ``attempt``: exponential decay to the plateau."""
    if attempt < 1:
        raise ValueError("attempt numbers are 1-based")
    import math

    return params.t_inf_s + (params.t0_s - params.t_inf_s) * math.exp(
        -params.learn_rate * (attempt - 1)
    )


def derive_seed(seed: int, test_id: int, participant_id: int) -> int:
    """Independent per-participant stream seed (stable across platforms)."""
    digest = hashlib.sha256(f"{seed}/{test_id}/{participant_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _sample_time_s(rng: random.Random, mean_s: float, sd_s: float, floor_s: float) -> float:
    """Truncated normal: resample until above the mechanical floor."""
    if sd_s == 0.0:
        return mean_s if mean_s > floor_s else floor_s + 0.001
    for _ in range(1000):
        value = rng.gauss(mean_s, sd_s)
        if value > floor_s:
            return value
    raise RuntimeError("time sampler failed to clear the floor; check parameters")


def _prebound_db(scene: Scene, clip_duration_ms: int = 1000) -> TagDatabase:
    db = TagDatabase()
    for uid, label in scene.labels_by_uid().items():
        db.bind(uid, make_clip(label, duration_ms=clip_duration_ms))
    return db


def _read_for(scene: Scene, obj_x: float, obj_y: float, rf: RfParams) -> TagRead:
    """Scan with the hand directly over a tag; the lock-on must be real."""
    result = scan(HandPose(obj_x, obj_y, 0.0), scene.tag_placements(), rf)
    if result is None:
        raise RuntimeError("agent positioned over a tag but nothing read")
    return TagRead(result.uid, latency_ms=result.latency_ms)


def run_test(
    test_id: int,
    params: AgentParams,
    scene: Scene,
    cfg: DeviceConfig = DeviceConfig(),
    rf: RfParams = RfParams(),
) -> TrialTranscript:
    """One synthetic participant running trial ``test_id`` on ``scene``."""
    if test_id not in TEST_IDS:
        raise ValueError(f"test_id must be one of {TEST_IDS}, got {test_id}")
    rng = random.Random(params.seed)
    if test_id == 1:
        return _run_introduction(params, scene, cfg, rf, rng)
    if test_id in (2, 3):
        return _run_placement(test_id, params, scene, cfg, rf, rng)
    return _run_navigation(params, scene, cfg, rf, rng)


# --- trial 1: introduce all objects -------------------------------------------


def _run_introduction(
    params: AgentParams, scene: Scene, cfg: DeviceConfig, rf: RfParams, rng: random.Random
) -> TrialTranscript:
    tagged = [o for o in scene.objects if o.tag is not None]
    if not tagged:
        raise ValueError("introduction trial needs tagged objects")
    events: list[Event] = []
    times: list[float] = []
    for attempt, obj in enumerate(tagged, start=1):
        read = _read_for(scene, obj.x_mm, obj.y_mm, rf)
        overhead_ms = read.latency_ms + _REACTION_MS + cfg.record_duration_ms
        floor_s = overhead_ms / 1000.0 + 0.1
        total_s = _sample_time_s(rng, attempt_mean_s(attempt, params), params.time_sd_s, floor_s)
        search_ms = max(_MIN_TICK_MS, round(total_s * 1000.0 - overhead_ms))
        events += [
            Tick(search_ms),
            read,
            Tick(_REACTION_MS),
            ButtonDown(),
            RecordingInput(label=obj.name),
            Tick(cfg.record_duration_ms),
        ]
        times.append((search_ms + overhead_ms) / 1000.0)

    transcript, _ = run_script(events, cfg, TagDatabase())
    stored = sum(
        1 for e in transcript.entries for a in e.actions if isinstance(a, StoreBinding)
    )
    transcript.test_id = 1
    transcript.per_attempt_times_s = times
    transcript.errors = 0
    transcript.completed = stored == len(tagged)
    return transcript


# --- trials 2/3: disk placement ------------------------------------------------


def _placement_pairs(test_id: int, scene: Scene) -> list[tuple[SceneObject, SceneObject]]:
    """(disk, its correct hole) pairs for the placement board."""
    holes = [o for o in scene.objects if o.shape == "hole"]
    disks = [o for o in scene.objects if o.shape != "hole" and o.tag is not None]
    if not holes or not disks:
        raise ValueError("placement trial needs holes and disks")
    pairs = []
    for disk in disks:
        if test_id == 2:
            match = [h for h in holes if h.color == disk.color]
        else:
            sides = disk.shape.rsplit("-", 1)[-1]
            match = [h for h in holes if h.name.startswith(f"{sides}-")]
        if len(match) != 1:
            raise ValueError(f"no unique hole for disk {disk.object_id}")
        pairs.append((disk, match[0]))
    return pairs


def _run_placement(
    test_id: int,
    params: AgentParams,
    scene: Scene,
    cfg: DeviceConfig,
    rf: RfParams,
    rng: random.Random,
) -> TrialTranscript:
    pairs = _placement_pairs(test_id, scene)
    rng.shuffle(pairs)
    holes = [o for o in scene.objects if o.shape == "hole"]
    p_err = 0.0 if test_id == 2 else params.p_error  # color board: glove makes it unmissable

    events: list[Event] = []
    times: list[float] = []
    wrong = 0
    for disk, hole in pairs:
        target = hole
        if rng.random() < p_err:
            target = rng.choice([h for h in holes if h is not hole])
            wrong += 1
        read_disk = _read_for(scene, disk.x_mm, disk.y_mm, rf)
        read_hole = _read_for(scene, target.x_mm, target.y_mm, rf)
        overhead_ms = read_disk.latency_ms + read_hole.latency_ms
        total_s = _sample_time_s(
            rng, params.t_inf_s / 2.0, params.time_sd_s / 2.0, overhead_ms / 1000.0 + 1.0
        )
        budget = round(total_s * 1000.0 - overhead_ms)
        search_ms = max(_MIN_TICK_MS, round(budget * 0.5))
        carry_ms = max(_MIN_TICK_MS, round(budget * 0.3))
        settle_ms = max(_MIN_TICK_MS, budget - search_ms - carry_ms)
        events += [
            Tick(search_ms),
            read_disk,
            Tick(carry_ms),
            read_hole,
            Tick(settle_ms),
        ]
        times.append((search_ms + carry_ms + settle_ms + overhead_ms) / 1000.0)

    transcript, _ = run_script(events, cfg, _prebound_db(scene))
    transcript.test_id = test_id
    transcript.per_attempt_times_s = times
    transcript.errors = wrong
    transcript.completed = True
    transcript.aux = {"correct": float(len(pairs) - wrong)}
    if test_id == 3:
        transcript.aux["glove"] = 1.0
    return transcript


def run_placement_baseline(params: AgentParams, scene: Scene) -> TrialTranscript:
    """Tactile-only control for the comparison trial: no reader, no events.

    Times and errors are sampled from the same generator family with the
    caller-supplied (slower, less accurate) parameter set.
    """
    pairs = _placement_pairs(3, scene)
    rng = random.Random(params.seed)
    times = [
        _sample_time_s(rng, params.t_inf_s, params.time_sd_s, 1.0) for _ in pairs
    ]
    wrong = sum(1 for _ in pairs if rng.random() < params.p_error)
    transcript = TrialTranscript(
        test_id=3,
        per_attempt_times_s=times,
        errors=wrong,
        completed=True,
        aux={"correct": float(len(pairs) - wrong), "glove": 0.0},
    )
    return transcript


# --- trial 4: region navigation -------------------------------------------------


def _region_objects(scene: Scene, region: Region) -> list[SceneObject]:
    return [o for o in scene.objects if region.bounds.contains(o.x_mm, o.y_mm)]


def _run_navigation(
    params: AgentParams, scene: Scene, cfg: DeviceConfig, rf: RfParams, rng: random.Random
) -> TrialTranscript:
    if not scene.regions:
        raise ValueError("navigation trial needs regions")
    ring = [r for rid in _REGION_RING for r in scene.regions if r.region_id == rid]
    if len(ring) != len(scene.regions):
        raise ValueError("navigation trial needs the full region ring")

    with_a = [r for r in ring if any(o.name == "object A" for o in _region_objects(scene, r))]
    if not with_a:
        raise ValueError("no region holds object A")
    origin = rng.choice(with_a)
    destination = rng.choice([r for r in ring if r is not origin])
    position = rng.randrange(len(ring))

    events: list[Event] = []
    clock_ms = 0.0

    def walk_step_and_scan(region: Region) -> None:
        nonlocal clock_ms
        step_s = _sample_time_s(rng, params.t_inf_s / 4.0, params.time_sd_s / 4.0, 0.5)
        cx, cy = region.bounds.center
        read = _read_for(scene, cx, cy, rf)
        dt = max(_MIN_TICK_MS, round(step_s * 1000.0 - read.latency_ms))
        events.append(Tick(dt))
        events.append(read)
        clock_ms += dt + read.latency_ms

    # leg one: ring walk until the origin region's tag is read
    n1 = 0
    while True:
        region = ring[position]
        walk_step_and_scan(region)
        n1 += 1
        if region is origin:
            break
        position = (position + 1) % len(ring)

    # inside the origin region: check disks until object A is in hand
    disks = _region_objects(scene, origin)
    rng.shuffle(disks)
    for disk in disks:
        check_s = _sample_time_s(rng, 2.0, 0.5, 0.3)
        read = _read_for(scene, disk.x_mm, disk.y_mm, rf)
        dt = max(_MIN_TICK_MS, round(check_s * 1000.0 - read.latency_ms))
        events.append(Tick(dt))
        events.append(read)
        clock_ms += dt + read.latency_ms
        if disk.name == "object A":
            break
    t1_s = clock_ms / 1000.0

    # leg two: carry on around the ring to the destination
    n2 = 0
    while True:
        position = (position + 1) % len(ring)
        region = ring[position]
        walk_step_and_scan(region)
        n2 += 1
        if region is destination:
            break

    settle_s = _sample_time_s(rng, 2.0, 0.5, 0.3)
    events.append(Tick(max(_MIN_TICK_MS, round(settle_s * 1000.0))))
    clock_ms += max(_MIN_TICK_MS, round(settle_s * 1000.0))
    total_s = clock_ms / 1000.0

    transcript, _ = run_script(events, cfg, _prebound_db(scene))
    transcript.test_id = 4
    transcript.per_attempt_times_s = [total_s]
    transcript.errors = 0
    transcript.completed = True
    transcript.aux = {
        "n1": float(n1),
        "n2": float(n2),
        "t1_s": t1_s,
        "tT_s": total_s,
    }
    return transcript


# --- cohorts --------------------------------------------------------------------


def run_cohort(
    test_id: int,
    n: int,
    params: AgentParams,
    scene: Scene,
    cfg: DeviceConfig = DeviceConfig(),
    rf: RfParams = RfParams(),
) -> list[TrialTranscript]:
    """Independent participants 1..n, each with a derived seed."""
    if n < 1:
        raise ValueError("cohort needs at least one participant")
    out = []
    for pid in range(1, n + 1):
        p = replace(params, seed=derive_seed(params.seed, test_id, pid))
        transcript = run_test(test_id, p, scene, cfg, rf)
        transcript.participant_id = pid
        out.append(transcript)
    return out


def run_baseline_cohort(n: int, params: AgentParams, scene: Scene) -> list[TrialTranscript]:
    """Tactile-only control cohort for the comparison trial."""
    if n < 1:
        raise ValueError("cohort needs at least one participant")
    out = []
    for pid in range(1, n + 1):
        p = replace(params, seed=derive_seed(params.seed, 30, pid))
        transcript = run_placement_baseline(p, scene)
        transcript.participant_id = pid
        out.append(transcript)
    return out
