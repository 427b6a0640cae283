"""Tag-to-audio binding store with content-addressed file persistence.

A database maps RFID tag UIDs to audio clips.  On disk a database is a
directory:

    index.tsv        one line per binding, sorted ascending by uid:
                     <uid-hex>\\t<clip_id>\\t<duration_ms>\\t<label>
    <clip_id>.bin    raw payload bytes, one file per distinct clip

``clip_id`` is derived from the clip content (label + payload), so equal
content shares a single payload file and re-persisting an unchanged
database is byte-identical.  The index uses UTF-8 with LF line endings.

Concurrency contract: one writer at a time; readers may share the
directory with that writer.  Nothing here locks files.
"""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

UID_LENGTHS = (4, 7)
INDEX_NAME = "index.tsv"
PAYLOAD_SUFFIX = ".bin"
_CLIP_ID_LEN = 16
_LABEL_FORBIDDEN = ("\t", "\n", "\r")


class PersistenceError(RuntimeError):
    """Raised when the on-disk form of a database cannot be read or written."""


@dataclass(frozen=True, order=True)
class TagUid:
    """An RFID tag UID, 4 or 7 bytes. Canonical text form is lowercase hex."""

    value: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.value, bytes):
            raise TypeError("uid must be bytes")
        if len(self.value) not in UID_LENGTHS:
            raise ValueError(
                f"uid must be {UID_LENGTHS[0]} or {UID_LENGTHS[1]} bytes, got {len(self.value)}"
            )

    @property
    def hex(self) -> str:
        return self.value.hex()

    @classmethod
    def from_hex(cls, text: str) -> "TagUid":
        """Parse a hex UID string (case-insensitive, no separators)."""
        try:
            raw = bytes.fromhex(text.strip())
        except ValueError as exc:
            raise ValueError(f"not a hex uid: {text!r}") from exc
        return cls(raw)

    def __str__(self) -> str:
        return self.hex


def clip_id_for(label: str, payload: bytes) -> str:
    """Content address for a clip: 16 lowercase hex chars.

    The label is length-prefixed so (label, payload) pairs cannot collide
    by moving bytes across the boundary.
    """
    raw = label.encode("utf-8")
    h = hashlib.blake2b(digest_size=_CLIP_ID_LEN // 2)
    h.update(len(raw).to_bytes(4, "big"))
    h.update(raw)
    h.update(payload)
    return h.hexdigest()


@dataclass(frozen=True)
class AudioClip:
    """A stored recording. ``payload`` may be empty (silent capture)."""

    clip_id: str
    duration_ms: int
    label: str
    payload: bytes = b""

    def __post_init__(self) -> None:
        if len(self.clip_id) != _CLIP_ID_LEN or any(
            c not in "0123456789abcdef" for c in self.clip_id
        ):
            raise ValueError(f"clip_id must be {_CLIP_ID_LEN} lowercase hex chars")
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be positive")
        if any(c in self.label for c in _LABEL_FORBIDDEN):
            raise ValueError("label must not contain tab or newline characters")


def make_clip(label: str, payload: bytes = b"", duration_ms: int = 1000) -> AudioClip:
    """Build a clip with its content-derived id."""
    return AudioClip(
        clip_id=clip_id_for(label, payload),
        duration_ms=duration_ms,
        label=label,
        payload=payload,
    )


@dataclass(frozen=True)
class Binding:
    uid: TagUid
    clip: AudioClip


class TagDatabase:
    """In-memory uid -> clip map, optionally write-through to a directory.

    A database constructed with ``store_path`` keeps the directory in sync
    after every mutation (payloads written, index rewritten, unreferenced
    payloads deleted).  On a storage failure the in-memory state is left
    unchanged and :class:`PersistenceError` is raised.
    """

    def __init__(self, store_path: Path | str | None = None) -> None:
        self._bindings: dict[TagUid, AudioClip] = {}
        self.store_path: Path | None = Path(store_path) if store_path is not None else None

    def __len__(self) -> int:
        return len(self._bindings)

    def __contains__(self, uid: TagUid) -> bool:
        return uid in self._bindings

    def lookup(self, uid: TagUid) -> AudioClip | None:
        """Return the clip bound to ``uid``, or None."""
        return self._bindings.get(uid)

    def bindings(self) -> list[Binding]:
        """All bindings, sorted ascending by uid."""
        return [Binding(u, c) for u, c in sorted(self._bindings.items())]

    def bind(self, uid: TagUid, clip: AudioClip) -> None:
        """Bind ``uid`` to ``clip``, replacing any previous binding.

        The replaced clip's payload is removed from storage unless another
        binding still references the same content.

        Raises:
            PersistenceError: the store directory could not be updated;
                in-memory state is unchanged.
        """
        if not isinstance(uid, TagUid):
            raise TypeError("uid must be a TagUid")
        candidate = dict(self._bindings)
        candidate[uid] = clip
        self._commit(candidate)

    def remove(self, uid: TagUid) -> None:
        """Drop the binding for ``uid``. Removing an absent uid is a no-op."""
        if uid not in self._bindings:
            return
        candidate = dict(self._bindings)
        del candidate[uid]
        self._commit(candidate)

    def _commit(self, candidate: dict[TagUid, AudioClip]) -> None:
        if self.store_path is not None:
            _write_store(self.store_path, candidate)
        self._bindings = candidate

    def persist(self, path: Path | str) -> None:
        """Write the database to ``path`` and attach it as the store.

        The index is replaced atomically (temp file + rename); payload files
        not referenced by the new index are deleted.
        """
        target = Path(path)
        _write_store(target, self._bindings)
        self.store_path = target

    @classmethod
    def load(cls, path: Path | str) -> "TagDatabase":
        """Read a database directory written by :meth:`persist`.

        Raises:
            PersistenceError: missing index, malformed index line (reported
                with its 1-based line number), missing payload file (reported
                with its clip_id), or payload content not matching its id.
        """
        root = Path(path)
        index = root / INDEX_NAME
        try:
            text = index.read_text(encoding="utf-8")
        except FileNotFoundError as exc:
            raise PersistenceError(f"no {INDEX_NAME} in {root}") from exc
        except OSError as exc:
            raise PersistenceError(f"cannot read {index}: {exc}") from exc

        bindings: dict[TagUid, AudioClip] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line:
                raise PersistenceError(f"malformed index line {lineno}: empty line")
            parts = line.split("\t")
            if len(parts) != 4:
                raise PersistenceError(
                    f"malformed index line {lineno}: expected 4 tab-separated fields, got {len(parts)}"
                )
            uid_hex, clip_id, duration_text, label = parts
            try:
                uid = TagUid.from_hex(uid_hex)
                duration = int(duration_text)
                clip = AudioClip(clip_id=clip_id, duration_ms=duration, label=label)
            except ValueError as exc:
                raise PersistenceError(f"malformed index line {lineno}: {exc}") from exc
            if uid in bindings:
                raise PersistenceError(f"malformed index line {lineno}: duplicate uid {uid.hex}")

            payload_file = root / f"{clip_id}{PAYLOAD_SUFFIX}"
            try:
                payload = payload_file.read_bytes()
            except FileNotFoundError as exc:
                raise PersistenceError(f"missing payload file for clip_id {clip_id}") from exc
            except OSError as exc:
                raise PersistenceError(f"cannot read payload for clip_id {clip_id}: {exc}") from exc
            if clip_id_for(label, payload) != clip_id:
                raise PersistenceError(f"payload content does not match clip_id {clip_id}")
            bindings[uid] = AudioClip(
                clip_id=clip_id, duration_ms=duration, label=label, payload=payload
            )

        db = cls()
        db._bindings = bindings
        db.store_path = root
        return db


def render_index(bindings: dict[TagUid, AudioClip]) -> bytes:
    """Canonical index bytes: sorted ascending by uid, LF endings, UTF-8."""
    lines = [
        f"{uid.hex}\t{clip.clip_id}\t{clip.duration_ms}\t{clip.label}\n"
        for uid, clip in sorted(bindings.items())
    ]
    return "".join(lines).encode("utf-8")


def _write_store(root: Path, bindings: dict[TagUid, AudioClip]) -> None:
    """Bring directory ``root`` in sync with ``bindings``.

    Payload files are written before the index so a reader never sees an
    index entry whose payload is absent; stale payloads are removed last.
    """
    reachable = {clip.clip_id: clip for clip in bindings.values()}
    try:
        root.mkdir(parents=True, exist_ok=True)
        for clip_id, clip in sorted(reachable.items()):
            payload_file = root / f"{clip_id}{PAYLOAD_SUFFIX}"
            if not payload_file.exists():
                payload_file.write_bytes(clip.payload)
        tmp = root / f"{INDEX_NAME}.tmp"
        tmp.write_bytes(render_index(bindings))
        os.replace(tmp, root / INDEX_NAME)
        for stale in root.glob(f"*{PAYLOAD_SUFFIX}"):
            if stale.name[: -len(PAYLOAD_SUFFIX)] not in reachable:
                stale.unlink()
    except OSError as exc:
        raise PersistenceError(f"cannot write store at {root}: {exc}") from exc
