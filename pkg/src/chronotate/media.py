"""Feature-stream ingestion, shot-boundary detection, event timelines.

Pixel-level analysis happens out of process: this module consumes
per-frame histogram signatures (CSV, see docs/file-formats.md) and
line-delimited event files produced by external detectors (OCR, text
tracking, template matching). The built-in shot detector segments a
feature stream by normalized L1 histogram distance with a refractory
period, and `merge_timeline` folds everything into the single ordered
event sequence the rule engine evaluates.

Frame indices convert to milliseconds via exact rational arithmetic:
frame f of an fps-rate stream starts at floor(f * 1000 / fps) ms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

from .temporal import Interval, frame_to_ms

AttrValue = Union[str, int, float]

# Fields consumed by the event-file schema itself; not free attributes.
_EVENT_FIELDS = {"type", "start_ms", "end_ms", "confidence", "v"}


class FormatError(ValueError):
    """Malformed feature or event file; `row` is the 1-based line number."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row
        self.detail = message


class NonContiguousFrames(FormatError):
    def __init__(self, expected: int, found: int, row: int):
        super().__init__(row, f"expected frame {expected}, found {found}")
        self.expected = expected
        self.found = found


class InvalidInterval(FormatError):
    def __init__(self, row: int, start_ms: int, end_ms: int):
        super().__init__(row, f"invalid interval [{start_ms}, {end_ms}): end must exceed start")


class EmptyStream(ValueError):
    def __init__(self) -> None:
        super().__init__("feature stream contains no frames")


@dataclass(frozen=True)
class FrameSignature:
    frame: int
    histogram: tuple[int, ...]


@dataclass(frozen=True)
class FeatureStream:
    """Contiguous per-frame signatures sharing one fps and bin count."""

    fps: Fraction
    bins: int
    signatures: tuple[FrameSignature, ...]

    @property
    def frame_count(self) -> int:
        return len(self.signatures)

    def frame_ms(self, frame: int) -> int:
        return frame_to_ms(frame, self.fps)

    @property
    def duration_ms(self) -> int:
        return self.frame_ms(self.frame_count)


@dataclass(frozen=True)
class Event:
    """A typed, time-intervaled detector output on the media timeline.

    `event_id` is assigned by merge_timeline (positional, deterministic)
    and is identity metadata: it does not participate in equality.
    """

    event_type: str
    interval: Interval
    confidence: float
    attributes: tuple[tuple[str, AttrValue], ...] = ()
    event_id: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")
        for key, value in self.attributes:
            if type(value) not in (str, int, float):
                raise ValueError(f"attribute {key!r} must be a string, int or decimal")

    @classmethod
    def of(
        cls,
        event_type: str,
        start_ms: int,
        end_ms: int,
        confidence: float = 1.0,
        attributes: dict[str, AttrValue] | None = None,
        event_id: str | None = None,
    ) -> "Event":
        attrs = tuple(sorted((attributes or {}).items()))
        return cls(event_type, Interval.of(start_ms, end_ms), float(confidence), attrs, event_id)

    @property
    def start_ms(self) -> int:
        return self.interval.start_ms

    @property
    def end_ms(self) -> int:
        return self.interval.end_ms

    def attr(self, key: str) -> AttrValue | None:
        for k, v in self.attributes:
            if k == key:
                return v
        return None

    @property
    def attrs_dict(self) -> dict[str, AttrValue]:
        return dict(self.attributes)


def ingest_features(path: str | Path) -> FeatureStream:
    """Load a feature-stream CSV, validating shape and frame contiguity."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise FormatError(1, "missing header row")
    header = lines[0].strip()
    parts = header.split(",")
    if len(parts) != 2 or not parts[0].startswith("fps=") or not parts[1].startswith("bins="):
        raise FormatError(1, f"expected header 'fps=<num>/<den>,bins=<k>', found {header!r}")
    try:
        num_str, _, den_str = parts[0][len("fps="):].partition("/")
        fps = Fraction(int(num_str), int(den_str))
        bins = int(parts[1][len("bins="):])
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(1, f"malformed header: {exc}") from None
    if fps <= 0:
        raise FormatError(1, "fps must be positive")
    if fps > 1000:
        raise FormatError(1, "fps above 1000 cannot be represented on a millisecond timeline")
    if bins < 1:
        raise FormatError(1, "bin count must be at least 1")

    signatures = []
    expected_frame = 0
    for row_number, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = line.split(",")
        if len(cells) != bins + 1:
            raise FormatError(row_number, f"expected {bins + 1} columns, found {len(cells)}")
        try:
            frame = int(cells[0])
            counts = tuple(int(c) for c in cells[1:])
        except ValueError as exc:
            raise FormatError(row_number, f"non-integer cell: {exc}") from None
        if frame != expected_frame:
            raise NonContiguousFrames(expected_frame, frame, row_number)
        if any(c < 0 for c in counts):
            raise FormatError(row_number, "histogram counts must be non-negative")
        signatures.append(FrameSignature(frame, counts))
        expected_frame += 1
    return FeatureStream(fps, bins, tuple(signatures))


def histogram_distance(a: Sequence[int], b: Sequence[int]) -> Fraction:
    """Normalized L1 distance sum(|a-b|) / (2 * sum(a)), exact.

    An all-zero reference histogram has no mass to normalize by; the
    distance is 0 against another all-zero frame and 1 otherwise.
    """
    num = sum(abs(x - y) for x, y in zip(a, b))
    den = 2 * sum(a)
    if den == 0:
        return Fraction(0) if num == 0 else Fraction(1)
    return Fraction(num, den)


def detect_shots(
    stream: FeatureStream,
    threshold: float,
    min_shot_frames: int,
    stream_index: int = 0,
) -> list[Event]:
    """Segment a stream into shots tiling [0, duration).

    A cut falls between frames f and f+1 when the normalized histogram
    distance exceeds `threshold` and the previous cut (or the start of
    the stream) is at least `min_shot_frames` frames back, so every shot
    except possibly the last spans at least that many frames.
    """
    if stream.frame_count == 0:
        raise EmptyStream()
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    if min_shot_frames < 1:
        raise ValueError("min_shot_frames must be at least 1")

    boundaries = [0]
    for f in range(stream.frame_count - 1):
        d = histogram_distance(
            stream.signatures[f].histogram, stream.signatures[f + 1].histogram
        )
        if d > threshold and (f + 1) - boundaries[-1] >= min_shot_frames:
            boundaries.append(f + 1)
    boundaries.append(stream.frame_count)

    shots = []
    for index, (first, last) in enumerate(zip(boundaries, boundaries[1:])):
        shots.append(Event.of(
            "shot",
            stream.frame_ms(first),
            stream.frame_ms(last),
            confidence=1.0,
            attributes={"index": index, "stream": stream_index},
        ))
    return shots


def _parse_event_row(row_number: int, obj: object) -> Event:
    if not isinstance(obj, dict):
        raise FormatError(row_number, "expected an object per line")
    for required in ("type", "start_ms", "end_ms", "confidence"):
        if required not in obj:
            raise FormatError(row_number, f"missing field {required!r}")
    event_type = obj["type"]
    start_ms = obj["start_ms"]
    end_ms = obj["end_ms"]
    confidence = obj["confidence"]
    if not isinstance(event_type, str) or not event_type:
        raise FormatError(row_number, "'type' must be a non-empty string")
    if type(start_ms) is not int or type(end_ms) is not int:
        raise FormatError(row_number, "'start_ms' and 'end_ms' must be integers")
    if start_ms < 0 or end_ms <= start_ms:
        raise InvalidInterval(row_number, start_ms, end_ms)
    if type(confidence) not in (int, float) or not 0 <= confidence <= 1:
        raise FormatError(row_number, "'confidence' must be a number in [0, 1]")
    attributes: dict[str, AttrValue] = {}
    for key, value in obj.items():
        if key in _EVENT_FIELDS:
            continue
        if type(value) not in (str, int, float):
            raise FormatError(row_number, f"attribute {key!r} must be a string, int or decimal")
        attributes[key] = value
    return Event.of(event_type, start_ms, end_ms, float(confidence), attributes)


def ingest_events(path: str | Path) -> list[Event]:
    """Load an external detector event file (JSONL with a `{"v": 1}` header).

    Returned events are sorted by interval start; ties keep file order.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise FormatError(1, 'missing header line {"v": 1}')
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise FormatError(1, f"malformed header: {exc.msg}") from None
    if not isinstance(header, dict) or "v" not in header:
        raise FormatError(1, 'first line must be the header object {"v": 1}')
    if header["v"] != 1:
        raise FormatError(1, f"unsupported event file version {header['v']!r}; this build reads v=1")

    events = []
    for row_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(row_number, f"malformed record: {exc.msg}") from None
        events.append(_parse_event_row(row_number, obj))
    return sorted(events, key=lambda e: e.start_ms)


def merge_timeline(sources: Iterable[Sequence[Event]]) -> list[Event]:
    """Merge event lists into one globally ordered timeline.

    Ordering is (start, end, type tag), remaining ties by source order;
    no event is dropped or duplicated. Every returned event carries a
    positional id, so re-merging an already merged timeline is the
    identity (ids included).
    """
    flat: list[Event] = [event for source in sources for event in source]
    flat.sort(key=lambda e: (e.start_ms, e.end_ms, e.event_type))
    return [replace(event, event_id=f"e{i:04d}") for i, event in enumerate(flat)]
