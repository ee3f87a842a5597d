"""File formats: JSON instances, CSV flip traces, JSON reports.

Instances are human-diffable JSON validated on load (index ranges, perfect
matching, general position). Traces are flat CSV, one row per flip plus a
pseudo-row 0 describing the initial matching, so a trace plus its instance
file replays to the recorded final state.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .generators import Instance
from .geometry import PointSet, seg
from .matching import (
    FlipChoice,
    FlipRecord,
    FlipTrace,
    Matching,
    find_crossings,
    total_length,
)

TRACE_COLUMNS = [
    "step",
    "removed_1",
    "removed_2",
    "added_1",
    "added_2",
    "choice",
    "crossings_after",
    "length_after",
    "phi_l_after",
    "phi_k_after",
]


class InstanceFormatError(ValueError):
    pass


class TraceFormatError(ValueError):
    pass


def instance_to_json_dict(inst: Instance) -> dict:
    return {
        "points": [[p.x, p.y] for p in inst.points],
        "matching": [[a, b] for a, b in inst.matching.pairs],
        "provenance": inst.provenance,
        "notes": inst.notes,
    }


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(
        json.dumps(instance_to_json_dict(inst), indent=2) + "\n"
    )


def instance_from_json_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    for key in ("points", "matching"):
        if key not in doc:
            raise InstanceFormatError(f"missing key {key!r}")
    points = doc["points"]
    if (
        not isinstance(points, list)
        or not all(isinstance(p, list) and len(p) == 2 for p in points)
    ):
        raise InstanceFormatError("'points' must be a list of [x, y] pairs")
    try:
        ps = PointSet.from_coords(points)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(str(exc)) from exc
    pairs = doc["matching"]
    if (
        not isinstance(pairs, list)
        or not all(isinstance(p, list) and len(p) == 2 for p in pairs)
    ):
        raise InstanceFormatError("'matching' must be a list of [i, j] pairs")
    for a, b in pairs:
        if not (0 <= a < len(ps) and 0 <= b < len(ps)):
            raise InstanceFormatError(f"matching pair [{a}, {b}] out of range")
    try:
        matching = Matching.from_pairs(pairs)
        return Instance(
            ps,
            matching,
            str(doc.get("provenance", "")),
            str(doc.get("notes", "")),
        )
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def load_instance(path) -> Instance:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    return instance_from_json_dict(doc)


def _seg_str(s) -> str:
    return f"{s[0]}-{s[1]}"


def _parse_seg(text: str):
    a, b = text.split("-")
    return seg(int(a), int(b))


def _opt(value) -> str:
    return "" if value is None else str(value)


def write_trace(inst: Instance, trace: FlipTrace, path) -> None:
    """CSV with one pseudo-row for the initial matching and one row per flip."""
    ps = inst.points
    initial = trace.initial
    rows = [
        {
            "step": 0,
            "removed_1": "",
            "removed_2": "",
            "added_1": "",
            "added_2": "",
            "choice": "",
            "crossings_after": len(find_crossings(ps, initial)),
            "length_after": repr(total_length(ps, initial)),
            "phi_l_after": _opt(
                trace.records[0].phi_l_before if trace.records else None
            ),
            "phi_k_after": _opt(
                trace.records[0].phi_k_before if trace.records else None
            ),
        }
    ]
    for i, rec in enumerate(trace.records, start=1):
        rows.append(
            {
                "step": i,
                "removed_1": _seg_str(rec.crossing[0]),
                "removed_2": _seg_str(rec.crossing[1]),
                "added_1": _seg_str(rec.added[0]),
                "added_2": _seg_str(rec.added[1]),
                "choice": rec.choice.value,
                "crossings_after": _opt(rec.crossings_after),
                "length_after": repr(rec.length_after),
                "phi_l_after": _opt(rec.phi_l_after),
                "phi_k_after": _opt(rec.phi_k_after),
            }
        )
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=TRACE_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


@dataclass(frozen=True)
class TraceRow:
    step: int
    removed: tuple | None
    added: tuple | None
    choice: FlipChoice | None
    crossings_after: int | None
    length_after: float
    phi_l_after: int | None
    phi_k_after: int | None


def read_trace(path) -> list[TraceRow]:
    rows = []
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != TRACE_COLUMNS:
                raise TraceFormatError(
                    f"unexpected columns {reader.fieldnames}"
                )
            for raw in reader:
                step = int(raw["step"])
                if step == 0:
                    removed = added = choice = None
                else:
                    removed = (
                        _parse_seg(raw["removed_1"]),
                        _parse_seg(raw["removed_2"]),
                    )
                    added = (
                        _parse_seg(raw["added_1"]),
                        _parse_seg(raw["added_2"]),
                    )
                    choice = FlipChoice(raw["choice"])
                rows.append(
                    TraceRow(
                        step=step,
                        removed=removed,
                        added=added,
                        choice=choice,
                        crossings_after=(
                            int(raw["crossings_after"])
                            if raw["crossings_after"] else None
                        ),
                        length_after=float(raw["length_after"]),
                        phi_l_after=(
                            int(raw["phi_l_after"]) if raw["phi_l_after"] else None
                        ),
                        phi_k_after=(
                            int(raw["phi_k_after"]) if raw["phi_k_after"] else None
                        ),
                    )
                )
    except (OSError, ValueError) as exc:
        if isinstance(exc, TraceFormatError):
            raise
        raise TraceFormatError(f"{path}: {exc}") from exc
    if not rows or rows[0].step != 0:
        raise TraceFormatError("trace must start with pseudo-step 0")
    return rows


def records_from_rows(rows: list[TraceRow]) -> list[FlipRecord]:
    """Rebuild flip records from trace rows; lengths and potentials chain
    from the preceding row."""
    records = []
    prev = rows[0]
    for row in rows[1:]:
        records.append(
            FlipRecord(
                crossing=row.removed,
                choice=row.choice,
                added=row.added,
                length_before=prev.length_after,
                length_after=row.length_after,
                crossings_after=row.crossings_after,
                phi_l_before=prev.phi_l_after,
                phi_l_after=row.phi_l_after,
                phi_k_before=prev.phi_k_after,
                phi_k_after=row.phi_k_after,
            )
        )
        prev = row
    return records


def write_report(report: dict, path) -> None:
    Path(path).write_text(json.dumps(report, indent=2) + "\n")
