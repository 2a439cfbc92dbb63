// Timeline lane model: one lane per event type, one per annotation
// concept. Pure functions over the API payloads; zoom filtering keeps
// exactly the items that intersect the window, nothing is computed that
// the server did not send.

import type { AnnotationRecord, TimelineEvent } from "./types.js";

export interface ZoomWindow {
  startMs: number;
  endMs: number;
}

export interface LaneItem {
  id: string;
  startMs: number;
  endMs: number;
  label: string;
}

export interface Lane {
  kind: "events" | "annotations";
  label: string;
  items: LaneItem[];
}

function eventLabel(event: TimelineEvent): string {
  if (typeof event.attributes["text"] === "string") {
    return event.attributes["text"];
  }
  if (event.type === "shot") {
    return `shot ${event.attributes["index"] ?? ""}`.trim();
  }
  return event.type;
}

export function buildLanes(
  events: TimelineEvent[],
  annotations: AnnotationRecord[],
): Lane[] {
  const eventLanes = new Map<string, Lane>();
  for (const event of events) {
    let lane = eventLanes.get(event.type);
    if (lane === undefined) {
      lane = { kind: "events", label: event.type, items: [] };
      eventLanes.set(event.type, lane);
    }
    lane.items.push({
      id: event.id,
      startMs: event.start_ms,
      endMs: event.end_ms,
      label: eventLabel(event),
    });
  }
  const annotationLanes = new Map<string, Lane>();
  for (const record of annotations) {
    let lane = annotationLanes.get(record.concept);
    if (lane === undefined) {
      lane = { kind: "annotations", label: record.concept, items: [] };
      annotationLanes.set(record.concept, lane);
    }
    lane.items.push({
      id: record.id,
      startMs: record.start_ms,
      endMs: record.end_ms,
      label: record.concept.split(":").pop() ?? record.concept,
    });
  }
  const byLabel = (a: Lane, b: Lane) => a.label.localeCompare(b.label);
  return [
    ...[...eventLanes.values()].sort(byLabel),
    ...[...annotationLanes.values()].sort(byLabel),
  ];
}

/** Items intersecting the half-open window [startMs, endMs). */
export function visibleItems(lane: Lane, zoom: ZoomWindow): LaneItem[] {
  return lane.items.filter(
    (item) => item.startMs < zoom.endMs && item.endMs > zoom.startMs,
  );
}

export function fullExtent(
  events: TimelineEvent[],
  annotations: AnnotationRecord[],
): ZoomWindow {
  const ends = [
    ...events.map((e) => e.end_ms),
    ...annotations.map((a) => a.end_ms),
  ];
  return { startMs: 0, endMs: ends.length > 0 ? Math.max(...ends) : 1000 };
}

export function zoomAround(window: ZoomWindow, factor: number): ZoomWindow {
  const center = (window.startMs + window.endMs) / 2;
  const half = ((window.endMs - window.startMs) / 2) * factor;
  const startMs = Math.max(0, Math.round(center - half));
  const endMs = Math.max(startMs + 1, Math.round(center + half));
  return { startMs, endMs };
}

export interface ProvenanceHighlight {
  rules: string[];
  eventIds: Set<string>;
}

/** Rule names and contributing event ids for a selected annotation. */
export function provenanceOf(
  annotations: AnnotationRecord[],
  annotationId: string,
): ProvenanceHighlight {
  const record = annotations.find((a) => a.id === annotationId);
  if (record === undefined) {
    return { rules: [], eventIds: new Set() };
  }
  const rules: string[] = [];
  const eventIds = new Set<string>();
  for (const entry of record.provenance) {
    if (!rules.includes(entry.rule)) rules.push(entry.rule);
    for (const id of entry.events) eventIds.add(id);
  }
  return { rules, eventIds };
}
