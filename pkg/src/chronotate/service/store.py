"""Filesystem project store with per-project write locking.

One directory per project under the store root, canonical file names:

    <root>/<id>/project.json      # consumable by the CLI as-is
    <root>/<id>/domain.ont
    <root>/<id>/time.ont
    <root>/<id>/rules.rules
    <root>/<id>/features_00.csv   # one per declared feature stream
    <root>/<id>/events/<name>     # external detector event files
    <root>/<id>/annotations.ann   # last annotation run

Writers (annotate, rule updates) serialize on a per-project lock; all
file writes are atomic (temp file + rename), so lock-free readers always
see a complete document.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path

from ..annotator import DetectorParams, Project, load_project


class ProjectExists(Exception):
    def __init__(self, project_id: str):
        super().__init__(f"project {project_id!r} already exists")
        self.project_id = project_id


class ProjectNotFound(Exception):
    def __init__(self, project_id: str):
        super().__init__(f"no project named {project_id!r}")
        self.project_id = project_id


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class ProjectStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise ValueError(f"project root {self.root} does not exist")
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def lock(self, project_id: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(project_id, threading.Lock())

    def dir(self, project_id: str) -> Path:
        return self.root / project_id

    def exists(self, project_id: str) -> bool:
        return (self.dir(project_id) / "project.json").is_file()

    def require(self, project_id: str) -> Path:
        if not self.exists(project_id):
            raise ProjectNotFound(project_id)
        return self.dir(project_id)

    def list_projects(self) -> list[str]:
        return sorted(
            entry.name for entry in self.root.iterdir()
            if (entry / "project.json").is_file()
        )

    def create(
        self,
        project_id: str,
        domain_ontology: str,
        time_ontology: str,
        rules: str = "",
        features: list[str] | None = None,
        events: dict[str, str] | None = None,
        detector: DetectorParams = DetectorParams(),
        duration_tolerance_ms: int = 0,
    ) -> None:
        if self.exists(project_id):
            raise ProjectExists(project_id)
        directory = self.dir(project_id)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "events").mkdir(exist_ok=True)

        _atomic_write(directory / "domain.ont", domain_ontology)
        _atomic_write(directory / "time.ont", time_ontology)
        _atomic_write(directory / "rules.rules", rules)
        feature_names = []
        for index, text in enumerate(features or []):
            name = f"features_{index:02d}.csv"
            _atomic_write(directory / name, text)
            feature_names.append(name)
        event_names = []
        for name in sorted(events or {}):
            _atomic_write(directory / "events" / name, (events or {})[name])
            event_names.append(f"events/{name}")

        config = {
            "v": 1,
            "id": project_id,
            "features": feature_names,
            "events": event_names,
            "domain_ontology": "domain.ont",
            "time_ontology": "time.ont",
            "rules": "rules.rules",
            "detector": {
                "threshold": detector.threshold,
                "min_shot_frames": detector.min_shot_frames,
            },
            "duration_tolerance_ms": duration_tolerance_ms,
        }
        _atomic_write(directory / "project.json", json.dumps(config, indent=2) + "\n")

    def load_project(self, project_id: str) -> Project:
        return load_project(self.require(project_id) / "project.json")

    def rules_text(self, project_id: str) -> str:
        project = self.load_project(project_id)
        return project.path(project.rules).read_text(encoding="utf-8")

    def put_rules(self, project_id: str, text: str) -> str:
        project = self.load_project(project_id)
        with self.lock(project_id):
            _atomic_write(project.path(project.rules), text)
        return hashlib.sha256(text.encode()).hexdigest()

    def annotations_text(self, project_id: str) -> str | None:
        path = self.require(project_id) / "annotations.ann"
        if not path.is_file():
            return None
        return path.read_text(encoding="utf-8")

    def save_annotations(self, project_id: str, text: str) -> None:
        _atomic_write(self.require(project_id) / "annotations.ann", text)
