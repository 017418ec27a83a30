"""CSV/JSON outputs with content digests and the run manifest."""
import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
import pandas as pd

ARTIFACT_VERSION = '0.1.0'
MANIFEST = 'manifest.json'


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    raise TypeError(f'{type(obj).__name__} is not JSON serializable')


def to_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + '\n'


def digest(path):
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            h.update(chunk)
    return h.hexdigest()


def config_digest(config):
    return hashlib.sha256(to_json(config.as_dict()).encode()).hexdigest()


@dataclass
class RunManifest:
    config_hash: str
    experiment: str
    threads: int
    started: str
    finished: str = ''
    version: str = ARTIFACT_VERSION
    cells: List[dict] = field(default_factory=list)
    files: Dict[str, str] = field(default_factory=dict)

    @property
    def failed(self):
        return [c for c in self.cells if c.get('status') != 'ok']


class Reporter:
    """Writes into one output directory and remembers the digest of every file."""

    def __init__(self, out_dir):
        self.out_dir = out_dir
        os.makedirs(out_dir, exist_ok=True)
        self.files = {}

    def _record(self, name):
        path = os.path.join(self.out_dir, name)
        self.files[name] = digest(path)
        return path

    def write_csv(self, name, frame):
        """17 significant digits, dot decimal, LF line endings."""
        if not isinstance(frame, pd.DataFrame):
            frame = pd.DataFrame(frame)
        frame.to_csv(os.path.join(self.out_dir, name), index=False, float_format='%.17g', lineterminator='\n')
        return self._record(name)

    def write_json(self, name, obj):
        with open(os.path.join(self.out_dir, name), 'w', newline='\n') as f:
            f.write(to_json(obj))
        return self._record(name)

    def write_manifest(self, manifest):
        manifest.files = dict(sorted(self.files.items()))
        path = os.path.join(self.out_dir, MANIFEST)
        with open(path, 'w', newline='\n') as f:
            f.write(to_json(dataclasses.asdict(manifest)))
        return path


def read_manifest(out_dir):
    with open(os.path.join(out_dir, MANIFEST)) as f:
        return RunManifest(**json.load(f))


def verify_manifest(out_dir):
    """Names of listed files whose content no longer matches the recorded digest."""
    manifest = read_manifest(out_dir)
    return [name for name, d in manifest.files.items() if digest(os.path.join(out_dir, name)) != d]
