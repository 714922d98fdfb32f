import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from src.config import VERSION

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(',', ':'))


@dataclass
class RunManifest:
    """Everything needed to reproduce a run: command, parameters, seed, outputs."""

    command: str
    inputs: Dict[str, Any]
    seed: Optional[int] = None
    outputs: List[str] = field(default_factory=list)
    version: str = VERSION

    def as_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'inputs': canonical_json(self.inputs),
            'seed': self.seed,
            'outputs': list(self.outputs),
            'version': self.version,
        }


class ResultWriter:
    """
    Writes run outputs (CSV tables and JSON documents) into one directory.
    Every file goes to a temp file first and is renamed into place, so a
    failed run never leaves half-written output behind. Keeps a list of what
    it wrote for the manifest.
    """

    def __init__(self, out_dir: Union[str, Path]):
        """
        Args:
            out_dir: Directory for all outputs (created if missing)
        """
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.written: List[str] = []

    def _atomic_write(self, name: str, text: str) -> Path:
        target = self.out_dir / name
        fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=f".{name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, 'w', encoding='utf-8', newline='') as fh:
                fh.write(text)
            os.replace(tmp, target)
        except Exception:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
        if name not in self.written:
            self.written.append(name)
        logger.info(f"Wrote {target}")
        return target

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        """CSV with '.' decimals, '\\n' line endings and 17 significant digits."""
        text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        return self._atomic_write(name, text)

    def write_json(self, name: str, obj: Any) -> Path:
        return self._atomic_write(name, json.dumps(obj, sort_keys=True, indent=2) + '\n')

    def write_manifest(self, manifest: RunManifest, name: str = 'manifest.json') -> Path:
        manifest.outputs = sorted(set(self.written))
        return self.write_json(name, manifest.as_dict())
