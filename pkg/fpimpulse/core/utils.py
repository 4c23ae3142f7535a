# utils.py
# -----------------------------------------------------------------------------
# General-purpose utilities used across modules:
#  - UTC timestamp for manifests
#  - shell execution wrapper
#  - atomic publication of artifact sets
#  - hashing of configs and input files
#  - deterministic CSV text rendering
# -----------------------------------------------------------------------------

from __future__ import annotations

import csv
import hashlib
import io
import os
import shutil
import subprocess
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .errors import ArtifactIOError

def utcnow_str() -> str:
    """UTC time string (ISO-like, used by run manifests)."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

def sh(cmd: List[str]) -> Tuple[int, str]:
    """
    Run a command and return (exit_code, output).
    Captures both stdout and stderr into text.
    """
    try:
        out = subprocess.check_output(cmd, stderr=subprocess.STDOUT, text=True)
        return 0, out
    except subprocess.CalledProcessError as e:
        return e.returncode, e.output
    except OSError as e:
        return 127, str(e)

def write_tree_atomic(out_dir: Path, files: Mapping[str, str]) -> None:
    """
    Publish a set of text files as one unit.

    Every file is written into a staging directory next to out_dir, which
    then replaces out_dir by rename. Entries of an existing out_dir that are
    not part of `files` are copied into the staging directory first. On any
    failure out_dir keeps its previous contents.

    Raises:
        ArtifactIOError: staging, writing or the final rename failed.
    """
    out_dir = Path(out_dir).resolve()
    parent = out_dir.parent
    try:
        parent.mkdir(parents=True, exist_ok=True)
        stage = Path(tempfile.mkdtemp(prefix=f".{out_dir.name}.", suffix=".new", dir=parent))
    except OSError as e:
        raise ArtifactIOError(f"cannot stage artifacts for {out_dir}: {e}") from e
    backup = stage.with_suffix(".old")
    try:
        stage.chmod(0o755)
        for name, content in files.items():
            (stage / name).write_text(content, encoding="utf-8", newline="")
        if out_dir.exists():
            for entry in out_dir.iterdir():
                if entry.name in files:
                    continue
                if entry.is_dir():
                    shutil.copytree(entry, stage / entry.name)
                else:
                    shutil.copy2(entry, stage / entry.name)
            os.replace(out_dir, backup)
        os.replace(stage, out_dir)
    except OSError as e:
        if backup.exists() and not out_dir.exists():
            os.replace(backup, out_dir)
        shutil.rmtree(stage, ignore_errors=True)
        raise ArtifactIOError(f"cannot write artifacts to {out_dir}: {e}") from e
    shutil.rmtree(backup, ignore_errors=True)

def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()

def sha256_file(path: Path) -> str:
    """Hex digest of a file's bytes."""
    try:
        return sha256_bytes(Path(path).read_bytes())
    except OSError as e:
        raise ArtifactIOError(f"cannot read {path}: {e}") from e

def fmt(value: object) -> str:
    """Fixed CSV formatting: 12 significant digits for floats, lowercase booleans."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.12g}"

def csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """Render a header and rows as UTF-8 CSV text with '\\n' line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else fmt(v) for v in row])
    return buf.getvalue()
