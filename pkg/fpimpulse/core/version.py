# fpimpulse/core/version.py
# -------------------------
# Helpers for version and commit reporting in run manifests.

from __future__ import annotations

import os
from typing import Dict, Optional

from .config import PROJECT_ROOT, VERSION
from .utils import sh

def _read_file(path: str) -> Optional[str]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            s = f.read().strip()
            return s if s else None
    except OSError:
        return None

def get_local_commit(app_root: str = str(PROJECT_ROOT)) -> Optional[str]:
    """
    Returns the commit the sources were built from.
    Priority:
      1) marker file .fpimpulse_commit (written by release packaging)
      2) git HEAD of the worktree at app_root
    """
    marker = _read_file(os.path.join(app_root, ".fpimpulse_commit"))
    if marker:
        return marker
    code, out = sh(["git", "-C", app_root, "rev-parse", "HEAD"])
    out = out.strip()
    return out if code == 0 and out else None

def dependency_versions() -> Dict[str, str]:
    """Versions of the numerical stack, for reproducibility records."""
    import numpy
    import scipy

    return {
        "fpimpulse": VERSION,
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
    }
