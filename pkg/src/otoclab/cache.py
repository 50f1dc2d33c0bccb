"""On-disk cache of correlator series, keyed by the inputs that determine them."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import warnings
import zipfile
from pathlib import Path

import numpy as np

from .quantum import CorrelatorSeries, MapParams

log = logging.getLogger(__name__)

CACHE_VERSION = 1


def series_key(K, D, t_max, grid="positive", evolve="P", resymmetrize=True):
    return {"K": float(K), "D": int(D), "t_max": int(t_max), "grid": grid,
            "evolve": evolve, "resymmetrize": bool(resymmetrize), "version": CACHE_VERSION}


def _digest(key):
    blob = json.dumps(key, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:24]


class SeriesCache:
    def __init__(self, directory):
        self.dir = Path(directory)

    def path(self, key):
        return self.dir / f"series-{_digest(key)}.npz"

    def store(self, key, series: CorrelatorSeries):
        self.dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                np.savez(fh, times=series.times, o1=series.o1, o2=series.o2, c=series.c,
                         key=np.array(json.dumps(key, sort_keys=True)))
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def load(self, key):
        """Return the cached series, or None if absent, stale or unreadable."""
        path = self.path(key)
        if not path.exists():
            return None
        try:
            with np.load(path, allow_pickle=False) as z:
                stored = json.loads(str(z["key"]))
                if stored != key:
                    log.info("cache entry %s has a different key/version; ignoring", path.name)
                    return None
                return CorrelatorSeries(z["times"], z["o1"], z["o2"], z["c"],
                                        MapParams(key["K"], key["D"]),
                                        meta={k: key[k] for k in ("grid", "evolve", "resymmetrize")})
        except (OSError, ValueError, KeyError, zipfile.BadZipFile, json.JSONDecodeError) as exc:
            warnings.warn(f"corrupt cache entry {path.name} ({exc}); recomputing", RuntimeWarning)
            return None
