"""Storage for uploaded pricings: in-memory, optionally backed by a directory.

Each stored pricing keeps its source text verbatim (re-downloadable) next
to the parse outcome. With a data directory configured, every upload is
written to ``<id>.yml`` and reloaded at startup. Reads are lock-free
snapshots; writes are serialized.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .model import Pricing
from .parser import SyntaxDiagnostic, parse_pricing


@dataclass
class StoredPricing:
    id: str
    source: str
    pricing: Pricing | None
    diagnostics: list[SyntaxDiagnostic] = field(default_factory=list)
    uploaded_at: str = ""


class PricingStore:
    def __init__(self, data_dir: Path | None = None):
        self._records: dict[str, StoredPricing] = {}
        self._lock = threading.Lock()
        self._data_dir = Path(data_dir) if data_dir is not None else None
        if self._data_dir is not None:
            self._data_dir.mkdir(parents=True, exist_ok=True)
            self._reload()

    def _reload(self) -> None:
        assert self._data_dir is not None
        for path in sorted(self._data_dir.glob("*.yml")):
            source = path.read_text(encoding="utf-8")
            result = parse_pricing(source)
            uploaded = datetime.fromtimestamp(path.stat().st_mtime, tz=timezone.utc)
            self._records[path.stem] = StoredPricing(
                id=path.stem,
                source=source,
                pricing=result.pricing,
                diagnostics=result.diagnostics,
                uploaded_at=uploaded.isoformat(),
            )

    def put(self, source: str) -> StoredPricing:
        result = parse_pricing(source)
        record = StoredPricing(
            id=uuid.uuid4().hex[:12],
            source=source,
            pricing=result.pricing,
            diagnostics=result.diagnostics,
            uploaded_at=datetime.now(tz=timezone.utc).isoformat(),
        )
        with self._lock:
            self._records[record.id] = record
            if self._data_dir is not None:
                (self._data_dir / f"{record.id}.yml").write_text(source, encoding="utf-8")
        return record

    def get(self, pricing_id: str) -> StoredPricing | None:
        return self._records.get(pricing_id)

    def ids(self) -> list[str]:
        return sorted(self._records)
