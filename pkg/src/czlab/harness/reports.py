"""Claim report artifacts: deterministic JSON, summary CSV, config hashing."""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

__all__ = ["ClaimReport", "config_hash", "write_summary_csv"]


def config_hash(config: dict) -> str:
    """Stable digest of a config: canonical JSON, sorted keys, compact separators."""
    payload = json.dumps(config, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class ClaimReport:
    """Outcome of one claim verification.

    ``rows`` hold the sweep: each has ``params`` (the exact sweep-point
    parameters), ``lhs``, ``rhs`` and ``ratio``.  The report carries the full
    config and its hash so every row is recomputable.  The timestamp lives in
    its own field and is excluded from the canonical bytes, which are
    otherwise byte-identical across reruns of the same config.
    """

    claim_id: str
    tolerance_policy: str
    verdict: str
    rows: list[dict]
    config: dict
    notes: list[str] = field(default_factory=list)
    timestamp: str = ""

    def __post_init__(self) -> None:
        if self.verdict not in ("pass", "fail"):
            raise ValueError(f"verdict must be 'pass' or 'fail', got {self.verdict!r}")
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat()

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def hash(self) -> str:
        return config_hash(self.config)

    def canonical_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "config": self.config,
            "config_hash": self.hash,
            "notes": list(self.notes),
            "rows": self.rows,
            "tolerance_policy": self.tolerance_policy,
            "verdict": self.verdict,
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.canonical_dict(), sort_keys=True, indent=2).encode("utf-8")

    def to_dict(self) -> dict:
        out = self.canonical_dict()
        out["timestamp"] = self.timestamp
        return out

    def write_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n")
        return path

    @staticmethod
    def from_json(path: str | Path) -> "ClaimReport":
        data = json.loads(Path(path).read_text())
        return ClaimReport(
            claim_id=data["claim_id"],
            tolerance_policy=data["tolerance_policy"],
            verdict=data["verdict"],
            rows=data["rows"],
            config=data["config"],
            notes=data.get("notes", []),
            timestamp=data.get("timestamp", ""),
        )

    def worst_ratio(self) -> float:
        ratios = [r["ratio"] for r in self.rows if r.get("ratio") is not None]
        return max(ratios, default=float("nan"))


def write_summary_csv(reports: list[ClaimReport], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["claim_id", "verdict", "rows", "worst_ratio",
                    "tolerance_policy", "config_hash"])
        for rep in reports:
            w.writerow([rep.claim_id, rep.verdict, len(rep.rows),
                        repr(rep.worst_ratio()), rep.tolerance_policy, rep.hash])
    return path
