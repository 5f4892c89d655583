"""Best-effort converter from ShareLaTeX history exports to the canonical format.

The converter accepts either a JSON object with an "updates" array (the
project-history shape) or a bare JSON array of updates. Each update
carries an "op" array of components and a "meta" object:

* {"i": text, "p": pos} becomes an insertion of len(text) characters.
* {"d": text, "p": pos} becomes a deletion anchored at the range start.
* any other component (e.g. comments) is skipped and counted.

The export is lossy in places, and the conversion says so rather than
guessing silently: updates without any timestamp are skipped with a
warning; updates without a user identity get author "unknown"; a missing
document id falls back to the provided default. Timestamps are taken
from meta.start_ts, then meta.ts, then meta.end_ts (milliseconds).
"""

from __future__ import annotations

import json


def _author_of(meta: dict) -> str:
    user_id = meta.get("user_id")
    if isinstance(user_id, (str, int)) and str(user_id):
        return str(user_id)
    users = meta.get("users")
    if isinstance(users, list) and users:
        first = users[0]
        if isinstance(first, dict):
            for key in ("id", "_id"):
                if isinstance(first.get(key), (str, int)) and str(first[key]):
                    return str(first[key])
        elif isinstance(first, (str, int)) and str(first):
            return str(first)
    return "unknown"


def _ts_of(meta: dict) -> int | None:
    for key in ("start_ts", "ts", "end_ts"):
        value = meta.get(key)
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    return None


def convert_sharelatex(data: bytes | str, default_doc: str) -> tuple[list[dict], list[str]]:
    """Convert one export into canonical record dicts plus warnings.

    Records come back in export order with the canonical key layout; the
    caller serializes them (one JSON object per line).
    """
    obj = json.loads(data)
    if isinstance(obj, dict) and isinstance(obj.get("updates"), list):
        updates = obj["updates"]
    elif isinstance(obj, list):
        updates = obj
    else:
        raise ValueError("unrecognized export: expected an 'updates' array")
    records: list[dict] = []
    warnings: list[str] = []
    skipped_updates = 0
    skipped_components = 0
    for update in updates:
        if not isinstance(update, dict):
            skipped_updates += 1
            continue
        meta = update.get("meta") if isinstance(update.get("meta"), dict) else {}
        ts = _ts_of(meta)
        if ts is None:
            skipped_updates += 1
            continue
        doc = update.get("doc") or update.get("doc_id") or default_doc
        author = _author_of(meta)
        components = update.get("op")
        if not isinstance(components, list):
            skipped_updates += 1
            continue
        for comp in components:
            if not isinstance(comp, dict):
                skipped_components += 1
                continue
            pos = comp.get("p")
            if not isinstance(pos, int) or isinstance(pos, bool) or pos < 0:
                skipped_components += 1
                continue
            if isinstance(comp.get("i"), str) and comp["i"]:
                text, action = comp["i"], "ins"
            elif isinstance(comp.get("d"), str) and comp["d"]:
                text, action = comp["d"], "del"
            else:
                skipped_components += 1
                continue
            records.append(
                {
                    "doc": str(doc),
                    "ts": ts,
                    "author": author,
                    "action": action,
                    "pos": pos,
                    "len": len(text),
                    "content": text,
                }
            )
    if skipped_updates:
        warnings.append(f"skipped {skipped_updates} updates without usable timestamp/ops")
    if skipped_components:
        warnings.append(f"skipped {skipped_components} non-edit op components")
    return records, warnings


def records_to_canonical(records: list[dict]) -> bytes:
    """Serialize converted records to canonical line-delimited JSON."""
    lines = [
        json.dumps(rec, ensure_ascii=False, separators=(",", ":")) for rec in records
    ]
    lines.append("")
    return "\n".join(lines).encode("utf-8")
