"""Learning records: partial assignments with per-record provenance.

File format: a header row of variable ids, one row per record, cell
values equal to a state label or empty for missing. An optional leading
``_provenance`` column carries the per-record tag; without it every
record reads as cross-company.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from dcaw.bn.network import Network
from dcaw.errors import InvalidRecordError

PROVENANCE_TAGS = ("cross-company", "within-company", "synthetic")

PROVENANCE_COLUMN = "_provenance"


@dataclass(frozen=True)
class RecordSet:
    records: tuple[Mapping[str, str], ...]
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        records = tuple(dict(r) for r in self.records)
        object.__setattr__(self, "records", records)
        prov = tuple(self.provenance) or tuple("cross-company" for _ in records)
        if len(prov) != len(records):
            raise InvalidRecordError(
                f"{len(prov)} provenance tags for {len(records)} records"
            )
        bad = sorted(set(prov) - set(PROVENANCE_TAGS))
        if bad:
            raise InvalidRecordError(f"unknown provenance tags: {bad}")
        object.__setattr__(self, "provenance", prov)

    def __iter__(self) -> Iterator[Mapping[str, str]]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def extend(self, other: "RecordSet") -> "RecordSet":
        return RecordSet(self.records + other.records, self.provenance + other.provenance)

    def fingerprint(self) -> str:
        canonical = json.dumps(
            [[sorted(r.items()), p] for r, p in zip(self.records, self.provenance)],
            separators=(",", ":"),
        )
        return hashlib.sha256(canonical.encode()).hexdigest()

    def validate_against(self, net: Network) -> None:
        for i, record in enumerate(self.records):
            for var_id, state in record.items():
                if var_id not in net.variables_by_id:
                    raise InvalidRecordError(
                        f"record {i} assigns unknown variable {var_id!r}"
                    )
                if state not in net.var(var_id).states:
                    raise InvalidRecordError(
                        f"record {i}: {state!r} is not a state of {var_id!r}"
                    )


def write_records_csv(
    record_set: RecordSet,
    columns: Sequence[str],
    include_provenance: bool = False,
) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = ([PROVENANCE_COLUMN] if include_provenance else []) + list(columns)
    writer.writerow(header)
    for record, prov in zip(record_set.records, record_set.provenance):
        row = ([prov] if include_provenance else []) + [
            record.get(c, "") for c in columns
        ]
        writer.writerow(row)
    return out.getvalue()


def read_records_csv(text: str) -> RecordSet:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InvalidRecordError("record file is empty") from None
    has_prov = bool(header) and header[0] == PROVENANCE_COLUMN
    columns = header[1:] if has_prov else header
    if len(set(columns)) != len(columns):
        raise InvalidRecordError("duplicate column ids in record file header")
    records: list[dict[str, str]] = []
    provenance: list[str] = []
    for i, row in enumerate(reader):
        if not row:
            continue
        expected = len(columns) + (1 if has_prov else 0)
        if len(row) != expected:
            raise InvalidRecordError(
                f"record row {i + 1} has {len(row)} cells, expected {expected}"
            )
        values = row[1:] if has_prov else row
        provenance.append(row[0] if has_prov else "cross-company")
        records.append({c: v for c, v in zip(columns, values) if v != ""})
    return RecordSet(tuple(records), tuple(provenance))
