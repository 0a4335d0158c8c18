#!/usr/bin/env python3
"""Check a simulate run's outputs and the example configs against schemas/."""

import argparse
import csv
import json
import sys
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

CSV_HEADER = ["t", "user", "snr_db", "cr", "rate_bps", "latency_ms", "q_true_db", "q_oracle_db", "satisfied",
              "objective"]


def load(path):
    with open(path) as f:
        return json.load(f)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--schemas", type=Path, required=True)
    ap.add_argument("--run", type=Path, required=True)
    ap.add_argument("--configs", type=Path, required=True)
    args = ap.parse_args()

    summary_schema = load(args.schemas / "summary.schema.json")
    config_schema = load(args.schemas / "config.schema.json")
    registry = Registry().with_resources([
        ("summary.schema.json", Resource.from_contents(summary_schema)),
        ("config.schema.json", Resource.from_contents(config_schema)),
    ])
    cls = jsonschema.Draft202012Validator

    summary = load(args.run / "summary.json")
    cls(summary_schema, registry=registry).validate(summary)

    configs = sorted(args.configs.glob("*.json"))
    if not configs:
        sys.exit(f"no configs under {args.configs}")
    for path in configs:
        cls(config_schema, registry=registry).validate(load(path))

    with open(args.run / "records.csv", newline="") as f:
        version = f.readline().strip()
        if version != "# schema_version=1":
            sys.exit(f"records.csv: bad version line {version!r}")
        rows = list(csv.reader(f))
    if rows[0] != CSV_HEADER:
        sys.exit(f"records.csv: header {rows[0]}")
    n_users = len(summary["users"])
    if len(rows) - 1 != summary["slots"] * n_users:
        sys.exit(f"records.csv: {len(rows) - 1} rows for {summary['slots']} slots x {n_users} users")
    for row in rows[1:]:
        int(row[0]), int(row[1])
        [float(x) for x in row[2:8] + row[9:]]
        if row[8] not in ("0", "1"):
            sys.exit(f"records.csv: satisfied must be 0/1, got {row[8]!r}")

    print(f"ok: summary.json, records.csv ({len(rows) - 1} rows), {len(configs)} config(s)")


if __name__ == "__main__":
    main()
