import sys

import pandas as pd


class BadCsv(Exception):
    pass


def read_csv(path, required):
    """Load a CSV and check the required columns are present."""
    try:
        df = pd.read_csv(path)
    except Exception as exc:
        raise BadCsv(f"{path}: {exc}") from exc
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise BadCsv(f"{path}: missing columns {missing}")
    return df


def run_cli(fn, argv=None):
    try:
        fn(argv)
    except BadCsv as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
