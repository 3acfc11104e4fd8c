import csv
import json
import sys
from dataclasses import asdict, is_dataclass
from enum import Enum
from levysmile.util.errors import ModelConfigError, get_exit_status
from math import isnan

BANNER_WIDTH = 65


def print_banner(title):
    print(" {} ".format(title).center(BANNER_WIDTH, "="))


def print_divider():
    print("-" * BANNER_WIDTH)


def print_footer():
    print("=" * BANNER_WIDTH)


def format_value(value):
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if isnan(value):
            return "nan"
        return "{:.8g}".format(value)
    if isinstance(value, Enum):
        return str(value.value)

    return str(value)


def _csv_value(value):
    if isinstance(value, float):
        return "%.17g" % value
    return format_value(value)


def print_fields(fields):
    """
    Print (name, value) pairs, one per line
    """
    for name, value in fields:
        print("{}:\t\t{}".format(name, format_value(value)).expandtabs(24))


def print_table(columns, rows):
    print("\t".join(columns).expandtabs(16))
    print_divider()
    for row in rows:
        print("\t".join(format_value(v) for v in row).expandtabs(16))


def to_jsonable(value):
    if is_dataclass(value):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and isnan(value):
        return None

    return value


def print_json(payload):
    print(json.dumps(to_jsonable(payload), indent=2, sort_keys=True))


def exit_with_error(exc):
    """
    Report an error on stderr and exit with its status code
    """
    print("ERROR: {}".format(exc), file=sys.stderr)
    sys.exit(get_exit_status(exc))


def emit(title, columns, rows, records, fmt=None):
    """
    Print a result either as a banner table (default), as CSV rows, or as
    JSON records
    """
    if fmt == "json":
        print_json(records)
        return

    if fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([_csv_value(v) for v in row] for row in rows)
        return

    if fmt:
        raise ModelConfigError(
            "Unrecognised format '{}', must be one of: csv, json".format(fmt)
        )

    print_banner(title)
    print_table(columns, rows)
    print_footer()
