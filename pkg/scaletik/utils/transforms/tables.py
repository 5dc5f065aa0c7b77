"""
Render rate-study results as CSV, Markdown or JSON documents.

Floats are written with 17 significant digits in CSV and JSON so that a
re-read reproduces every value bit for bit. JSON keys are sorted and carry a
schema version; nothing time dependent is written.
"""

from decimal import Decimal
import csv
import io
import math

import numpy as np
import simplejson

from scaletik.errors import UnsupportedError
from scaletik.globals import CSV_COLUMNS, FLAG_UNCOVERED, FLOAT_DIGITS, SCHEMA_VERSION


FLOAT_FORMAT = ".{}g".format(FLOAT_DIGITS)
UNCOVERED_MARK = "†"


def format_float(value):
    if value is None:
        return ""
    return format(float(value), FLOAT_FORMAT)


def decimalize(obj):
    """Replace floats by 17-digit decimals; non-finite floats become ``None``."""
    if isinstance(obj, dict):
        return {str(key): decimalize(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [decimalize(value) for value in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return None
        return Decimal(format(float(obj), FLOAT_FORMAT))
    return obj


def json_dumps_formatted(data):
    """Return json string with standard format"""
    return simplejson.dumps(
        decimalize(data),
        use_decimal=True,
        sort_keys=True,
        indent=2,
        separators=(",", ": "),
        ensure_ascii=False,
    )


def _csv_cell(value):
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if value is None:
        return ""
    return value


def results_to_csv(results):
    buff = io.StringIO()
    writer = csv.writer(buff, lineterminator="\r\n")
    writer.writerow(CSV_COLUMNS)
    for result in results:
        for row in result.to_rows():
            writer.writerow([_csv_cell(row[column]) for column in CSV_COLUMNS])
    return buff.getvalue()


def _exponent(value):
    return "-" if value is None else "δ^{:.2f}".format(value)


def _group(results):
    groups = {}
    for result in results:
        config = result.config
        key = (config["problem"], config.get("variant", ""), result.rule)
        groups.setdefault(key, []).append(result)
    return groups


def results_to_markdown(results):
    """
    One table per (problem, variant, rule): columns are the smoothness values
    ``u``, rows the chosen alpha and the error rates per norm for every ``s``.
    Cells outside the range covered by the theory carry a dagger.
    """
    lines = []
    any_flag = False
    for (problem, variant, rule), group in sorted(_group(results).items()):
        u_values = sorted({result.u for result in group})
        s_values = sorted({result.s for result in group})
        by_cell = {(result.s, result.u): result for result in group}
        title = "{} ({}), rule: {}".format(problem, variant, rule) if variant else (
            "{}, rule: {}".format(problem, rule)
        )
        lines.append("### {}".format(title))
        lines.append("")
        lines.append("| s | quantity | " + " | ".join("u={:g}".format(u) for u in u_values) + " |")
        lines.append("|---|---|" + "---|" * len(u_values))
        for s in s_values:
            cells = [by_cell.get((s, u)) for u in u_values]
            lines.append(
                "| {:g} | α | ".format(s)
                + " | ".join(
                    "" if cell is None else _exponent(cell.alpha_exponent) for cell in cells
                )
                + " |"
            )
            norms = sorted({fit["r"] for cell in cells if cell for fit in cell.fits})
            for r in norms:
                entries = []
                for cell in cells:
                    if cell is None:
                        entries.append("")
                        continue
                    fit = cell.fit(r)
                    entry = _exponent(fit["kappa_hat"])
                    if fit["flag"] == FLAG_UNCOVERED:
                        entry += UNCOVERED_MARK
                        any_flag = True
                    entries.append(entry)
                lines.append(
                    "| {:g} | error in X_{:g} | ".format(s, r) + " | ".join(entries) + " |"
                )
        lines.append("")
    if any_flag:
        lines.append("{} outside the parameter range covered by the rate theorems".format(UNCOVERED_MARK))
        lines.append("")
    return "\n".join(lines)


def results_to_json(results):
    return json_dumps_formatted(
        {
            "schema_version": SCHEMA_VERSION,
            "results": [result.to_dict() for result in results],
        }
    )


RENDERERS = {
    "csv": results_to_csv,
    "markdown": results_to_markdown,
    "json": results_to_json,
}

EXTENSIONS = {"csv": "csv", "markdown": "md", "json": "json"}


def emit_tables(results, file_format):
    """
    Render results in ``file_format`` (``csv``, ``markdown`` or ``json``).

    Raises:
        UnsupportedError: for any other format
    """
    if file_format not in RENDERERS:
        raise UnsupportedError(file_format)
    if not isinstance(results, (list, tuple)):
        results = [results]
    return RENDERERS[file_format](list(results))
