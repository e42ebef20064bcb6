"""Delimited and JSON serialization of computed curves."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__


@dataclass
class Column:
    name: str
    values: np.ndarray
    pair: str = ""
    scheme: str = ""
    quantity: str = "g2"


@dataclass
class Table:
    abscissa_name: str
    abscissa: np.ndarray
    columns: list
    extra: dict = None


def _cell(x) -> str:
    x = float(x)
    return "" if math.isnan(x) else format(x, ".17g")


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow([table.abscissa_name] + [c.name for c in table.columns])
    for i, x in enumerate(table.abscissa):
        writer.writerow([_cell(x)] + [_cell(c.values[i]) for c in table.columns])
    return buf.getvalue()


def _json_number(x):
    x = float(x)
    return None if math.isnan(x) else x


def to_json(table: Table, config: dict) -> str:
    curves = []
    for c in table.columns:
        curves.append({
            "pair": c.pair or None,
            "scheme": c.scheme or None,
            "quantity": c.quantity,
            "points": [[_json_number(x), _json_number(y)]
                       for x, y in zip(table.abscissa, c.values)],
        })
    doc = {"config": config, "abscissa": table.abscissa_name, "curves": curves,
           "version": __version__}
    if table.extra:
        doc.update(table.extra)
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"
