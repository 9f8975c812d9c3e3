"""File formats: purchase CSV and JSON for choice, mechanism and expenditure-table data.

Numbers may be written as integers, decimals or ``"n/d"`` strings and are
always read exactly. Every ingestion error is an :class:`InputError` whose
``location`` is a CSV line (``"line 3"``) or a JSON path (``"$.observations[1].chosen"``).

Choice JSON::

    {
      "ground": [{"label": "a", "coords": [1, 0]}, "b", ...],
      "observations": [{"chosen": ["a"], "budget": ["a", "b"]}, ...],
      "preorder": "geq" | {"name": "fosd", "pi": ["1/2", "1/2"]}
                  | {"adjacency": [["a", "b"], ...]}
    }

Ground entries are either a bare label or an object with ``label`` and
optional ``coords``. Observation entries name ground elements by label, or by
0-based index when an integer is not itself a label. ``preorder`` is optional;
named preorders are ``identity``, ``geq``, ``impatience`` and ``fosd`` (which
needs ``pi``). An adjacency list gives ``[better, worse]`` pairs; the diagonal
is implied and the result must already be transitive.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from ._rational import to_rational
from .choice import (
    ChoiceDataset,
    ChoiceObservation,
    Preorder,
    fosd_preorder,
    geq_preorder,
    identity_preorder,
    impatience_preorder,
    validate_preorder,
)
from .dataset import ExpenditureTable, PurchaseDataset
from .errors import InputError, RevPrefError
from .mechanism import MechanismDataset

PREORDER_NAMES = ("identity", "geq", "impatience", "fosd")


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, (int, Fraction, str)) and not isinstance(value, bool):
        try:
            return to_rational(value)
        except (ValueError, TypeError) as exc:
            raise InputError(str(exc), where) from None
    raise InputError(f"expected a number, got {type(value).__name__}", where)


# ---------------------------------------------------------------- CSV


def parse_purchase_text(text: str) -> PurchaseDataset:
    rows = list(csv.reader(text.splitlines()))
    rows = [(i + 1, r) for i, r in enumerate(rows) if any(cell.strip() for cell in r)]
    if not rows:
        raise InputError("empty file", "line 1")
    line, header = rows[0]
    header = [h.strip().lower() for h in header]
    n_goods = len(header) // 2
    expected = [f"p{i}" for i in range(1, n_goods + 1)] + [f"x{i}" for i in range(1, n_goods + 1)]
    if n_goods == 0 or header != expected:
        raise InputError(f"header must be {','.join(expected) or 'p1,x1'}", f"line {line}")
    bundles, prices = [], []
    for line, row in rows[1:]:
        where = f"line {line}"
        if len(row) != 2 * n_goods:
            raise InputError(f"expected {2 * n_goods} fields, found {len(row)}", where)
        values = [_rational(cell, where) for cell in row]
        p, x = values[:n_goods], values[n_goods:]
        if any(v <= 0 for v in p):
            raise InputError("prices must be strictly positive", where)
        if any(v < 0 for v in x):
            raise InputError("quantities must be non-negative", where)
        prices.append(p)
        bundles.append(x)
    if not bundles:
        raise InputError("no observations after the header", f"line {rows[0][0]}")
    return PurchaseDataset(tuple(bundles), tuple(prices))


def parse_purchase_csv(path: str | Path) -> PurchaseDataset:
    """Read ``p1..pL,x1..xL`` rows; one row per observation, order preserved."""
    return parse_purchase_text(read_text(path))


def format_purchase_csv(dataset: PurchaseDataset) -> str:
    lines = [
        ",".join([f"p{i}" for i in range(1, dataset.n_goods + 1)]
                 + [f"x{i}" for i in range(1, dataset.n_goods + 1)])
    ]
    for p, x in zip(dataset.prices, dataset.bundles):
        lines.append(",".join(str(v) for v in (*p, *x)))
    return "\n".join(lines) + "\n"


def write_purchase_csv(dataset: PurchaseDataset, path: str | Path) -> None:
    Path(path).write_text(format_purchase_csv(dataset))


# ---------------------------------------------------------------- JSON


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", str(path)) from None


def load_json_text(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"line {exc.lineno}") from None


def _matrix(value: Any, where: str) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(value, list) or not value:
        raise InputError("expected a non-empty list of rows", where)
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise InputError("expected a list", f"{where}[{i}]")
        if len(row) != len(value):
            raise InputError(f"row has {len(row)} entries, matrix needs {len(value)}", f"{where}[{i}]")
        rows.append(tuple(_rational(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)))
    return tuple(rows)


def _field(doc: Any, key: str, where: str = "$") -> Any:
    if not isinstance(doc, dict):
        raise InputError("expected an object", where)
    if key not in doc:
        raise InputError(f"missing field {key!r}", where)
    return doc[key]


def parse_mechanism_text(text: str) -> MechanismDataset:
    doc = load_json_text(text)
    return MechanismDataset(_matrix(_field(doc, "payoff"), "$.payoff"))


def parse_mechanism_json(path: str | Path) -> MechanismDataset:
    """``{"payoff": [[...], ...]}``, a square matrix with ``payoff[t][s] = v^t(f^s)``."""
    return parse_mechanism_text(read_text(path))


def parse_table_text(text: str) -> ExpenditureTable:
    doc = load_json_text(text)
    return ExpenditureTable(_matrix(_field(doc, "values"), "$.values"))


def parse_table_json(path: str | Path) -> ExpenditureTable:
    """``{"values": [[...], ...]}`` with ``values[t][s] = g^t(x^s)``."""
    return parse_table_text(read_text(path))


@dataclass(frozen=True)
class ChoiceInput:
    data: ChoiceDataset
    preorder_request: Any = None


class _Labels:
    def __init__(self, labels: Sequence[Any]):
        self.labels = list(labels)
        self.index = {label: i for i, label in enumerate(labels)}

    def resolve(self, ref: Any, where: str) -> int:
        if isinstance(ref, (str, int)) and not isinstance(ref, bool):
            if ref in self.index:
                return self.index[ref]
            if isinstance(ref, int) and 0 <= ref < len(self.labels):
                return ref
        raise InputError(f"unknown ground element {ref!r}", where)


def _ground(value: Any) -> tuple[list[Any], list[Any] | None]:
    if not isinstance(value, list) or not value:
        raise InputError("expected a non-empty list", "$.ground")
    labels, coords = [], []
    for i, entry in enumerate(value):
        where = f"$.ground[{i}]"
        if isinstance(entry, dict):
            label = _field(entry, "label", where)
            raw = entry.get("coords")
            if raw is not None:
                if not isinstance(raw, list):
                    raise InputError("coords must be a list", f"{where}.coords")
                raw = [_rational(v, f"{where}.coords[{j}]") for j, v in enumerate(raw)]
            coords.append(raw)
        else:
            label = entry
            coords.append(None)
        if not isinstance(label, (str, int)) or isinstance(label, bool):
            raise InputError("labels must be strings or integers", where)
        if label in labels:
            raise InputError(f"duplicate label {label!r}", where)
        labels.append(label)
    if all(c is None for c in coords):
        return labels, None
    if any(c is None for c in coords):
        missing = next(i for i, c in enumerate(coords) if c is None)
        raise InputError("coords must be given for every element or none", f"$.ground[{missing}]")
    if len({len(c) for c in coords}) != 1:
        raise InputError("all coords must have the same length", "$.ground")
    return labels, coords


def _index_set(value: Any, labels: _Labels, where: str) -> frozenset[int]:
    if not isinstance(value, list):
        raise InputError("expected a list of ground elements", where)
    return frozenset(labels.resolve(ref, f"{where}[{i}]") for i, ref in enumerate(value))


def parse_choice_text(text: str) -> ChoiceInput:
    doc = load_json_text(text)
    ground, coords = _ground(_field(doc, "ground"))
    labels = _Labels(ground)
    raw_obs = _field(doc, "observations")
    if not isinstance(raw_obs, list):
        raise InputError("expected a list", "$.observations")
    observations = []
    for t, entry in enumerate(raw_obs):
        where = f"$.observations[{t}]"
        chosen = _index_set(_field(entry, "chosen", where), labels, f"{where}.chosen")
        budget = _index_set(_field(entry, "budget", where), labels, f"{where}.budget")
        if not budget:
            raise InputError("budget must be non-empty", f"{where}.budget")
        if not chosen:
            raise InputError("chosen must be non-empty", f"{where}.chosen")
        if not chosen <= budget:
            raise InputError("chosen elements must belong to the budget", f"{where}.chosen")
        observations.append(ChoiceObservation(chosen, budget))
    try:
        data = ChoiceDataset(tuple(ground), tuple(observations), coords)
    except RevPrefError as exc:
        raise InputError(str(exc), "$") from None
    request = doc.get("preorder")
    choice = ChoiceInput(data, request)
    if request is not None:
        build_preorder(choice)  # validate eagerly
    return choice


def parse_choice_json(path: str | Path) -> ChoiceInput:
    """Read a choice dataset and its optional preorder request."""
    return parse_choice_text(read_text(path))


def build_preorder(choice: ChoiceInput, override: Any = None) -> Preorder:
    """Materialise the preorder requested in the file, or ``override`` when given.

    ``override`` may be a preorder name or a request object; a bare ``"fosd"``
    borrows ``pi`` from the file's own preorder entry.
    """
    request = choice.preorder_request if override is None else override
    where = "$.preorder" if override is None else "--preorder"
    data = choice.data
    if request is None:
        raise InputError("no preorder given", where)
    if isinstance(request, str):
        request = {"name": request}
    if not isinstance(request, dict):
        raise InputError("preorder must be a name or an object", where)
    if "adjacency" in request:
        preorder = _adjacency(request["adjacency"], data, f"{where}.adjacency")
    else:
        name = request.get("name")
        if name not in PREORDER_NAMES:
            raise InputError(f"unknown preorder {name!r}; choose from {PREORDER_NAMES}", where)
        preorder = _named(name, request, choice, where)
    report = validate_preorder(preorder)
    if not report:
        detail = (
            f"missing reflexive pair at {data.labels[report.missing_reflexive]!r}"
            if report.broken_triple is None
            else "not transitive on " + ", ".join(repr(data.labels[i]) for i in report.broken_triple)
        )
        raise InputError(f"relation is not a preorder: {detail}", where)
    return preorder


def _named(name: str, request: dict, choice: ChoiceInput, where: str) -> Preorder:
    data = choice.data
    if name == "identity":
        return identity_preorder(data.ground_size)
    if data.coords is None:
        raise InputError(f"preorder {name!r} needs coords on every ground element", "$.ground")
    try:
        if name == "geq":
            return geq_preorder(data.coords)
        if name == "impatience":
            return impatience_preorder(data.coords)
        pi = request.get("pi")
        if pi is None and isinstance(choice.preorder_request, dict):
            pi = choice.preorder_request.get("pi")
        if not isinstance(pi, list):
            raise InputError("fosd needs a list of probabilities 'pi'", where)
        probs = [_rational(v, f"{where}.pi[{i}]") for i, v in enumerate(pi)]
        return fosd_preorder(data.coords, probs)
    except InputError:
        raise
    except RevPrefError as exc:
        raise InputError(str(exc), where) from None


def _adjacency(value: Any, data: ChoiceDataset, where: str) -> Preorder:
    if not isinstance(value, list):
        raise InputError("expected a list of [better, worse] pairs", where)
    labels = _Labels(data.labels)
    n = data.ground_size
    matrix = [[i == j for j in range(n)] for i in range(n)]
    for k, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError("expected a [better, worse] pair", f"{where}[{k}]")
        i = labels.resolve(pair[0], f"{where}[{k}][0]")
        j = labels.resolve(pair[1], f"{where}[{k}][1]")
        matrix[i][j] = True
    return Preorder.from_matrix(matrix)
