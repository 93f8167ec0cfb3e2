"""CSV ingestion, variable-subset selection, and z-score standardization.

Column scaling lives here and only here: every downstream solver consumes
the standardized matrices exactly as produced (no internal rescaling), so
one module owns the scaling convention. Standardization uses the sample
standard deviation (divisor N - 1), and the per-column means and SDs are
kept so values can be mapped back.

Subset configuration grammar (flat, line-oriented, no nesting)::

    # comment
    <group>.column = <column name>
    <group>.role = predictor | response

Repeated ``.column`` lines build the group's ordered column list; the
optional ``.role`` line tags a group for the modeling commands. Leading
and trailing whitespace around tokens is ignored; column names may contain
internal spaces.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "DataError",
    "CsvFormatError",
    "ConfigError",
    "UnknownColumnError",
    "MissingValueError",
    "ConstantColumnError",
    "RawTable",
    "SubsetConfig",
    "StandardizedMatrix",
    "load_csv",
    "select_variables",
    "standardize",
    "destandardize",
]

DEFAULT_MISSING_TOKENS = ("NA", "")

ROLE_PREDICTOR = "predictor"
ROLE_RESPONSE = "response"
_VALID_ROLES = (ROLE_PREDICTOR, ROLE_RESPONSE)


class DataError(ValueError):
    """Base class for all ingestion and preparation failures."""


class CsvFormatError(DataError):
    """Malformed CSV input: ragged row, bad header, or unparseable cell."""


class ConfigError(DataError):
    """Malformed subset-configuration file."""


class UnknownColumnError(DataError):
    """A configured column does not exist in the table."""


class MissingValueError(DataError):
    """A missing cell reached a stage that requires complete data."""


class ConstantColumnError(DataError):
    """A column has zero sample variance and cannot be standardized."""


@dataclass
class RawTable:
    """A rectangular table of numeric-or-missing cells with named columns."""

    names: list[str]
    rows: list[list[float | None]]

    def __post_init__(self) -> None:
        if not self.names:
            raise DataError("table must have at least one column")
        seen: set[str] = set()
        for name in self.names:
            if not name:
                raise DataError("column names must be nonempty")
            if name in seen:
                raise DataError(f"duplicate column name {name!r}")
            seen.add(name)
        width = len(self.names)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise DataError(
                    f"row {i + 1} has {len(row)} cells, expected {width}"
                )

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list[float | None]:
        j = self.names.index(name)
        return [row[j] for row in self.rows]


@dataclass
class SubsetConfig:
    """Named, ordered column groups with optional predictor/response roles."""

    groups: dict[str, list[str]]
    roles: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for group, columns in self.groups.items():
            if len(set(columns)) != len(columns):
                raise ConfigError(f"group {group!r} lists a column twice")
        for group, role in self.roles.items():
            if role not in _VALID_ROLES:
                raise ConfigError(f"invalid role {role!r} for group {group!r}")

    @classmethod
    def from_text(cls, text: str) -> "SubsetConfig":
        groups: dict[str, list[str]] = {}
        roles: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected '<group>.<key> = <value>'")
            lhs, value = line.split("=", 1)
            lhs = lhs.strip()
            value = value.strip()
            if "." not in lhs:
                raise ConfigError(f"line {lineno}: expected '<group>.<key>' before '='")
            group, key = lhs.rsplit(".", 1)
            group = group.strip()
            key = key.strip()
            if not group:
                raise ConfigError(f"line {lineno}: empty group name")
            if key == "column":
                if not value:
                    raise ConfigError(f"line {lineno}: empty column name")
                columns = groups.setdefault(group, [])
                if value in columns:
                    raise ConfigError(
                        f"line {lineno}: column {value!r} listed twice in group {group!r}"
                    )
                columns.append(value)
            elif key == "role":
                if value not in _VALID_ROLES:
                    raise ConfigError(
                        f"line {lineno}: role must be one of {_VALID_ROLES}, got {value!r}"
                    )
                if group in roles:
                    raise ConfigError(f"line {lineno}: role already set for group {group!r}")
                roles[group] = value
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        for group in roles:
            if group not in groups:
                raise ConfigError(f"group {group!r} has a role but no columns")
        if not groups:
            raise ConfigError("configuration defines no groups")
        return cls(groups=groups, roles=roles)

    @classmethod
    def load(cls, path: str | Path) -> "SubsetConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def group_with_role(self, role: str) -> str:
        matches = [g for g, r in self.roles.items() if r == role]
        if len(matches) != 1:
            raise ConfigError(
                f"expected exactly one group with role {role!r}, found {len(matches)}"
            )
        return matches[0]


@dataclass
class StandardizedMatrix:
    """Column-wise z-scored data plus the means/SDs needed to invert it."""

    matrix: np.ndarray
    means: np.ndarray
    sds: np.ndarray
    names: list[str]

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.means = np.asarray(self.means, dtype=float)
        self.sds = np.asarray(self.sds, dtype=float)
        if self.matrix.ndim != 2:
            raise DataError("standardized matrix must be 2-D")
        p = self.matrix.shape[1]
        if not (self.means.shape == (p,) and self.sds.shape == (p,) and len(self.names) == p):
            raise DataError("means/sds/names must all match the column count")
        if np.any(self.sds <= 0):
            raise DataError("standard deviations must be strictly positive")
        col_means = self.matrix.mean(axis=0)
        col_sds = self.matrix.std(axis=0, ddof=1)
        if np.max(np.abs(col_means)) > 1e-10 or np.max(np.abs(col_sds - 1.0)) > 1e-10:
            raise DataError("matrix columns are not standardized to tolerance")


def _parse_cell(text: str, missing_tokens: tuple[str, ...]) -> float | None:
    cell = text.strip()
    if cell in missing_tokens:
        return None
    try:
        return float(cell)
    except ValueError:
        raise CsvFormatError(f"unparseable cell {cell!r}") from None


def load_csv(
    source,
    delimiter: str = ",",
    missing_tokens: tuple[str, ...] = DEFAULT_MISSING_TOKENS,
) -> RawTable:
    """Read a delimited table (RFC-4180-style quoting) into a RawTable.

    ``source`` may be a path or an open text/byte stream. The first record
    is the header. Cells matching a missing token become missing; all
    other cells must parse as decimal numbers. Errors name the offending
    data row (1-based) and column.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return load_csv(handle, delimiter=delimiter, missing_tokens=missing_tokens)
    if isinstance(source, (bytes, bytearray)):
        return load_csv(
            io.StringIO(source.decode("utf-8")),
            delimiter=delimiter,
            missing_tokens=missing_tokens,
        )
    if hasattr(source, "read") and isinstance(source.read(0), bytes):
        source = io.TextIOWrapper(source, encoding="utf-8", newline="")

    reader = csv.reader(source, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("input is empty; expected a header row") from None
    names = [h.strip() for h in header]
    seen: set[str] = set()
    for name in names:
        if not name:
            raise CsvFormatError("header contains an empty column name")
        if name in seen:
            raise CsvFormatError(f"duplicate header column {name!r}")
        seen.add(name)

    rows: list[list[float | None]] = []
    for i, record in enumerate(reader, start=1):
        if not record:
            continue  # skip blank lines
        if len(record) != len(names):
            raise CsvFormatError(
                f"row {i} has {len(record)} cells, expected {len(names)}"
            )
        parsed: list[float | None] = []
        for name, cell in zip(names, record):
            try:
                parsed.append(_parse_cell(cell, missing_tokens))
            except CsvFormatError:
                raise CsvFormatError(
                    f"row {i}, column {name!r}: unparseable cell {cell.strip()!r}"
                ) from None
        rows.append(parsed)
    if not rows:
        raise CsvFormatError("no data rows after the header")
    return RawTable(names=names, rows=rows)


def select_variables(table: RawTable, config: SubsetConfig, group: str) -> RawTable:
    """Project ``table`` onto the columns of one configured group, in config order."""
    if group not in config.groups:
        raise ConfigError(f"unknown group {group!r}")
    wanted = config.groups[group]
    missing = [name for name in wanted if name not in table.names]
    if missing:
        raise UnknownColumnError(
            "columns not present in the table: " + ", ".join(repr(m) for m in missing)
        )
    index = [table.names.index(name) for name in wanted]
    rows = [[row[j] for j in index] for row in table.rows]
    return RawTable(names=list(wanted), rows=rows)


def standardize(table: RawTable) -> StandardizedMatrix:
    """Z-score every column of a complete numeric table.

    Uses the sample standard deviation (divisor N - 1). Missing cells are a
    hard error; this toolkit does not impute.
    """
    if table.n_rows < 2:
        raise DataError(f"need at least 2 rows to standardize, got {table.n_rows}")
    for i, row in enumerate(table.rows):
        for name, cell in zip(table.names, row):
            if cell is None:
                raise MissingValueError(
                    f"row {i + 1}, column {name!r}: missing value"
                )
    values = np.array(table.rows, dtype=float)
    means = values.mean(axis=0)
    sds = values.std(axis=0, ddof=1)
    constant = np.flatnonzero(sds == 0.0)
    if constant.size:
        names = ", ".join(repr(table.names[j]) for j in constant)
        raise ConstantColumnError(f"constant column(s): {names}")
    z = (values - means) / sds
    return StandardizedMatrix(matrix=z, means=means, sds=sds, names=list(table.names))


def destandardize(standardized: StandardizedMatrix) -> np.ndarray:
    """Map a standardized matrix back to the original scale."""
    return standardized.matrix * standardized.sds + standardized.means
