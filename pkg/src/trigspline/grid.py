"""Uniform periodic grids on [0, 2*pi) and sampled data bound to them.

Two grid variants are supported for an odd node count ``N = 2n + 1``:

* variant 0: ``x_j = 2*pi*(j - 1)/N``   (node 1 sits at the origin)
* variant 1: ``x_j = pi*(2*j - 1)/N``   (midpoints of the variant-0 cells)

Formulas are 1-based in ``j``; storage is 0-based.
"""

from __future__ import annotations

import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import InvalidArgumentError, InvalidGridError, ParseError, SamplingError

__all__ = [
    "UniformGrid",
    "SampleSet",
    "build_grid",
    "uniform_nodes",
    "sample_function",
    "load_samples",
    "save_samples",
]


def uniform_nodes(count: int, variant: int = 0) -> np.ndarray:
    """Nodes of the uniform ``count``-point grid of the given variant.

    Shared by the grids and the quadrature oracles so that both see
    bit-identical abscissae. ``count`` need not be odd here.
    """
    j = np.arange(count, dtype=float)
    if variant == 0:
        return 2.0 * np.pi * j / count
    return np.pi * (2.0 * j + 1.0) / count


@dataclass(frozen=True)
class UniformGrid:
    """An ``N``-node periodic grid; ``nodes`` is a read-only float array."""

    N: int
    variant: int = 0
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise InvalidGridError(f"grid size must be an integer, got {self.N!r}")
        if self.N < 3 or self.N % 2 == 0:
            raise InvalidGridError(f"grid size must be odd and >= 3, got N={self.N}")
        if self.variant not in (0, 1):
            raise InvalidArgumentError(f"grid variant must be 0 or 1, got {self.variant!r}")
        nodes = uniform_nodes(int(self.N), self.variant)
        nodes.setflags(write=False)
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        """Harmonic count, ``(N - 1) / 2``."""
        return (self.N - 1) // 2

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.N


@dataclass(frozen=True)
class SampleSet:
    """Function values ``f_j`` at the nodes of ``grid``."""

    grid: UniformGrid
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.shape[0] != self.grid.N:
            raise InvalidArgumentError(
                f"expected {self.grid.N} sample values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise SamplingError(f"sample {bad + 1} is not finite ({values[bad]!r})")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def __eq__(self, other):
        if not isinstance(other, SampleSet):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    __hash__ = None


def build_grid(N: int, variant: int = 0) -> UniformGrid:
    """Construct the ``N``-point uniform grid of the given variant.

    Raises
    ------
    InvalidGridError
        If ``N`` is even or smaller than 3.
    InvalidArgumentError
        If ``variant`` is not 0 or 1.
    """
    return UniformGrid(N, variant)


def sample_function(grid: UniformGrid, f: Callable[[float], float]) -> SampleSet:
    """Evaluate ``f`` at every node of ``grid``."""
    values = np.empty(grid.N)
    for j, x in enumerate(grid.nodes):
        try:
            with np.errstate(all="ignore"):
                v = float(f(float(x)))
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise SamplingError(f"f could not be evaluated at node {j + 1} (x={float(x)!r}): {exc}") from exc
        if not math.isfinite(v):
            raise SamplingError(f"f is not finite at node {j + 1} (x={float(x)!r}): {v!r}")
        values[j] = v
    return SampleSet(grid, values)


Source = Union[str, os.PathLike, io.IOBase]


def _read_text(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    return data


def _parse_header(line: str, lineno: int):
    fields = {}
    for part in line.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep:
            raise ParseError("header must look like 'N=<int>,variant=<0|1>'", line=lineno)
        try:
            fields[key] = int(value.strip())
        except ValueError:
            raise ParseError(f"header value {value.strip()!r} is not an integer", line=lineno, field=key)
    if set(fields) != {"N", "variant"}:
        raise ParseError("header must declare exactly N and variant", line=lineno)
    return fields["N"], fields["variant"]


def _grid_or_parse_error(N, variant, line=None):
    try:
        return UniformGrid(N, variant)
    except InvalidArgumentError as exc:
        raise ParseError(str(exc), line=line, field="N" if isinstance(exc, InvalidGridError) else "variant")


def _load_csv(text: str) -> SampleSet:
    lines = text.splitlines()
    header = None
    values = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = _parse_header(line, lineno)
            grid = _grid_or_parse_error(*header, line=lineno)
            continue
        try:
            v = float(line)
        except ValueError:
            raise ParseError(f"cannot parse sample value {line!r}", line=lineno)
        if not math.isfinite(v):
            raise ParseError(f"sample value {line!r} is not finite", line=lineno)
        values.append(v)
    if header is None:
        raise ParseError("empty input: missing 'N=...,variant=...' header", line=1)
    if len(values) != grid.N:
        raise ParseError(f"header declares N={grid.N} but {len(values)} values follow", field="values")
    return SampleSet(grid, values)


def _load_json(text: str) -> SampleSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno)
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object")
    for key in ("N", "variant", "values"):
        if key not in obj:
            raise ParseError("missing key", field=key)
    N, variant, values = obj["N"], obj["variant"], obj["values"]
    if not isinstance(N, int) or isinstance(N, bool):
        raise ParseError("N must be an integer", field="N")
    if not isinstance(variant, int) or isinstance(variant, bool):
        raise ParseError("variant must be an integer", field="variant")
    grid = _grid_or_parse_error(N, variant)
    if not isinstance(values, list):
        raise ParseError("values must be an array", field="values")
    if len(values) != N:
        raise ParseError(f"N={N} but {len(values)} values given", field="values")
    out = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ParseError(f"value {i + 1} is not a finite number: {v!r}", field="values")
        out.append(float(v))
    return SampleSet(grid, out)


def load_samples(source: Source, format: str = "csv") -> SampleSet:
    """Read a :class:`SampleSet` from a path or an open (text or binary) stream.

    CSV: a header line ``N=<int>,variant=<0|1>`` followed by one value per
    line (blank lines and ``#`` comments are skipped). JSON: an object with
    integer ``N``, integer ``variant`` and array ``values``.
    """
    text = _read_text(source)
    if format == "csv":
        return _load_csv(text)
    if format == "json":
        return _load_json(text)
    raise InvalidArgumentError(f"unknown sample format {format!r}")


def save_samples(samples: SampleSet, target=None, format: str = "csv"):
    """Serialize ``samples``; returns the text, and also writes it to ``target``.

    Values are written with ``repr`` so a load round-trip is bit-exact.
    """
    if format == "csv":
        lines = [f"N={samples.grid.N},variant={samples.grid.variant}"]
        lines += [repr(float(v)) for v in samples.values]
        text = "\n".join(lines) + "\n"
    elif format == "json":
        text = json.dumps(
            {"N": samples.grid.N, "variant": samples.grid.variant, "values": [float(v) for v in samples.values]}
        ) + "\n"
    else:
        raise InvalidArgumentError(f"unknown sample format {format!r}")
    if target is None:
        return text
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)
    return text
