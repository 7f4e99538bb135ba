"""Plain-text file formats: laminations, sequence manifests, tabulated circle maps, CSV tables."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circle import TabulatedMap
from .lamination import LaminationError, MeasuredLamination, as_rows, from_rows


def fmt(x) -> str:
    """Round-trip float formatting (17 significant digits)."""
    return format(float(x), ".17g")


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_lamination(text: str) -> MeasuredLamination:
    """One atom per line: ``angle1 angle2 weight``; ``#`` starts a comment."""
    rows = []
    for lineno, line in _data_lines(text):
        parts = line.replace(",", " ").split()
        if len(parts) != 3:
            raise LaminationError(f"line {lineno}: expected 'angle1 angle2 weight', got {line!r}")
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError:
            raise LaminationError(f"line {lineno}: not a number in {line!r}") from None
    return from_rows(rows)


def format_lamination(lam: MeasuredLamination, header: str | None = None) -> str:
    out = []
    if header:
        out.extend(f"# {h}" for h in header.splitlines())
    out.append(f"# atoms: {len(lam)}")
    out.extend(" ".join(fmt(v) for v in row) for row in as_rows(lam))
    return "\n".join(out) + "\n"


def read_lamination(path) -> MeasuredLamination:
    return parse_lamination(Path(path).read_text())


def write_lamination(path, lam: MeasuredLamination, header: str | None = None) -> None:
    Path(path).write_text(format_lamination(lam, header))


@dataclass(frozen=True)
class Manifest:
    members: tuple[Path, ...]
    limit: Path


def read_manifest(path) -> Manifest:
    """One lamination path per line (relative to the manifest); the last line is ``limit: path``."""
    path = Path(path)
    lines = [line for _, line in _data_lines(path.read_text())]
    if not lines or not lines[-1].lower().startswith("limit:"):
        raise ValueError(f"{path}: last line must be 'limit: <file>'")
    if any(line.lower().startswith("limit:") for line in lines[:-1]):
        raise ValueError(f"{path}: only the last line may name the limit")

    def resolve(p):
        p = Path(p.strip())
        return p if p.is_absolute() else path.parent / p

    return Manifest(tuple(resolve(line) for line in lines[:-1]), resolve(lines[-1].split(":", 1)[1]))


def read_tabulated_map(path) -> TabulatedMap:
    """Two numeric columns (angle, image angle); non-numeric header rows and comments are skipped."""
    xs, ys = [], []
    for lineno, line in _data_lines(Path(path).read_text()):
        parts = line.replace(",", " ").split()
        try:
            x, y = float(parts[0]), float(parts[1])
        except (ValueError, IndexError):
            if xs:
                raise ValueError(f"{path}:{lineno}: expected two numbers") from None
            continue
        xs.append(x)
        ys.append(y)
    return TabulatedMap(np.array(xs), np.array(ys))


def table_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
