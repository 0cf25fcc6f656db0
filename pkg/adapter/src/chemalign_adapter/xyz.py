"""Reader for extended-XYZ structure files.

The accepted shape per frame: an atom-count line, a free-form comment
line, then one line per atom starting with the element symbol and three
Cartesian coordinates. Extra per-atom columns (forces, charges) are
ignored. Multiple frames concatenate; blank lines between frames are
tolerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class XyzFormatError(ValueError):
    """Structural problem in an XYZ file, with the offending line number."""


@dataclass(frozen=True)
class Structure:
    """One molecular or bulk structure: element symbols plus positions."""

    elements: tuple[str, ...]
    positions: np.ndarray
    comment: str = ""

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64)
        if pos.shape != (len(self.elements), 3):
            raise ValueError(
                f"positions shape {pos.shape} does not match {len(self.elements)} atoms"
            )
        object.__setattr__(self, "positions", pos)

    @property
    def atom_count(self) -> int:
        return len(self.elements)


def _parse_atom_line(line: str, lineno: int) -> tuple[str, tuple[float, float, float]]:
    parts = line.split()
    if len(parts) < 4:
        raise XyzFormatError(f"line {lineno}: need element + 3 coordinates, got {len(parts)} fields")
    symbol = parts[0]
    if not symbol[:1].isalpha():
        raise XyzFormatError(f"line {lineno}: element symbol expected, got {symbol!r}")
    try:
        x, y, z = float(parts[1]), float(parts[2]), float(parts[3])
    except ValueError as e:
        raise XyzFormatError(f"line {lineno}: bad coordinate: {e}") from None
    return symbol.capitalize(), (x, y, z)


def parse_xyz(text: str) -> list[Structure]:
    """Parse every frame in an extended-XYZ document."""
    lines = text.splitlines()
    structures: list[Structure] = []
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        try:
            count = int(lines[i].strip())
        except ValueError:
            raise XyzFormatError(f"line {i + 1}: atom count expected, got {lines[i]!r}") from None
        if count < 1:
            raise XyzFormatError(f"line {i + 1}: atom count must be >= 1, got {count}")
        if i + 1 >= len(lines):
            raise XyzFormatError(f"line {i + 1}: frame truncated before comment line")
        comment = lines[i + 1]
        elements: list[str] = []
        coords: list[tuple[float, float, float]] = []
        for j in range(count):
            lineno = i + 2 + j
            if lineno >= len(lines):
                raise XyzFormatError(f"line {i + 1}: frame declares {count} atoms but file ends early")
            symbol, xyz = _parse_atom_line(lines[lineno], lineno + 1)
            elements.append(symbol)
            coords.append(xyz)
        structures.append(
            Structure(elements=tuple(elements), positions=np.array(coords), comment=comment)
        )
        i += 2 + count
    return structures


def read_xyz(path: str | Path) -> list[Structure]:
    return parse_xyz(Path(path).read_text(encoding="utf-8"))


def write_xyz(structures: list[Structure], path: str | Path) -> None:
    """Inverse of read_xyz; used to build test inputs."""
    out: list[str] = []
    for s in structures:
        out.append(str(s.atom_count))
        out.append(s.comment)
        for sym, (x, y, z) in zip(s.elements, s.positions):
            out.append(f"{sym} {x:.10g} {y:.10g} {z:.10g}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
