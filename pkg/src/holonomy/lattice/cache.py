"""Plain-text series cache with a sha256 integrity line, and per-prime checkpoints."""
from __future__ import annotations

import hashlib
import os
from pathlib import Path

from gmpy2 import mpq

from ..exactalg import Series


class CacheError(ValueError):
    """A cache or checkpoint file is malformed or fails its checksum."""


def default_cache_dir() -> Path:
    env = os.environ.get("HOLONOMY_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "holonomy"


def _fmt(c: mpq) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_series(series: Series, normalization: str = "chi3_over_8", variable: str = "w") -> str:
    """Serialized cache text.  Leading zero coefficients are omitted."""
    start = series.valuation()
    if start is None:
        start = series.order + 1
    data = "".join(f"{n} {_fmt(series[n])}\n" for n in range(start, series.order + 1))
    digest = hashlib.sha256(data.encode()).hexdigest()
    head = f"# variable={variable}\n# normalization={normalization}\n# order={series.order}\n"
    return head + data + f"# sha256={digest}\n"


def write_series(path: str | os.PathLike, series: Series, normalization: str = "chi3_over_8") -> None:
    text = format_series(series, normalization)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


def parse_series(text: str) -> tuple[Series, dict[str, str]]:
    """Inverse of ``format_series``; raises ``CacheError`` on any inconsistency."""
    lines = text.splitlines(keepends=True)
    header: dict[str, str] = {}
    data_lines: list[str] = []
    digest = None
    for i, line in enumerate(lines):
        s = line.rstrip("\n")
        if s.startswith("# sha256="):
            if i != len(lines) - 1:
                raise CacheError("checksum line must be last")
            digest = s.split("=", 1)[1].strip()
        elif s.startswith("#"):
            if data_lines:
                raise CacheError("header line after data")
            key, sep, val = s[1:].strip().partition("=")
            if not sep:
                raise CacheError(f"malformed header line {s!r}")
            header[key.strip()] = val.strip()
        elif s.strip():
            data_lines.append(line if line.endswith("\n") else line + "\n")
    if digest is None:
        raise CacheError("missing sha256 line")
    if hashlib.sha256("".join(data_lines).encode()).hexdigest() != digest:
        raise CacheError("sha256 mismatch: file is corrupt")
    try:
        order = int(header["order"])
    except (KeyError, ValueError) as exc:
        raise CacheError("missing or invalid order header") from exc
    coeffs = [mpq(0)] * (order + 1)
    expect = None
    for line in data_lines:
        parts = line.split()
        if len(parts) != 2:
            raise CacheError(f"malformed data line {line!r}")
        n = int(parts[0])
        if expect is not None and n != expect:
            raise CacheError(f"data lines not contiguous at {n}")
        if not 0 <= n <= order:
            raise CacheError(f"index {n} outside declared order {order}")
        try:
            coeffs[n] = mpq(parts[1])
        except ValueError as exc:
            raise CacheError(f"bad coefficient {parts[1]!r}") from exc
        expect = n + 1
    if data_lines and expect != order + 1:
        raise CacheError("data section ends before declared order")
    return Series(coeffs, order), header


def read_series(path: str | os.PathLike) -> tuple[Series, dict[str, str]]:
    return parse_series(Path(path).read_text())


class ResidueStore:
    """Per-prime residue checkpoints for a resumable grid run."""

    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)

    def _path(self, N: int, p: int) -> Path:
        return self.dir / f"chi3_N{N}" / f"p{p}.res"

    def save(self, N: int, p: int, residues: list[int]) -> None:
        body = f"{N} {p}\n" + " ".join(map(str, residues)) + "\n"
        digest = hashlib.sha256(body.encode()).hexdigest()
        path = self._path(N, p)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(body + f"# sha256={digest}\n")
        tmp.replace(path)

    def load(self, N: int) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        folder = self.dir / f"chi3_N{N}"
        if not folder.is_dir():
            return out
        for f in sorted(folder.glob("p*.res")):
            text = f.read_text()
            body, sep, tail = text.rpartition("# sha256=")
            if not sep or hashlib.sha256(body.encode()).hexdigest() != tail.strip():
                raise CacheError(f"corrupt checkpoint {f}")
            head, res = body.splitlines()[:2]
            n_str, p_str = head.split()
            vals = [int(v) for v in res.split()]
            if int(n_str) != N or len(vals) != N + 1:
                raise CacheError(f"checkpoint {f} does not match order {N}")
            out[int(p_str)] = vals
        return out
