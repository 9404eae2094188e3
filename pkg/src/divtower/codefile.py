"""Plain-text code files.

Layout::

    n=7
    nu=2
    t= 3 3 3 1 1 1 1
    L:
    1111111
    S:
    1010101
    0110011
    0001111

Lines starting with ``#`` are comments. Blank lines are ignored. Zero rows in
``L`` (all-zero strings) are kept, since inner codes use them to mark outputs
a routine does not touch.
"""

from __future__ import annotations

from typing import Optional

from .gf2 import BitMatrix
from .ortho import CoeffVector, OrthoPair


class CodefileError(ValueError):
    def __init__(self, lineno: Optional[int], msg: str):
        where = f"line {lineno}: " if lineno else ""
        super().__init__(where + msg)
        self.lineno = lineno


def _int_field(value: str, name: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise CodefileError(lineno, f"{name} must be an integer, got {value.strip()!r}") from None


def parse_codefile(text: str, require_t: bool = True) -> OrthoPair:
    """Structural parse only; the orthogonality predicates are left to the caller.

    With ``require_t=False`` the ``t`` and ``nu`` lines may be omitted; they
    then default to all ones at level 2.
    """
    n = nu = None
    t_raw = None
    rows: dict[str, list[tuple[int, str]]] = {}
    section = None
    seen: dict[str, int] = {}
    last = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        last = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.replace(" ", "")
        if head in ("L:", "S:"):
            key = head[0]
            if key in rows:
                raise CodefileError(lineno, f"duplicate {key}: section")
            rows[key] = []
            section = key
            continue
        if "=" in line:
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in ("n", "nu", "t"):
                raise CodefileError(lineno, f"unknown field {key!r}")
            if key in seen:
                raise CodefileError(lineno, f"duplicate field {key!r} (first on line {seen[key]})")
            if section is not None:
                raise CodefileError(lineno, f"field {key!r} after matrix sections")
            seen[key] = lineno
            if key == "n":
                n = _int_field(value, "n", lineno)
            elif key == "nu":
                nu = _int_field(value, "nu", lineno)
            else:
                t_raw = (lineno, value.split())
            continue
        if section is None:
            raise CodefileError(lineno, f"unexpected line {line!r}")
        if set(line) - {"0", "1"}:
            raise CodefileError(lineno, f"not a 0/1 row: {line!r}")
        rows[section].append((lineno, line))

    if not require_t:
        if "nu" not in seen:
            seen["nu"], nu = 0, 2
        if "t" not in seen and "n" in seen:
            seen["t"], t_raw = 0, (0, ["1"] * n)
    for key in ("n", "nu", "t"):
        if key not in seen:
            raise CodefileError(last + 1, f"missing field {key!r}")
    for key in ("L", "S"):
        if key not in rows:
            raise CodefileError(last + 1, f"missing {key}: section")
    if n < 1:
        raise CodefileError(seen["n"], f"n must be positive, got {n}")
    if nu < 1:
        raise CodefileError(seen["nu"], f"nu must be >= 1, got {nu}")
    t_line, t_tokens = t_raw
    if len(t_tokens) != n:
        raise CodefileError(t_line, f"t has {len(t_tokens)} entries, expected n = {n}")
    t_vals = []
    for i, tok in enumerate(t_tokens):
        try:
            x = int(tok)
        except ValueError:
            raise CodefileError(t_line, f"t[{i}] = {tok!r} is not an integer") from None
        if x % 2 == 0:
            raise CodefileError(t_line, f"t[{i}] = {x} is even; coefficients must be odd")
        t_vals.append(x)
    mats = {}
    for key in ("L", "S"):
        for lineno, r in rows[key]:
            if len(r) != n:
                raise CodefileError(lineno, f"{key} row has {len(r)} columns, expected n = {n}")
        mats[key] = BitMatrix.from_rows([r for _, r in rows[key]], n)
    return OrthoPair(mats["L"], mats["S"], CoeffVector(tuple(t_vals), nu))


def format_codefile(pair: OrthoPair) -> str:
    lines = [f"n={pair.n}", f"nu={pair.nu}", "t= " + " ".join(str(x) for x in pair.t.values), "L:"]
    lines += pair.L.to_strings()
    lines.append("S:")
    lines += pair.S.to_strings()
    return "\n".join(lines) + "\n"


def read_codefile(path) -> OrthoPair:
    with open(path) as fh:
        return parse_codefile(fh.read())


def write_codefile(path, pair: OrthoPair) -> None:
    with open(path, "w") as fh:
        fh.write(format_codefile(pair))
