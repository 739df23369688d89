"""Group definition files, the built-in catalog, and JSONL result logs.

Group file format::

    # comment lines start with '#'
    degree 11 order 7920
    (1,2,3,4,5,6,7,8,9,10,11)
    (3,7,11,8)(4,10,5,6)

The header may carry the flag ``images``, in which case every generator line
is a whitespace-separated list of the 1-based images of ``1..degree``.
"""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Optional, Union

from .basecodec import CodecError, decode, encode
from .group import GroupError, PermGroup, group_from_generators
from .perm import MAX_DEGREE, Permutation, PermutationError, parse_perm
from .typed import TypeDWitness, WitnessError, direct_product, verify_witness

DATA_ENV = "PGTYPED_DATA"
BUNDLED = Path(__file__).resolve().parent / "data"
MAX_NATURAL = 16


class GroupFileError(ValueError):
    pass


class LogError(ValueError):
    pass


@dataclass
class GroupFile:
    name: str
    degree: int
    generator_lines: list[str]
    expected_order: Optional[int] = None
    image_lists: bool = False

    def generators(self) -> list[Permutation]:
        out = []
        for ln in self.generator_lines:
            if self.image_lists:
                try:
                    imgs = [int(t) for t in ln.split()]
                except ValueError:
                    raise PermutationError(f"bad image list: {ln!r}") from None
                if len(imgs) != self.degree:
                    raise PermutationError(f"image list has {len(imgs)} entries, degree is {self.degree}")
                out.append(Permutation.from_images1(imgs))
            else:
                out.append(parse_perm(ln, self.degree))
        return out


_HEADER = re.compile(r"^degree\s+(\d+)(?:\s+order\s+(\d+))?(\s+images)?\s*$")


def parse_group_file(text: str, name: str = "group") -> GroupFile:
    header = None
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        if header is None:
            m = _HEADER.match(ln)
            if m is None:
                raise GroupFileError(f"line {lineno}: expected 'degree <n> [order <N>] [images]', got {ln!r}")
            header = m
            continue
        lines.append(ln)
    if header is None:
        raise GroupFileError("missing 'degree' header")
    degree = int(header.group(1))
    if not 1 <= degree <= MAX_DEGREE:
        raise GroupFileError(f"degree {degree} out of range 1..{MAX_DEGREE}")
    order = int(header.group(2)) if header.group(2) else None
    if not lines:
        lines = ["()"] if not header.group(3) else [" ".join(map(str, range(1, degree + 1)))]
    return GroupFile(name, degree, lines, order, bool(header.group(3)))


def load_group(path: Union[str, Path], seed: int = 0) -> PermGroup:
    """Read a group file and build the group; the header order is enforced."""
    path = Path(path)
    gf = parse_group_file(path.read_text(encoding="utf-8"), path.stem)
    try:
        gens = gf.generators()
    except PermutationError as e:
        raise GroupFileError(f"{path.name}: {e}") from None
    G = group_from_generators(gens, seed, name=gf.name)
    if gf.expected_order is not None and G.order != gf.expected_order:
        raise GroupError(f"{path.name}: group order {G.order} differs from stated order {gf.expected_order}")
    return G


def write_group_file(path: Union[str, Path], G: PermGroup) -> None:
    lines = [f"# {G.name}"] if G.name else []
    lines.append(f"degree {G.degree} order {G.order}")
    lines += [str(g) for g in G.generators]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- catalog ------------------------------------------------------------------

def data_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get(DATA_ENV)
    if env:
        dirs += [Path(p) for p in env.split(os.pathsep) if p]
    dirs.append(BUNDLED)
    return dirs


def bundled_names() -> list[str]:
    names = set()
    for d in data_dirs():
        if d.is_dir():
            names.update(p.stem for p in d.glob("*.grp"))
    return sorted(names)


def _natural(kind: str, n: int) -> PermGroup:
    if not 1 <= n <= MAX_NATURAL:
        raise GroupError(f"{kind}{n}: n must be in 1..{MAX_NATURAL}")
    name = f"{kind}{n}"
    if kind == "S":
        gens = [Permutation.from_cycles([[1, 2]], n), Permutation.from_cycles([range(1, n + 1)], n)] \
            if n > 1 else [Permutation.identity(1)]
        order = math.factorial(n)
    elif kind == "A":
        if n < 3:
            gens = [Permutation.identity(n)]
        else:
            long = range(1, n + 1) if n % 2 else range(2, n + 1)
            gens = [Permutation.from_cycles([[1, 2, 3]], n), Permutation.from_cycles([long], n)]
        order = max(math.factorial(n) // 2, 1)
    elif kind == "C":
        gens = [Permutation.from_cycles([range(1, n + 1)], n)]
        order = n
    else:  # dihedral of order 2n on n points
        refl = [[i, n + 1 - i] for i in range(1, n // 2 + 1) if i != n + 1 - i]
        gens = [Permutation.from_cycles([range(1, n + 1)], n), Permutation.from_cycles(refl, n)]
        order = 2 * n if n > 2 else math.factorial(n)
    return group_from_generators(gens, name=name, known_order=order)


_NATURAL = re.compile(r"^([SACD])(\d+)$")


@lru_cache(maxsize=64)
def catalog(name: str) -> PermGroup:
    """Look up ``S<n>``, ``A<n>``, ``C<n>``, ``D<n>`` (dihedral on ``n`` points),
    a group file in the data directories, or a direct product ``X×Y`` / ``XxY``."""
    name = name.strip()
    parts = re.split(r"[×x]", name)
    if len(parts) > 1:
        if any(not p for p in parts):
            raise GroupError(f"malformed product name {name!r}")
        G = catalog(parts[0])
        for p in parts[1:]:
            G = direct_product(G, catalog(p))
        G.name = "x".join(parts)
        return G
    m = _NATURAL.match(name)
    if m:
        return _natural(m.group(1), int(m.group(2)))
    for d in data_dirs():
        path = d / f"{name}.grp"
        if path.is_file():
            return load_group(path)
    raise GroupError(f"unknown group {name!r}; bundled: {', '.join(bundled_names())}")


def resolve_group(spec: str) -> PermGroup:
    """A path to a group file, or a catalog name."""
    p = Path(spec)
    if p.suffix == ".grp" or p.is_file():
        if not p.is_file():
            raise GroupError(f"no such group file: {spec}")
        return load_group(p)
    return catalog(spec)


# -- logs ---------------------------------------------------------------------

LOG_KEYS = ("timestamp", "group", "class", "algorithm", "verdict", "value",
            "witnesses", "base", "seed", "iterations", "worker", "source")
ALGORITHMS = ("exhaustive", "random", "maximal", "auto", "structconst", "quasireal")


@dataclass
class LogRecord:
    group: str
    class_name: Optional[str]
    algorithm: str
    verdict: Optional[str] = None
    value: object = None
    witnesses: Optional[dict] = None  # {"r": [...], "s": [...], "x": [...]} base images
    base: Optional[list[int]] = None
    seed: Optional[int] = None
    iterations: Optional[int] = None
    worker: Optional[int] = None
    source: Optional[str] = None
    timestamp: Optional[str] = None

    def to_dict(self) -> dict:
        d = {
            "timestamp": self.timestamp,
            "group": self.group,
            "class": self.class_name,
            "algorithm": self.algorithm,
            "verdict": self.verdict,
            "value": self.value,
            "witnesses": self.witnesses,
            "base": self.base,
            "seed": self.seed,
            "iterations": self.iterations,
            "worker": self.worker,
            "source": self.source,
        }
        assert tuple(d) == LOG_KEYS
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LogRecord":
        missing = [k for k in ("group", "class", "algorithm") if k not in d]
        if missing:
            raise LogError(f"missing keys {missing}")
        extra = set(d) - set(LOG_KEYS)
        if extra:
            raise LogError(f"unknown keys {sorted(extra)}")
        if d["algorithm"] not in ALGORITHMS:
            raise LogError(f"unknown algorithm {d['algorithm']!r}")
        return cls(d["group"], d["class"], d["algorithm"], d.get("verdict"), d.get("value"),
                   d.get("witnesses"), d.get("base"), d.get("seed"), d.get("iterations"),
                   d.get("worker"), d.get("source"), d.get("timestamp"))


def encode_witness(G: PermGroup, w: TypeDWitness) -> tuple[dict, list[int]]:
    """Base-encode ``r``, ``s`` and the conjugator under the chain base of ``G``."""
    B = G.base
    out = {"r": list(encode(G, B, w.r).images), "s": list(encode(G, B, w.s).images)}
    if w.conjugator is not None:
        out["x"] = list(encode(G, B, w.conjugator).images)
    return out, B


def decode_witness(G: PermGroup, rec: LogRecord) -> TypeDWitness:
    if not rec.witnesses or rec.base is None:
        raise LogError("record carries no witness")
    B = rec.base
    try:
        r = decode(G, B, rec.witnesses["r"])
        s = decode(G, B, rec.witnesses["s"])
        x = decode(G, B, rec.witnesses["x"]) if "x" in rec.witnesses else None
    except (KeyError, TypeError) as e:
        raise LogError(f"malformed witness: {e}") from None
    return TypeDWitness(r, s, rec.value, x)


def write_log(path: Union[str, Path], records: Iterable[LogRecord], append: bool = False) -> None:
    with open(path, "a" if append else "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict(), ensure_ascii=False, separators=(",", ":")) + "\n")


def verify_record(rec: LogRecord, G: PermGroup) -> None:
    """Decode and re-check the witness of a TypeD record; raise on any problem."""
    if rec.verdict != "TypeD":
        return
    try:
        w = decode_witness(G, rec)
    except CodecError as e:
        raise WitnessError(f"witness does not decode: {e}") from None
    verify_witness(w)
    if not all(G.contains(p) for p in (w.r, w.s)):
        raise WitnessError("witness elements are not in the group")


def read_log(
    path: Union[str, Path],
    resolve: Optional[Callable[[str], PermGroup]] = None,
) -> list[LogRecord]:
    """Parse a JSONL log.  With ``resolve``, TypeD witnesses are re-verified.

    Malformed lines raise :class:`LogError` naming the line; failed
    re-verification raises :class:`LogError` listing every bad line.
    """
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, ln in enumerate(fh, 1):
            if not ln.strip():
                continue
            try:
                d = json.loads(ln)
                if not isinstance(d, dict):
                    raise LogError("record is not an object")
                records.append((lineno, LogRecord.from_dict(d)))
            except (json.JSONDecodeError, LogError) as e:
                raise LogError(f"{path}:{lineno}: {e}") from None
    if resolve is not None:
        bad = []
        for lineno, rec in records:
            try:
                verify_record(rec, resolve(rec.group))
            except (WitnessError, LogError, GroupError) as e:
                bad.append(f"line {lineno}: {e}")
        if bad:
            raise LogError(f"{path}: re-verification failed\n" + "\n".join(bad))
    return [rec for _, rec in records]
