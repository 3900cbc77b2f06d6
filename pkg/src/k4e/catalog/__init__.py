"""Transcribed designs: base blocks plus development rules, verified on load.

Data files live in ``data/`` (one per source lemma or example). Format::

    [entry ID]
    family: mgdp | gdd | igdd1 | igdd2 | hgdd
    type: 2^(14,7)
    points: 28
    groups: mod 14              # groups {i + 14 j}
    hole: none | fat groups 0 1 2 | fat 0..6 14..20 | transversal 0..17
    leave: E2_2                 # mgdp entries only
    perm: (0 1 2)(3 4 5)        # optional; blocks are then base blocks
    derive: OTHER_ID            # optional; start from another entry's blocks
    include: OTHER_ID map v0 v1 ...   # add another entry's blocks relabelled
    replace: 2 3 4 9 -> 3 9 2 4 # swap one block for another
    blocks:
    a b c d                     # block [a, b, c-d]
    a b c d *2                  # orbit length override

Ranges ``a..b`` are inclusive. ``#`` starts a comment.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator

from ..errors import CorruptEntry, UnknownId
from ..model import Block, Design, DevelopmentRule, HolePattern, LeaveClass, develop
from ..verify import Report, verify_family, verify_mgdp

FAMILIES = ("mgdp", "gdd", "igdd1", "igdd2", "hgdd")


@dataclass
class CatalogEntry:
    id: str
    family: str
    descriptor: str
    source: str
    leave: LeaveClass | None = None
    points: int = 0
    groups: str = ""
    hole: str = ""
    perm: str = ""
    derive: str = ""
    includes: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    replaces: list[tuple[Block, Block]] = field(default_factory=list)
    blocks: list[tuple[Block, int | None]] = field(default_factory=list)

    @property
    def label(self) -> str:
        base = f"{self.family.upper()} {self.descriptor}"
        return f"{base}, leave {self.leave.tag}" if self.leave is not None else base


def _ints(text: str) -> list[int]:
    out: list[int] = []
    for tok in text.split():
        if ".." in tok:
            lo, hi = tok.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(tok))
    return out


_CYCLE = re.compile(r"\(([^()]*)\)")


def _cycles(text: str) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(_ints(m.group(1))) for m in _CYCLE.finditer(text))


def _block_line(line: str, where: str) -> tuple[Block, int | None]:
    parts = line.split()
    override = None
    if parts and parts[-1].startswith("*"):
        override = int(parts.pop()[1:])
    if len(parts) != 4:
        raise CorruptEntry(f"{where}: block line needs four ids: {line!r}")
    a, b, c, d = (int(x) for x in parts)
    return Block(a, b, c, d), override


def parse(text: str, source: str) -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    cur: CatalogEntry | None = None
    in_blocks = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        where = f"{source}:{lineno}"
        if not line:
            continue
        m = re.fullmatch(r"\[entry\s+(\S+)\]", line)
        if m:
            cur = CatalogEntry(m.group(1), "", "", source)
            entries.append(cur)
            in_blocks = False
            continue
        if cur is None:
            raise CorruptEntry(f"{where}: content before the first entry header")
        if in_blocks and ":" not in line:
            cur.blocks.append(_block_line(line, where))
            continue
        key, _, val = line.partition(":")
        key, val = key.strip(), val.strip()
        in_blocks = False
        if key == "family":
            if val not in FAMILIES:
                raise CorruptEntry(f"{where}: unknown family {val!r}")
            cur.family = val
        elif key == "type":
            cur.descriptor = val
        elif key == "points":
            cur.points = int(val)
        elif key == "groups":
            cur.groups = val
        elif key == "hole":
            cur.hole = val
        elif key == "leave":
            cur.leave = LeaveClass.parse(val)
        elif key == "perm":
            cur.perm = val
        elif key == "derive":
            cur.derive = val
        elif key == "include":
            ref, _, rest = val.partition(" map ")
            cur.includes.append((ref.strip(), tuple(_ints(rest))))
        elif key == "replace":
            old, _, new = val.partition("->")
            cur.replaces.append((_block_line(old, where)[0].canonical(), _block_line(new, where)[0].canonical()))
        elif key == "blocks":
            in_blocks = True
        else:
            raise CorruptEntry(f"{where}: unknown key {key!r}")
    return entries


def _groups(spec: str, points: int) -> tuple[tuple[int, ...], ...]:
    kind, _, arg = spec.partition(" ")
    if kind == "mod":
        k = int(arg)
        if points % k:
            raise CorruptEntry(f"{points} points do not split into {k} residue classes")
        return tuple(tuple(range(i, points, k)) for i in range(k))
    if kind == "explicit":
        return tuple(tuple(_ints(part)) for part in arg.split("|"))
    raise CorruptEntry(f"unknown group layout {spec!r}")


def _holes(spec: str, groups) -> HolePattern:
    words = spec.split(None, 1)
    kind = words[0]
    rest = words[1] if len(words) > 1 else ""
    if kind == "none":
        return HolePattern()
    if kind == "fat" and rest.startswith("groups"):
        return HolePattern.fat(v for i in _ints(rest[len("groups"):]) for v in groups[i])
    if kind in ("fat", "transversal"):
        return HolePattern(kind, (frozenset(_ints(rest)),))
    if kind == "multi":
        return HolePattern.multi(_ints(part) for part in rest.split("|"))
    raise CorruptEntry(f"unknown hole spec {spec!r}")


class Catalog:
    """Registry of every transcribed entry; designs are built lazily and cached."""

    def __init__(self, sources: Iterable[tuple[str, str]] | None = None):
        """Load ``(name, text)`` sources; by default the packaged data files."""
        self._entries: dict[str, CatalogEntry] = {}
        self._designs: dict[str, Design] = {}
        self._lock = threading.RLock()
        if sources is None:
            data = resources.files(__package__).joinpath("data")
            paths = sorted((p for p in data.iterdir() if p.name.endswith(".txt")), key=lambda p: p.name)
            sources = [(p.name, p.read_text()) for p in paths]
        for name, text in sources:
            for entry in parse(text, name):
                if entry.id in self._entries:
                    raise CorruptEntry(f"duplicate catalog id {entry.id}")
                self._entries[entry.id] = entry

    def ids(self) -> list[str]:
        return sorted(self._entries, key=_id_key)

    def entries(self) -> Iterator[CatalogEntry]:
        for i in self.ids():
            yield self._entries[i]

    def entry(self, id: str) -> CatalogEntry:
        try:
            return self._entries[id]
        except KeyError:
            raise UnknownId(f"no catalog entry {id!r}") from None

    def __contains__(self, id: str) -> bool:
        return id in self._entries

    def get(self, id: str) -> Design:
        with self._lock:
            if id not in self._designs:
                entry = self.entry(id)
                design = self._build(entry)
                rep = self.check(entry, design)
                if not rep.ok:
                    raise CorruptEntry(f"catalog entry {id} fails verification: {rep.summary()}")
                self._designs[id] = design
            return self._designs[id]

    @staticmethod
    def check(entry: CatalogEntry, design: Design) -> Report:
        if entry.family == "mgdp":
            return verify_mgdp(design, entry.leave)
        return verify_family(design, entry.family)

    def _build(self, e: CatalogEntry) -> Design:
        if e.derive:
            base = self.get(e.derive)
            groups, holes, blocks = base.groups, base.holes, list(base.blocks)
            if e.groups:
                groups = _groups(e.groups, e.points or base.n_points)
            if e.hole:
                holes = _holes(e.hole, groups)
        else:
            if not (e.points and e.groups):
                raise CorruptEntry(f"{e.id}: needs points and groups")
            groups = _groups(e.groups, e.points)
            holes = _holes(e.hole or "none", groups)
            blocks = []
        n = sum(len(G) for G in groups)
        if e.perm:
            rule = DevelopmentRule(n, _cycles(e.perm), tuple((b, k) for b, k in e.blocks))
            blocks.extend(develop(rule))
        else:
            if any(k is not None for _, k in e.blocks):
                raise CorruptEntry(f"{e.id}: orbit overrides need a permutation")
            blocks.extend(b.canonical() for b, _ in e.blocks)
        for ref, mapping in e.includes:
            other = self.get(ref)
            if len(mapping) != other.n_points:
                raise CorruptEntry(f"{e.id}: map for {ref} has {len(mapping)} entries, need {other.n_points}")
            blocks.extend(b.relabel(mapping) for b in other.blocks)
        for old, new in e.replaces:
            try:
                blocks.remove(old)
            except ValueError:
                raise CorruptEntry(f"{e.id}: block {old} to replace is absent") from None
            blocks.append(new)
        return Design.build(groups, blocks, holes, e.descriptor)


def _id_key(id: str):
    head, _, tail = id.partition("-")
    kind = re.match(r"[a-z]+", head).group(0)
    nums = tuple(int(x) for x in re.findall(r"\d+", head))
    tail_key = tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", tail))
    return (kind != "ex", nums, tail_key)


_CATALOG: Catalog | None = None
_CATALOG_LOCK = threading.Lock()


def catalog() -> Catalog:
    global _CATALOG
    with _CATALOG_LOCK:
        if _CATALOG is None:
            _CATALOG = Catalog()
        return _CATALOG


def list_entries() -> list[tuple[str, str]]:
    cat = catalog()
    return [(e.id, e.label) for e in cat.entries()]


def get(id: str) -> Design:
    return catalog().get(id)


def entry(id: str) -> CatalogEntry:
    return catalog().entry(id)


def find_mgdp(g: int, n: int, leave: LeaveClass) -> str | None:
    """Id of a transcribed MGDP of type g^n with the given leave, if any."""
    want = f"{g}^{n}"
    for e in catalog().entries():
        if e.family == "mgdp" and e.descriptor == want and e.leave is leave:
            return e.id
    return None


def find(family: str, descriptor: str) -> str | None:
    for e in catalog().entries():
        if e.family == family and e.descriptor == descriptor:
            return e.id
    return None
