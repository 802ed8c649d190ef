"""Catalog ingestion: Netflix CSV and IMDb TSV dumps into normalized records.

Both parsers are tolerant: malformed rows are skipped and counted in an
:class:`IngestReport`, never fatal. Gzip-compressed inputs are detected by
magic bytes. Parsing is a pure function of the input bytes, so identical
streams always yield identical record lists.
"""

from __future__ import annotations

import csv
import gzip
import io
import json
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum
from typing import IO, Iterable, Iterator, Union

from .errors import MissingColumnError

Source = Union[str, "os.PathLike[str]", IO]

YEAR_MIN = 1870
YEAR_MAX = 2100

GZIP_MAGIC = b"\x1f\x8b"


class TitleKind(str, Enum):
    MOVIE = "movie"
    TV_SHOW = "tv_show"


class PersonRole(str, Enum):
    ACTOR = "actor"
    DIRECTOR = "director"


@dataclass(frozen=True)
class TitleRecord:
    """One normalized catalog entry."""

    title_id: str
    title: str
    kind: TitleKind
    release_year: int | None
    directors: tuple[str, ...]
    cast: tuple[str, ...]
    country: str | None = None
    language_hint: str | None = None
    rating: str | None = None
    date_added: date | None = None


@dataclass(frozen=True)
class PersonRecord:
    """A person joined from IMDb name.basics; keyed by nconst."""

    person_id: str
    name: str
    roles: frozenset[PersonRole]


@dataclass(frozen=True)
class SkipEvent:
    """One skipped input row, with its physical line number and reason."""

    line: int
    reason: str


@dataclass
class IngestReport:
    """Accounting for one parse: every data row is a record, a skip, or
    (IMDb only) filtered out by the title-kind filter."""

    source: str
    rows: int = 0
    skipped: list[SkipEvent] = field(default_factory=list)
    counters: dict[str, int] = field(default_factory=dict)

    def skip(self, line: int, reason: str) -> None:
        self.skipped.append(SkipEvent(line, reason))

    def bump(self, key: str, by: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + by


@dataclass
class IngestResult:
    records: list[TitleRecord]
    report: IngestReport


@dataclass
class ImdbResult:
    titles: list[TitleRecord]
    persons: list[PersonRecord]
    report: IngestReport


def normalize_name(raw: str) -> str:
    """Trim and collapse internal whitespace runs to single spaces.

    No case folding: names differing in case stay distinct.
    """
    return " ".join(raw.split())


@contextmanager
def _open_text(source: Source) -> Iterator[IO[str]]:
    """Open ``source`` as a UTF-8 text stream, transparently gunzipping.

    Accepts a filesystem path, an existing text stream (used as-is, not
    closed), or a binary stream (sniffed for the gzip magic).
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as raw:
            if raw.read(2) == GZIP_MAGIC:
                raw.seek(0)
                with gzip.open(raw, "rt", encoding="utf-8-sig", newline="") as fh:
                    yield fh
            else:
                raw.seek(0)
                wrapper = io.TextIOWrapper(raw, encoding="utf-8-sig", newline="")
                try:
                    yield wrapper
                finally:
                    wrapper.detach()
        return
    if isinstance(source, io.TextIOBase) or hasattr(source, "encoding"):
        yield source
        return
    # Binary stream: sniff the first two bytes without consuming them.
    if hasattr(source, "peek"):
        head = source.peek(2)[:2]
    else:
        pos = source.tell()
        head = source.read(2)
        source.seek(pos)
    if head == GZIP_MAGIC:
        with gzip.open(source, "rt", encoding="utf-8-sig", newline="") as fh:
            yield fh
    else:
        wrapper = io.TextIOWrapper(source, encoding="utf-8-sig", newline="")
        try:
            yield wrapper
        finally:
            wrapper.detach()


def _split_people(cell: str) -> tuple[str, ...]:
    """Split a comma-separated people cell, normalize, drop empties, dedupe."""
    out: list[str] = []
    seen: set[str] = set()
    for part in cell.split(","):
        name = normalize_name(part)
        if name and name not in seen:
            seen.add(name)
            out.append(name)
    return tuple(out)


def _clean_year(value: str | None) -> int | None:
    if not value:
        return None
    try:
        year = int(value.strip())
    except ValueError:
        return None
    if year < YEAR_MIN or year > YEAR_MAX:
        return None
    return year


# ---------------------------------------------------------------------------
# Netflix catalog CSV
# ---------------------------------------------------------------------------

NETFLIX_REQUIRED = ("show_id", "type", "title", "director", "cast", "release_year")

_NETFLIX_KINDS = {"Movie": TitleKind.MOVIE, "TV Show": TitleKind.TV_SHOW}


def parse_netflix(source: Source) -> IngestResult:
    """Parse a Kaggle-schema ``netflix_titles.csv`` into TitleRecords.

    One record per data row; ``cast``/``director`` cells are comma-split and
    trimmed; rows with a bad arity, an unknown type, or a duplicate show_id
    are skipped and counted.
    """
    report = IngestReport(source="netflix")
    records: list[TitleRecord] = []
    with _open_text(source) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise MissingColumnError("netflix", list(NETFLIX_REQUIRED))
        col = {name.strip(): i for i, name in enumerate(header)}
        missing = [c for c in NETFLIX_REQUIRED if c not in col]
        if missing:
            raise MissingColumnError("netflix", missing)
        seen_ids: set[str] = set()
        while True:
            try:
                row = next(reader)
            except StopIteration:
                break
            except csv.Error as exc:
                report.rows += 1
                report.skip(reader.line_num, f"csv parse failure: {exc}")
                continue
            report.rows += 1
            if len(row) != len(header):
                report.skip(reader.line_num, f"row arity {len(row)} != {len(header)}")
                continue
            title_id = row[col["show_id"]].strip()
            if not title_id:
                report.skip(reader.line_num, "empty show_id")
                continue
            if title_id in seen_ids:
                report.skip(reader.line_num, f"duplicate show_id {title_id}")
                continue
            kind = _NETFLIX_KINDS.get(row[col["type"]].strip())
            if kind is None:
                report.skip(reader.line_num, f"unknown type {row[col['type']]!r}")
                continue
            seen_ids.add(title_id)
            records.append(
                TitleRecord(
                    title_id=title_id,
                    title=row[col["title"]].strip(),
                    kind=kind,
                    release_year=_clean_year(row[col["release_year"]]),
                    directors=_split_people(row[col["director"]]),
                    cast=_split_people(row[col["cast"]]),
                    country=_first_country(_cell(row, col, "country")),
                    language_hint=None,
                    rating=_cell(row, col, "rating") or None,
                    date_added=_parse_date_added(_cell(row, col, "date_added")),
                )
            )
    return IngestResult(records, report)


def _cell(row: list[str], col: dict[str, int], name: str) -> str:
    idx = col.get(name)
    return row[idx].strip() if idx is not None else ""


def _first_country(cell: str) -> str | None:
    for part in cell.split(","):
        part = part.strip()
        if part:
            return part
    return None


def _parse_date_added(cell: str) -> date | None:
    if not cell:
        return None
    try:
        return datetime.strptime(cell, "%B %d, %Y").date()
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# IMDb non-commercial TSV dumps
# ---------------------------------------------------------------------------

IMDB_NULL = r"\N"

BASICS_REQUIRED = ("tconst", "titleType", "primaryTitle", "startYear")
PRINCIPALS_REQUIRED = ("tconst", "ordering", "nconst", "category")
NAMES_REQUIRED = ("nconst", "primaryName")

# IMDb titleType values mapped into the two catalog kinds; everything else
# (episodes, shorts, video games, ...) is filtered out.
KIND_BY_TITLE_TYPE = {
    "movie": TitleKind.MOVIE,
    "tvMovie": TitleKind.MOVIE,
    "tvSeries": TitleKind.TV_SHOW,
    "tvMiniSeries": TitleKind.TV_SHOW,
}

CAST_CATEGORIES = frozenset({"actor", "actress"})

TitleKindFilter = Union[frozenset, set, None]


def _tsv_reader(fh: IO[str]) -> Iterator[list[str]]:
    return csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)


def _null(value: str) -> str | None:
    value = value.strip()
    return None if value == IMDB_NULL or not value else value


def _id_key(raw: str):
    """Compact key for tconst/nconst ids (int for the canonical tt/nm form)."""
    if len(raw) > 2 and raw[2:].isdigit():
        return int(raw[2:])
    return raw


def parse_imdb(
    basics: Source,
    principals: Source,
    names: Source,
    kinds: TitleKindFilter = None,
) -> ImdbResult:
    """Join title.basics, title.principals and name.basics into records.

    Only principals rows with category actor/actress populate ``cast``
    (ordered by the ``ordering`` column); category director populates
    ``directors``. Cast entries carry the nconst as the person key; the
    returned PersonRecords map nconst to primaryName. Rows referencing an
    unknown tconst/nconst are counted as dangling and skipped.
    """
    wanted = frozenset(kinds) if kinds else frozenset(TitleKind)
    report = IngestReport(source="imdb")

    # Pass 1: title.basics -> kept titles (+ id set for dangling detection).
    kept: dict[object, dict] = {}
    kept_order: list[object] = []
    all_title_ids: set[object] = set()
    with _open_text(basics) as fh:
        reader = _tsv_reader(fh)
        header = next(reader, None)
        if header is None:
            raise MissingColumnError("title.basics", list(BASICS_REQUIRED))
        col = {name.strip(): i for i, name in enumerate(header)}
        missing = [c for c in BASICS_REQUIRED if c not in col]
        if missing:
            raise MissingColumnError("title.basics", missing)
        for row in reader:
            report.rows += 1
            if len(row) != len(header):
                report.skip(reader.line_num, f"row arity {len(row)} != {len(header)}")
                continue
            tconst = row[col["tconst"]].strip()
            if not tconst:
                report.skip(reader.line_num, "empty tconst")
                continue
            key = _id_key(tconst)
            all_title_ids.add(key)
            kind = KIND_BY_TITLE_TYPE.get(row[col["titleType"]].strip())
            if kind is None or kind not in wanted:
                report.bump("basics_filtered")
                continue
            if key in kept:
                report.skip(reader.line_num, f"duplicate tconst {tconst}")
                continue
            kept[key] = {
                "tconst": tconst,
                "title": (_null(row[col["primaryTitle"]]) or "").strip(),
                "kind": kind,
                "year": _clean_year(_null(row[col["startYear"]])),
                "cast": [],  # (ordering, nconst key) pairs
                "directors": [],
            }
            kept_order.append(key)
    report.bump("basics_kept", len(kept))

    # Pass 2: title.principals -> cast/director entries per kept title.
    needed_people: set[object] = set()
    roles: dict[object, set[PersonRole]] = {}
    with _open_text(principals) as fh:
        reader = _tsv_reader(fh)
        header = next(reader, None)
        if header is None:
            raise MissingColumnError("title.principals", list(PRINCIPALS_REQUIRED))
        col = {name.strip(): i for i, name in enumerate(header)}
        missing = [c for c in PRINCIPALS_REQUIRED if c not in col]
        if missing:
            raise MissingColumnError("title.principals", missing)
        for row in reader:
            report.bump("principals_rows")
            if len(row) != len(header):
                report.bump("principals_bad_arity")
                continue
            tkey = _id_key(row[col["tconst"]].strip())
            if tkey not in all_title_ids:
                report.bump("principals_dangling_title")
                continue
            meta = kept.get(tkey)
            if meta is None:
                continue  # title filtered out by kind, not an error
            category = row[col["category"]].strip()
            if category not in CAST_CATEGORIES and category != "director":
                continue
            nconst = row[col["nconst"]].strip()
            if not nconst:
                report.bump("principals_dangling_person")
                continue
            nkey = _id_key(nconst)
            needed_people.add(nkey)
            try:
                ordering = int(row[col["ordering"]])
            except ValueError:
                ordering = 1 << 30
            if category in CAST_CATEGORIES:
                meta["cast"].append((ordering, nkey, nconst))
                roles.setdefault(nkey, set()).add(PersonRole.ACTOR)
            else:
                meta["directors"].append((ordering, nkey, nconst))
                roles.setdefault(nkey, set()).add(PersonRole.DIRECTOR)

    # Pass 3: name.basics -> primaryName for the people we actually need.
    person_names: dict[object, str] = {}
    with _open_text(names) as fh:
        reader = _tsv_reader(fh)
        header = next(reader, None)
        if header is None:
            raise MissingColumnError("name.basics", list(NAMES_REQUIRED))
        col = {name.strip(): i for i, name in enumerate(header)}
        missing = [c for c in NAMES_REQUIRED if c not in col]
        if missing:
            raise MissingColumnError("name.basics", missing)
        for row in reader:
            report.bump("names_rows")
            if len(row) != len(header):
                report.bump("names_bad_arity")
                continue
            nkey = _id_key(row[col["nconst"]].strip())
            if nkey not in needed_people:
                continue
            name = normalize_name(row[col["primaryName"]])
            if name:
                person_names[nkey] = name

    # Assembly: resolve entries, count dangling person references.
    titles: list[TitleRecord] = []
    persons: list[PersonRecord] = []
    persons_seen: set[object] = set()

    def _resolve(entries: list, as_ids: bool) -> tuple[str, ...]:
        out: list[str] = []
        seen: set[object] = set()
        for _, nkey, nconst in sorted(entries, key=lambda e: (e[0], e[2])):
            if nkey in seen:
                continue
            name = person_names.get(nkey)
            if name is None:
                report.bump("dangling_person_refs")
                continue
            seen.add(nkey)
            out.append(nconst if as_ids else name)
            if nkey not in persons_seen:
                persons_seen.add(nkey)
                persons.append(
                    PersonRecord(
                        person_id=nconst,
                        name=name,
                        roles=frozenset(roles.get(nkey, set())),
                    )
                )
        return tuple(out)

    for key in kept_order:
        meta = kept[key]
        # Cast keys are nconsts (the stable IMDb identity); directors are
        # resolved to display names, mirroring the Netflix side.
        cast = _resolve(meta["cast"], as_ids=True)
        directors = _resolve(meta["directors"], as_ids=False)
        titles.append(
            TitleRecord(
                title_id=meta["tconst"],
                title=meta["title"],
                kind=meta["kind"],
                release_year=meta["year"],
                directors=directors,
                cast=cast,
                country=None,
                language_hint=None,
                rating=None,
                date_added=None,
            )
        )
    return ImdbResult(titles, persons, report)


def person_name_map(persons: Iterable[PersonRecord]) -> dict[str, str]:
    """person_id -> display name, for graph labeling."""
    return {p.person_id: p.name for p in persons}


# ---------------------------------------------------------------------------
# Canonical JSON Lines serialization
# ---------------------------------------------------------------------------


def record_to_json(rec: TitleRecord) -> str:
    payload = {
        "title_id": rec.title_id,
        "title": rec.title,
        "kind": rec.kind.value,
        "release_year": rec.release_year,
        "directors": list(rec.directors),
        "cast": list(rec.cast),
        "country": rec.country,
        "language_hint": rec.language_hint,
        "rating": rec.rating,
        "date_added": rec.date_added.isoformat() if rec.date_added else None,
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def record_from_json(line: str) -> TitleRecord:
    payload = json.loads(line)
    added = payload.get("date_added")
    return TitleRecord(
        title_id=payload["title_id"],
        title=payload["title"],
        kind=TitleKind(payload["kind"]),
        release_year=payload["release_year"],
        directors=tuple(payload["directors"]),
        cast=tuple(payload["cast"]),
        country=payload.get("country"),
        language_hint=payload.get("language_hint"),
        rating=payload.get("rating"),
        date_added=date.fromisoformat(added) if added else None,
    )


def write_records_jsonl(path: str | os.PathLike, records: Iterable[TitleRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(record_to_json(rec))
            fh.write("\n")


def read_records_jsonl(path: str | os.PathLike) -> list[TitleRecord]:
    out = []
    with _open_text(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(record_from_json(line))
    return out


def write_persons_jsonl(path: str | os.PathLike, persons: Iterable[PersonRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in persons:
            payload = {
                "person_id": p.person_id,
                "name": p.name,
                "roles": sorted(r.value for r in p.roles),
            }
            fh.write(json.dumps(payload, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")


def read_persons_jsonl(path: str | os.PathLike) -> list[PersonRecord]:
    out = []
    with _open_text(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            payload = json.loads(line)
            out.append(
                PersonRecord(
                    person_id=payload["person_id"],
                    name=payload["name"],
                    roles=frozenset(PersonRole(r) for r in payload["roles"]),
                )
            )
    return out
