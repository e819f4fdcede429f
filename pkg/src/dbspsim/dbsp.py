"""Distance-based sporadic prefetcher.

The prefetcher discovers correlated but non-sequential read patterns from the
request stream alone (it never inspects cache state). Per-key arrival
histories accumulate in two bounded tables: young histories in the record
table until they reach l_min stamps, then in the compute table until l_max.
Whenever the compute table fills to nr_c rows, association mining compares
each row's history against the next l_a rows; pairs whose equal-length
histories are close (small summed timestamp distance, optionally normalized
by history length) are stored as (key, degree=1/distance) entries in the
prefetch table, bounded to the top s_c per source key. A later arrival of a
source key returns its container so the caller can prefetch the associated
keys.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

# Finite sentinel for the degree of two identical histories (distance zero);
# strictly above any achievable 1/distance.
DEGREE_MAX = float(2**63)


@dataclass(frozen=True)
class DbspConfig:
    nr_r: int  # record table rows
    nr_c: int  # compute table rows
    nr_p: int  # prefetch table rows
    l_a: int  # mining lookahead window
    s_c: int  # associations kept per prefetch row
    l_min: int = 2
    l_max: int = 8
    normalised: bool = False  # length-normalized distance instead of plain Manhattan

    def __post_init__(self):
        if min(self.nr_r, self.nr_c, self.nr_p) < 1:
            raise ValueError("table row capacities must be positive")
        if self.l_a < 1:
            raise ValueError("lookahead l_a must be positive")
        if self.s_c < 1:
            raise ValueError("container size s_c must be positive")
        if self.l_min < 2:
            raise ValueError("l_min must be at least 2: a key must repeat before it can be mined")
        if self.l_max <= self.l_min:
            raise ValueError("l_max must exceed l_min")


@dataclass
class RequestHistory:
    key: int
    stamps: list[int]


class HistoryTable:
    """Bounded key -> arrival-history map over a recency/insertion list.

    With refresh_on_update=True (record table) appending a stamp moves the
    row to the most-recent end, and inserting into a full table evicts the
    least recently updated row. Without it (compute table) rows keep pure
    insertion order, which is what mining windows iterate over; the compute
    table never overflows because it is cleared whenever it fills.
    """

    def __init__(self, capacity: int, refresh_on_update: bool = False):
        if capacity < 1:
            raise ValueError("history table capacity must be positive")
        self.capacity = capacity
        self.refresh_on_update = refresh_on_update
        self._rows: OrderedDict[int, RequestHistory] = OrderedDict()

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, key: int) -> bool:
        return key in self._rows

    def get(self, key: int) -> RequestHistory | None:
        return self._rows.get(key)

    def rows(self) -> list[RequestHistory]:
        """Rows in insertion (compute table) or recency (record table) order."""
        return list(self._rows.values())

    def insert(self, key: int, stamps: list[int]) -> None:
        """Insert a row at the most-recent end, evicting the oldest if full."""
        if key in self._rows:
            raise ValueError(f"key {key} already present")
        if len(self._rows) == self.capacity:
            self._rows.popitem(last=False)
        self._rows[key] = RequestHistory(key=key, stamps=stamps)

    def append_stamp(self, key: int, ts: int) -> RequestHistory:
        row = self._rows[key]
        row.stamps.append(ts)
        if self.refresh_on_update:
            self._rows.move_to_end(key)
        return row

    def pop(self, key: int) -> RequestHistory:
        return self._rows.pop(key)

    def clear(self) -> None:
        self._rows.clear()


@dataclass
class AssocEntry:
    assoc_key: int
    degree: float
    seq: int  # insertion sequence number; larger = inserted later


class AssocContainer:
    """Bounded degree-ordered association set with key lookup.

    Overflow evicts the minimum-degree entry; on a degree tie the oldest
    entry (smallest seq) goes. Re-inserting a present key replaces its degree
    and refreshes its seq.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("container capacity must be positive")
        self.capacity = capacity
        self._entries: dict[int, AssocEntry] = {}
        self._seq = 0

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: int) -> bool:
        return key in self._entries

    def degree_of(self, key: int) -> float | None:
        entry = self._entries.get(key)
        return entry.degree if entry else None

    def insert(self, key: int, degree: float) -> None:
        if degree <= 0:
            raise ValueError("only positive degrees are stored")
        self._entries.pop(key, None)
        self._seq += 1
        self._entries[key] = AssocEntry(assoc_key=key, degree=degree, seq=self._seq)
        if len(self._entries) > self.capacity:
            victim = min(self._entries.values(), key=lambda e: (e.degree, e.seq))
            del self._entries[victim.assoc_key]

    def snapshot(self) -> list[AssocEntry]:
        """Entries by descending degree (older first among equal degrees)."""
        return sorted(self._entries.values(), key=lambda e: (-e.degree, e.seq))

    def as_dict(self) -> dict[int, float]:
        return {k: e.degree for k, e in self._entries.items()}


class PrefetchTable:
    """Bounded key -> AssocContainer map; least recently used row evicted."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("prefetch table capacity must be positive")
        self.capacity = capacity
        self._rows: OrderedDict[int, AssocContainer] = OrderedDict()

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, key: int) -> bool:
        return key in self._rows

    def find(self, key: int) -> AssocContainer | None:
        """Look up a row, refreshing its recency on a hit."""
        container = self._rows.get(key)
        if container is not None:
            self._rows.move_to_end(key)
        return container

    def row_for(self, key: int, s_c: int) -> AssocContainer:
        """Get or create the container for key, refreshing its recency."""
        container = self._rows.get(key)
        if container is None:
            if len(self._rows) == self.capacity:
                self._rows.popitem(last=False)
            container = AssocContainer(capacity=s_c)
            self._rows[key] = container
        else:
            self._rows.move_to_end(key)
        return container

    def items(self) -> list[tuple[int, AssocContainer]]:
        return list(self._rows.items())


def get_association_degree(h_a, h_b, normalised: bool) -> float:
    """Degree of association between two arrival-time histories.

    Zero when the histories differ in length or the first history starts
    later than the second (association is directional). Otherwise the degree
    is the inverse of the summed absolute timestamp distance, divided by the
    history length first when normalised; identical histories map to
    DEGREE_MAX.
    """
    if len(h_a) != len(h_b) or not h_a or h_a[0] > h_b[0]:
        return 0.0
    distance = sum(abs(a - b) for a, b in zip(h_a, h_b))
    if normalised:
        distance = distance / len(h_a)
    if distance == 0:
        return DEGREE_MAX
    return 1.0 / distance


def insert_in_container(container: AssocContainer, key: int, degree: float) -> None:
    """Insert an association, evicting the weakest entry past capacity."""
    container.insert(key, degree)


def compute_associated_requests(
    ctable: HistoryTable,
    ptable: PrefetchTable,
    normalised: bool,
    s_c: int,
    l_a: int,
) -> None:
    """Mine the compute table into the prefetch table.

    Each row is compared with the next l_a rows in insertion order; positive
    degrees are stored in the source key's container.
    """
    rows = ctable.rows()
    last = len(rows) - 1
    for i, src in enumerate(rows):
        for j in range(i + 1, min(i + l_a, last) + 1):
            degree = get_association_degree(src.stamps, rows[j].stamps, normalised)
            if degree > 0:
                insert_in_container(ptable.row_for(src.key, s_c), rows[j].key, degree)


class DbspPrefetcher:
    """Streaming prefetcher state: record, compute, and prefetch tables."""

    def __init__(self, config: DbspConfig):
        if config.l_a > config.nr_c:
            raise ValueError("lookahead l_a cannot exceed the compute table size nr_c")
        self.config = config
        self.rtable = HistoryTable(config.nr_r, refresh_on_update=True)
        self.ctable = HistoryTable(config.nr_c)
        self.ptable = PrefetchTable(config.nr_p)
        self._last_ts: int | None = None

    def on_request(self, key: int, ts: int, pref_flag: bool = True) -> list[AssocEntry] | None:
        """Feed one read; return the key's associations (degree-descending) if any.

        With pref_flag False the tables still update but nothing is returned
        and the prefetch table row's recency is left alone.
        """
        self.prefetch_engine(key, ts)
        if not pref_flag:
            return None
        container = self.ptable.find(key)
        if container is None:
            return None
        return container.snapshot()

    def prefetch_engine(self, key: int, ts: int) -> None:
        """Accumulate one arrival and run mining when the compute table fills."""
        if self._last_ts is not None and ts <= self._last_ts:
            raise ValueError(f"timestamps must be strictly increasing, got {ts} after {self._last_ts}")
        self._last_ts = ts

        if key in self.rtable:
            row = self.rtable.append_stamp(key, ts)
            if len(row.stamps) == self.config.l_min:
                self.rtable.pop(key)
                self.ctable.insert(key, row.stamps)
        elif key in self.ctable:
            if len(self.ctable.get(key).stamps) == self.config.l_max:
                self.ctable.pop(key)
            else:
                self.ctable.append_stamp(key, ts)
        else:
            self.rtable.insert(key, [ts])

        if len(self.ctable) == self.config.nr_c:
            compute_associated_requests(
                self.ctable,
                self.ptable,
                self.config.normalised,
                self.config.s_c,
                self.config.l_a,
            )
            self.ctable.clear()
