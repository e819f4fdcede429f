"""MSR-format I/O trace ingestion and synthetic trace generation.

Traces are normalized to block-granular read requests: writes are dropped,
offsets and sizes are converted from bytes to block units, and each read gets
a logical timestamp equal to its index in the read sequence. The storage size
of a trace is the maximum usable block address (max over reads of key + size).
"""

from __future__ import annotations

import random
from dataclasses import dataclass


MSR_FIELDS = 7  # Timestamp,Hostname,DiskNumber,Type,Offset,Size,ResponseTime


class TraceError(ValueError):
    """Malformed trace input."""


@dataclass(frozen=True)
class TraceRecord:
    """One raw trace line, byte-granular, before read filtering."""

    timestamp_raw: int
    host: str
    disk: int
    op: str  # "Read" or "Write"
    offset_bytes: int
    size_bytes: int
    response_time_raw: int


@dataclass(frozen=True)
class ReadRequest:
    """A block-granular read: first block, span in blocks, logical timestamp."""

    key: int
    size_blocks: int
    ts: int


@dataclass(frozen=True)
class Trace:
    name: str
    reads: tuple[ReadRequest, ...]
    storage_blocks: int


def parse_msr_line(line: str, line_no: int = 0) -> TraceRecord:
    """Parse one comma-separated MSR trace line.

    The op field is matched case-insensitively against Read/Write. Raises
    TraceError naming the line number on malformed input.
    """
    fields = line.strip().split(",")
    if len(fields) != MSR_FIELDS:
        raise TraceError(
            f"line {line_no}: expected {MSR_FIELDS} comma-separated fields, got {len(fields)}"
        )
    op = fields[3].strip()
    if op.lower() == "read":
        op = "Read"
    elif op.lower() == "write":
        op = "Write"
    else:
        raise TraceError(f"line {line_no}: unknown op {op!r}")
    try:
        timestamp = int(fields[0])
        disk = int(fields[2])
        offset = int(fields[4])
        size = int(fields[5])
        response = int(fields[6])
    except ValueError as exc:
        raise TraceError(f"line {line_no}: non-numeric field ({exc})") from exc
    if size < 1:
        raise TraceError(f"line {line_no}: size must be positive, got {size}")
    if offset < 0:
        raise TraceError(f"line {line_no}: negative offset {offset}")
    return TraceRecord(
        timestamp_raw=timestamp,
        host=fields[1],
        disk=disk,
        op=op,
        offset_bytes=offset,
        size_bytes=size,
        response_time_raw=response,
    )


def _span_blocks(offset_bytes: int, size_bytes: int, block_size: int) -> tuple[int, int]:
    """First block and block count covering the byte range [offset, offset+size)."""
    first = offset_bytes // block_size
    last = (offset_bytes + size_bytes - 1) // block_size
    return first, last - first + 1


def storage_size(reads) -> int:
    """Maximum usable block address: max over reads of key + size_blocks."""
    if not reads:
        raise TraceError("storage size undefined for an empty read sequence")
    return max(r.key + r.size_blocks for r in reads)


def _check_block_size(block_size: int) -> None:
    if block_size < 1 or block_size & (block_size - 1):
        raise TraceError(f"block_size must be a power of two, got {block_size}")


def reads_from_records(records, block_size: int = 4096) -> list[ReadRequest]:
    """Keep Read records in order and convert them to block units."""
    _check_block_size(block_size)
    reads = []
    for rec in records:
        if rec.op != "Read":
            continue
        key, span = _span_blocks(rec.offset_bytes, rec.size_bytes, block_size)
        reads.append(ReadRequest(key=key, size_blocks=span, ts=len(reads)))
    return reads


def load_trace(path, block_size: int = 4096, name: str | None = None) -> Trace:
    """Load an MSR CSV file into a block-granular read trace.

    Write records are dropped; reads keep file order and get ts = 0,1,2,...
    Raises TraceError when the file contains no reads.
    """
    _check_block_size(block_size)
    records = []
    with open(path, "r", encoding="ascii", newline=None) as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            records.append(parse_msr_line(line, line_no))
    reads = reads_from_records(records, block_size)
    if not reads:
        raise TraceError(f"{path}: no read requests")
    if name is None:
        name = str(path).rsplit("/", 1)[-1]
        name = name.rsplit(".", 1)[0] if "." in name else name
    return Trace(name=name, reads=tuple(reads), storage_blocks=storage_size(reads))


def write_msr_csv(trace: Trace, path, block_size: int = 4096) -> None:
    """Serialize a trace back to the MSR line format (reads only)."""
    _check_block_size(block_size)
    with open(path, "w", encoding="ascii", newline="") as fh:
        for r in trace.reads:
            offset = r.key * block_size
            size = r.size_blocks * block_size
            fh.write(f"{r.ts},{trace.name},0,Read,{offset},{size},0\n")


# Synthetic pair traffic: A keys on one even stride, B keys on the other, so
# pair keys never collide with each other or with the noise range.
_PAIR_A_STRIDE = 4
_NOISE_KEY_LO = 1_000_000
_NOISE_KEY_HI = 2_000_000


def synth_correlated_trace(
    n_pairs: int,
    repeats: int,
    gap: int,
    noise_keys: int,
    seed: int,
    name: str | None = None,
) -> Trace:
    """Generate a trace where each pair (A_i, B_i) co-occurs `repeats` times
    with B_i exactly `gap` reads after A_i.

    `noise_keys` cold single-occurrence reads with uniformly random keys are
    interleaved between the pair traffic. Deterministic for a fixed seed. If
    the noise budget cannot fill the slots a large gap requires, extra cold
    filler reads are inserted so the gap property always holds exactly.
    """
    if n_pairs < 1:
        raise TraceError("n_pairs must be >= 1")
    if repeats < 2:
        raise TraceError("repeats must be >= 2")
    if gap < 1:
        raise TraceError("gap must be >= 1")
    if noise_keys < 0:
        raise TraceError("noise_keys must be >= 0")

    rng = random.Random(seed)
    a_key = [_PAIR_A_STRIDE * i for i in range(n_pairs)]
    b_key = [_PAIR_A_STRIDE * i + 2 for i in range(n_pairs)]

    used_cold: set[int] = set()

    def cold_key() -> int:
        while True:
            k = rng.randrange(_NOISE_KEY_LO, _NOISE_KEY_HI)
            if k not in used_cold:
                used_cold.add(k)
                return k

    # Round-robin over pairs, repeat-major, so occurrences of a pair spread
    # across the whole trace.
    queue = [(a_key[i], b_key[i]) for _ in range(repeats) for i in range(n_pairs)]

    keys: list[int] = []
    scheduled: dict[int, int] = {}  # position -> pending B key
    qi = 0
    noise_left = noise_keys
    t = 0
    while qi < len(queue) or scheduled or noise_left > 0:
        if t in scheduled:
            keys.append(scheduled.pop(t))
        else:
            pairs_left = len(queue) - qi
            if pairs_left and noise_left:
                take_noise = rng.random() < noise_left / (noise_left + pairs_left)
            elif noise_left:
                take_noise = True
            elif pairs_left:
                take_noise = False
            else:
                keys.append(cold_key())  # filler: only pending B's remain ahead
                t += 1
                continue
            if take_noise:
                keys.append(cold_key())
                noise_left -= 1
            else:
                a, b = queue[qi]
                qi += 1
                keys.append(a)
                scheduled[t + gap] = b
        t += 1

    reads = tuple(ReadRequest(key=k, size_blocks=1, ts=i) for i, k in enumerate(keys))
    if name is None:
        name = f"synth-p{n_pairs}-r{repeats}-g{gap}-n{noise_keys}-s{seed}"
    return Trace(name=name, reads=reads, storage_blocks=storage_size(reads))
