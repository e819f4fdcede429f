"""Block-granular LRU cache with prefetch-aware admission.

Residency is tracked per block in an OrderedDict (hash map + recency list);
the least recently used block is evicted first. A demand request hits only if
every block it spans is resident. The cache keeps the counters a prefetcher
evaluation needs: demand hits/misses, blocks downloaded from the backend,
prefetch requests issued, and prefetch requests whose blocks were all evicted
untouched.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

from .trace import ReadRequest


@dataclass
class BlockState:
    block: int
    prefetched: bool = False
    touched: bool = False
    origin_prefetch_id: int | None = None


@dataclass(frozen=True)
class AccessResult:
    hit: bool
    missing_blocks: int


class _PrefetchWaste:
    """Tracks one prefetch request until its usefulness is decided."""

    __slots__ = ("untouched", "any_touched")

    def __init__(self, untouched: int):
        self.untouched = untouched
        self.any_touched = False


class BlockCache:
    """LRU set of resident blocks plus run counters.

    Counters:
      n_ch / n_cm   demand hits and misses (per request)
      n_dp_blocks   blocks downloaded from the backend (miss fills + prefetch fills)
      n_pr          prefetch requests that admitted at least one block
      n_eu          prefetch requests whose admitted blocks were all evicted untouched
    """

    def __init__(self, capacity_blocks: int):
        if capacity_blocks < 1:
            raise ValueError(f"cache capacity must be >= 1 block, got {capacity_blocks}")
        self.capacity_blocks = capacity_blocks
        self._blocks: OrderedDict[int, BlockState] = OrderedDict()
        self._waste: dict[int, _PrefetchWaste] = {}
        self.n_ch = 0
        self.n_cm = 0
        self.n_dp_blocks = 0
        self.n_pr = 0
        self.n_eu = 0

    def __len__(self) -> int:
        return len(self._blocks)

    def __contains__(self, block: int) -> bool:
        return block in self._blocks

    def resident_blocks(self) -> list[int]:
        """Blocks in LRU-to-MRU order."""
        return list(self._blocks)

    def access(self, request: ReadRequest) -> AccessResult:
        """Serve one demand read; admit missing blocks on a miss."""
        if request.size_blocks > self.capacity_blocks:
            raise ValueError(
                f"request spans {request.size_blocks} blocks, "
                f"cache holds only {self.capacity_blocks}"
            )
        span = range(request.key, request.key + request.size_blocks)
        missing = [b for b in span if b not in self._blocks]
        if not missing:
            self.n_ch += 1
            for b in span:
                state = self._blocks[b]
                if state.prefetched and not state.touched:
                    self._note_touched(state)
                state.touched = True
                self._blocks.move_to_end(b)
            return AccessResult(hit=True, missing_blocks=0)
        self.n_cm += 1
        self.n_dp_blocks += len(missing)
        for b in span:
            if b in self._blocks:
                self._blocks.move_to_end(b)
            else:
                self._admit(BlockState(block=b))
        return AccessResult(hit=False, missing_blocks=len(missing))

    def admit_prefetch(self, key: int, size_blocks: int, prefetch_id: int) -> int:
        """Admit the non-resident blocks of [key, key+size_blocks) as a prefetch.

        Returns the number of blocks admitted; n_pr is bumped only when that
        count is nonzero. Already-resident blocks are left untouched and keep
        their recency.
        """
        if size_blocks > self.capacity_blocks:
            raise ValueError(
                f"prefetch spans {size_blocks} blocks, "
                f"cache holds only {self.capacity_blocks}"
            )
        span = range(key, key + size_blocks)
        missing = [b for b in span if b not in self._blocks]
        if not missing:
            return 0
        self.n_pr += 1
        self.n_dp_blocks += len(missing)
        self._waste[prefetch_id] = _PrefetchWaste(untouched=len(missing))
        for b in missing:
            self._admit(
                BlockState(block=b, prefetched=True, origin_prefetch_id=prefetch_id)
            )
        return len(missing)

    def _admit(self, state: BlockState) -> None:
        if len(self._blocks) == self.capacity_blocks:
            _, victim = self._blocks.popitem(last=False)
            self._on_evict(victim)
        self._blocks[state.block] = state

    def _on_evict(self, state: BlockState) -> None:
        if not state.prefetched or state.touched:
            return
        waste = self._waste.get(state.origin_prefetch_id)
        if waste is None:
            return
        waste.untouched -= 1
        if waste.untouched == 0:
            if not waste.any_touched:
                self.n_eu += 1
            del self._waste[state.origin_prefetch_id]

    def _note_touched(self, state: BlockState) -> None:
        waste = self._waste.get(state.origin_prefetch_id)
        if waste is None:
            return
        waste.any_touched = True
        waste.untouched -= 1
        if waste.untouched == 0:
            del self._waste[state.origin_prefetch_id]
