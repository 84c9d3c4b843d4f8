"""Operation counters backing the library's structural assertions.

The counters are plain integers on a module-level singleton; hot paths
increment them once per batch, not once per word, so they are always on.
Tests snapshot before/after an operation and assert on the delta.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass
class Counters:
    row_adds: int = 0           # row-level XOR additions, batched ops count rows
    table_adds: int = 0         # row additions spent building combination tables
    c_writes: int = 0           # destination-row updates during M4RM products
    strassen_entries: int = 0   # entries into the recursive multiply
    strassen_products: int = 0  # quadrant products dispatched by the schedule
    quadrant_adds: int = 0      # quadrant-level additions inside the schedule
    temp_quadrants: int = 0     # scratch quadrant buffers allocated for recursion
    words_allocated: int = 0    # cumulative 64-bit words allocated for matrices
    live_words: int = 0         # currently reachable matrix words
    peak_live_words: int = 0    # high-water mark of live_words

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def note_alloc(self, nwords: int) -> None:
        self.words_allocated += nwords
        self.live_words += nwords
        if self.live_words > self.peak_live_words:
            self.peak_live_words = self.live_words

    def note_free(self, nwords: int) -> None:
        self.live_words -= nwords

    def rebase_peak(self) -> None:
        """Reset the high-water mark to the current live amount."""
        self.peak_live_words = self.live_words


counters = Counters()
