"""A shot-range slicer for chunked sampling."""

from dataclasses import dataclass

from povmforge.exceptions import ShotsError


@dataclass(frozen=True)
class ShotChunk:
    """Shots `start` (inclusive) to `stop` (exclusive)."""

    start: int
    stop: int

    def __len__(self):
        return self.stop - self.start


def slice_shots(shots, chunk_size):
    """Slice the shot indices 0..shots-1 into consecutive chunks."""
    if shots < 1:
        raise ShotsError('shots must be at least 1, got {}'.format(shots))
    if chunk_size < 1:
        raise ShotsError('chunk size must be at least 1, got {}'.format(chunk_size))
    start = 0

    while start < shots:
        # The last chunk takes whatever is left
        stop = min(start + chunk_size, shots)
        yield ShotChunk(start=start, stop=stop)
        start = stop
