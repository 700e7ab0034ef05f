"""Deterministic parallel mapping: contiguous chunks, ordered merge.

Workers receive contiguous slices of the task list and results are
concatenated in submission order, so a parallel run reproduces the serial
accumulation order bit for bit.
"""

from concurrent.futures import ProcessPoolExecutor


def chunked(seq, nchunks):
    seq = list(seq)
    if nchunks <= 1 or len(seq) <= 1:
        return [seq] if seq else []
    size = (len(seq) + nchunks - 1) // nchunks
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def ordered_chunk_map(fn, items, jobs):
    """Apply fn to contiguous chunks of items; return the list of chunk
    results in order.  jobs <= 1 runs serially in-process."""
    chunks = chunked(items, max(1, jobs) * 4 if jobs > 1 else 1)
    if jobs <= 1:
        return [fn(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, chunks))
