# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trade-loop kernel: xoshiro256** draws + integer pipette walk.

Must stay bit-identical to fxgame._kernel_py; the PRNG algorithm and the
per-trade draw order (direction, then appetite) are frozen contracts.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t, uint64_t

cnp.import_array()

BACKEND = "cython"


cdef inline uint64_t _rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef struct XoshiroState:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3


cdef inline uint64_t _splitmix64(uint64_t* state) noexcept nogil:
    cdef uint64_t z
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline void _seed(XoshiroState* st, uint64_t seed) noexcept nogil:
    cdef uint64_t sm = seed
    st.s0 = _splitmix64(&sm)
    st.s1 = _splitmix64(&sm)
    st.s2 = _splitmix64(&sm)
    st.s3 = _splitmix64(&sm)


cdef inline uint64_t _next(XoshiroState* st) noexcept nogil:
    cdef uint64_t result = _rotl(st.s1 * 5, 7) * 9
    cdef uint64_t t = st.s1 << 17
    st.s2 ^= st.s0
    st.s3 ^= st.s1
    st.s1 ^= st.s2
    st.s0 ^= st.s3
    st.s2 ^= t
    st.s3 = _rotl(st.s3, 45)
    return result


cdef inline uint64_t _next_below(XoshiroState* st, uint64_t n) noexcept nogil:
    # Reject the biased low range so all residues are equally likely.
    cdef uint64_t threshold = (<uint64_t>0 - n) % n
    cdef uint64_t x
    while True:
        x = _next(st)
        if x >= threshold:
            return x % n


def run_trades(
    seed,
    n_trades,
    initial_price,
    grid,
    pipettes_per_unit,
):
    """See fxgame._kernel_py.run_trades; identical contract and output."""
    cdef Py_ssize_t n = n_trades
    cdef uint64_t grid_c = grid
    cdef int64_t step = pipettes_per_unit
    cdef int64_t price = initial_price
    cdef int64_t adjustment, new_price
    cdef uint64_t direction, u
    cdef Py_ssize_t i
    cdef Py_ssize_t failed_at = -1

    directions = np.empty(n, dtype=np.uint8)
    units = np.empty(n, dtype=np.int64)
    opens = np.empty(n, dtype=np.int64)
    posts = np.empty(n, dtype=np.int64)

    cdef uint8_t[::1] dir_v = directions
    cdef int64_t[::1] units_v = units
    cdef int64_t[::1] opens_v = opens
    cdef int64_t[::1] posts_v = posts

    cdef XoshiroState st
    _seed(&st, <uint64_t>seed)

    with nogil:
        for i in range(n):
            direction = _next(&st) & 1
            u = 1 + _next_below(&st, grid_c)
            adjustment = <int64_t>u * step
            if direction == 0:
                new_price = price - adjustment
            else:
                new_price = price + adjustment
            if new_price <= 0:
                failed_at = i
                break
            dir_v[i] = <uint8_t>direction
            units_v[i] = <int64_t>u
            opens_v[i] = price
            posts_v[i] = new_price
            price = new_price

    if failed_at >= 0:
        raise ValueError(
            f"price driven to {new_price} pipettes at trade {failed_at}; "
            "configuration is degenerate"
        )
    return directions, units, opens, posts
