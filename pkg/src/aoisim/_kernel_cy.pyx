# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled event-loop kernel.

Typed transliteration of aoisim._kernel_py: same algorithm, same float
arithmetic in the same order, so results are bit-identical to the fallback.
Keep the two files in sync; the cross-backend test enforces equality.
"""

from libc.math cimport nextafter

import numpy as np

# Mirrors aoisim._codes (asserted in the test suite).
cdef enum:
    FCFS = 0
    LCFS = 1
    RANDOM = 2
    SJF = 3
    LCFS_P = 4
    SJF_P = 5
    SRPT = 6
    ADE = 7
    ADS = 8
    ADM = 9

cdef enum:
    ACT_START = 0
    ACT_PREEMPT = 1
    ACT_RESUME = 2
    ACT_DELIVER = 3
    ACT_DISCARD = 4

cdef enum:
    ST_NOT_ARRIVED = -1
    ST_WAITING = 0
    ST_IN_SERVICE = 1
    ST_DELIVERED = 2
    ST_DISCARDED = 3

cdef double INF = float("inf")


cdef class Heap:
    """Binary min-heap on (key, id); unique ids make the order total."""
    cdef double[::1] key
    cdef long[::1] val
    cdef Py_ssize_t n

    def __cinit__(self, Py_ssize_t cap):
        self.key = np.empty(cap, dtype=np.float64)
        self.val = np.empty(cap, dtype=np.int64)
        self.n = 0

    cdef inline void push(self, double k, long v):
        cdef Py_ssize_t i = self.n
        cdef Py_ssize_t p
        self.n += 1
        while i > 0:
            p = (i - 1) >> 1
            if self.key[p] > k or (self.key[p] == k and self.val[p] > v):
                self.key[i] = self.key[p]
                self.val[i] = self.val[p]
                i = p
            else:
                break
        self.key[i] = k
        self.val[i] = v

    cdef inline void drop_top(self):
        cdef double k
        cdef long v
        cdef Py_ssize_t i = 0, c
        self.n -= 1
        if self.n == 0:
            return
        k = self.key[self.n]
        v = self.val[self.n]
        while True:
            c = 2 * i + 1
            if c >= self.n:
                break
            if c + 1 < self.n and (self.key[c + 1] < self.key[c] or
                                   (self.key[c + 1] == self.key[c] and
                                    self.val[c + 1] < self.val[c])):
                c += 1
            if self.key[c] < k or (self.key[c] == k and self.val[c] < v):
                self.key[i] = self.key[c]
                self.val[i] = self.val[c]
                i = c
            else:
                break
        self.key[i] = k
        self.val[i] = v


def simulate(double[::1] arrivals, double[::1] sizes, int base,
             bint aoi_preempt, bint informative, object rng,
             bint want_decisions):
    """Replay one trace under one non-sharing policy (see the Python twin)."""
    cdef Py_ssize_t n = arrivals.shape[0]
    cdef double[::1] gen = arrivals
    cdef double[::1] size = sizes
    cdef double[::1] remaining = np.array(sizes, dtype=np.float64, copy=True)
    cdef signed char[::1] status = np.full(n, ST_NOT_ARRIVED, dtype=np.int8)
    cdef double[::1] deliver_time = np.full(n, -1.0, dtype=np.float64)
    cdef double[::1] first_start = np.full(n, -1.0, dtype=np.float64)

    cdef bint use_fifo = base == FCFS
    cdef bint use_stack = base == LCFS or base == LCFS_P or base == ADM
    cdef bint use_rand = base == RANDOM
    cdef bint use_hs = (base == SJF or base == SJF_P or base == ADE
                        or base == ADS or base == ADM)
    cdef bint use_hr = base == SRPT
    cdef bint use_hinf = base == ADE or base == ADS

    cdef long[::1] fifo = np.empty(n if use_fifo else 1, dtype=np.int64)
    cdef Py_ssize_t fifo_len = 0, fifo_head = 0
    cdef long[::1] stack = np.empty(2 * n + 4 if use_stack else 1, dtype=np.int64)
    cdef Py_ssize_t stack_len = 0
    cdef long[::1] rand_list = np.empty(n if use_rand else 1, dtype=np.int64)
    cdef Py_ssize_t rand_len = 0
    cdef Heap h_size = Heap(2 * n + 4 if use_hs else 1)
    cdef Heap h_rem = Heap(2 * n + 4 if use_hr else 1)
    cdef Heap h_inf = Heap(2 * n + 4 if use_hinf else 1)
    cdef Heap h_gen = Heap(2 * n + 4 if informative else 1)

    cdef Py_ssize_t waiting_count = 0
    cdef long cur = -1
    cdef double dep = INF
    cdef double freshest = 0.0
    cdef double horizon = 0.0

    cdef double[::1] log_d = np.empty(n, dtype=np.float64)
    cdef double[::1] log_g = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t log_len = 0
    cdef Py_ssize_t dec_cap = 5 * n + 16 if want_decisions else 1
    cdef double[::1] dec_t = np.empty(dec_cap, dtype=np.float64)
    cdef long[::1] dec_id = np.empty(dec_cap, dtype=np.int64)
    cdef signed char[::1] dec_act = np.empty(dec_cap, dtype=np.int8)
    cdef Py_ssize_t dec_len = 0

    cdef Py_ssize_t i = 0, scan, write
    cdef long j, uid, nxt
    cdef double t, ta, key
    cdef long k_draw
    cdef bint preempt

    while True:
        ta = gen[i] if i < n else INF
        if cur >= 0 and dep <= ta:
            # ---- departure of cur at dep ----
            t = dep
            horizon = t
            remaining[cur] = 0.0
            status[cur] = ST_DELIVERED
            deliver_time[cur] = t
            if want_decisions:
                dec_t[dec_len] = t
                dec_id[dec_len] = cur
                dec_act[dec_len] = ACT_DELIVER
                dec_len += 1
            if gen[cur] > freshest:
                freshest = gen[cur]
                log_d[log_len] = t
                log_g[log_len] = gen[cur]
                log_len += 1
            if informative:
                while h_gen.n > 0 and h_gen.key[0] <= freshest:
                    uid = h_gen.val[0]
                    h_gen.drop_top()
                    if status[uid] == ST_WAITING:
                        status[uid] = ST_DISCARDED
                        waiting_count -= 1
                        if want_decisions:
                            dec_t[dec_len] = t
                            dec_id[dec_len] = uid
                            dec_act[dec_len] = ACT_DISCARD
                            dec_len += 1
            # ---- select next ----
            nxt = -1
            if use_fifo:
                while fifo_head < fifo_len and status[fifo[fifo_head]] != ST_WAITING:
                    fifo_head += 1
                if fifo_head < fifo_len:
                    nxt = fifo[fifo_head]
                    fifo_head += 1
            elif base == LCFS or base == LCFS_P:
                while stack_len > 0 and status[stack[stack_len - 1]] != ST_WAITING:
                    stack_len -= 1
                if stack_len > 0:
                    stack_len -= 1
                    nxt = stack[stack_len]
            elif use_rand:
                if waiting_count > 0:
                    k_draw = <long>rng.integers(waiting_count)
                    if rand_len > 2 * waiting_count + 16:
                        write = 0
                        for scan in range(rand_len):
                            if status[rand_list[scan]] == ST_WAITING:
                                rand_list[write] = rand_list[scan]
                                write += 1
                        rand_len = write
                    for scan in range(rand_len):
                        uid = rand_list[scan]
                        if status[uid] == ST_WAITING:
                            if k_draw == 0:
                                nxt = uid
                                break
                            k_draw -= 1
            elif base == SJF or base == SJF_P:
                while h_size.n > 0:
                    uid = h_size.val[0]
                    h_size.drop_top()
                    if status[uid] == ST_WAITING:
                        nxt = uid
                        break
            elif base == SRPT:
                while h_rem.n > 0:
                    uid = h_rem.val[0]
                    h_rem.drop_top()
                    if status[uid] == ST_WAITING:
                        nxt = uid
                        break
            elif base == ADM:
                while stack_len > 0 and status[stack[stack_len - 1]] != ST_WAITING:
                    stack_len -= 1
                if stack_len > 0 and gen[stack[stack_len - 1]] > freshest:
                    stack_len -= 1
                    nxt = stack[stack_len]
                else:
                    while h_size.n > 0:
                        uid = h_size.val[0]
                        h_size.drop_top()
                        if status[uid] == ST_WAITING:
                            nxt = uid
                            break
            else:
                # ade / ads
                while h_inf.n > 0:
                    uid = h_inf.val[0]
                    h_inf.drop_top()
                    if status[uid] == ST_WAITING and gen[uid] > freshest:
                        nxt = uid
                        break
                if nxt < 0:
                    while h_size.n > 0:
                        uid = h_size.val[0]
                        h_size.drop_top()
                        if status[uid] == ST_WAITING:
                            nxt = uid
                            break
            if nxt >= 0:
                waiting_count -= 1
                status[nxt] = ST_IN_SERVICE
                cur = nxt
                dep = t + remaining[nxt]
                if dep <= t:
                    # tiny remaining absorbed by float addition: event times
                    # (and so delivery times) must still strictly increase
                    dep = nextafter(t, INF)
                if want_decisions:
                    dec_t[dec_len] = t
                    dec_id[dec_len] = nxt
                    dec_act[dec_len] = ACT_RESUME if first_start[nxt] >= 0 else ACT_START
                    dec_len += 1
                if first_start[nxt] < 0:
                    first_start[nxt] = t
            else:
                cur = -1
                dep = INF
        elif i < n:
            # ---- arrival of j at ta ----
            t = ta
            j = i
            i += 1
            if cur < 0:
                status[j] = ST_IN_SERVICE
                cur = j
                dep = t + remaining[j]
                if dep <= t:
                    dep = nextafter(t, INF)
                first_start[j] = t
                if want_decisions:
                    dec_t[dec_len] = t
                    dec_id[dec_len] = j
                    dec_act[dec_len] = ACT_START
                    dec_len += 1
            else:
                if base == LCFS_P:
                    preempt = True
                elif base == SRPT:
                    preempt = size[j] < dep - t
                elif base == SJF_P:
                    preempt = size[j] < size[cur]
                    if preempt:
                        while h_size.n > 0 and status[h_size.val[0]] != ST_WAITING:
                            h_size.drop_top()
                        if h_size.n > 0 and size[j] >= h_size.key[0]:
                            preempt = False
                elif aoi_preempt:
                    if base == ADE:
                        preempt = size[j] < dep - t
                    elif base == ADS:
                        preempt = size[j] - gen[j] < (dep - t) - gen[cur]
                    else:
                        preempt = True
                else:
                    preempt = False
                if preempt:
                    remaining[cur] = dep - t
                    if want_decisions:
                        dec_t[dec_len] = t
                        dec_id[dec_len] = cur
                        dec_act[dec_len] = ACT_PREEMPT
                        dec_len += 1
                    # cur rejoins the waiting set
                    uid = cur
                    status[uid] = ST_WAITING
                    waiting_count += 1
                    if use_stack:
                        stack[stack_len] = uid
                        stack_len += 1
                    if use_hs:
                        h_size.push(size[uid], uid)
                    if use_hr:
                        h_rem.push(remaining[uid], uid)
                    if use_hinf:
                        key = remaining[uid] if base == ADE else remaining[uid] - gen[uid]
                        h_inf.push(key, uid)
                    if informative:
                        h_gen.push(gen[uid], uid)
                    status[j] = ST_IN_SERVICE
                    cur = j
                    dep = t + remaining[j]
                    if dep <= t:
                        dep = nextafter(t, INF)
                    first_start[j] = t
                    if want_decisions:
                        dec_t[dec_len] = t
                        dec_id[dec_len] = j
                        dec_act[dec_len] = ACT_START
                        dec_len += 1
                else:
                    status[j] = ST_WAITING
                    waiting_count += 1
                    if use_fifo:
                        fifo[fifo_len] = j
                        fifo_len += 1
                    if use_stack:
                        stack[stack_len] = j
                        stack_len += 1
                    if use_rand:
                        rand_list[rand_len] = j
                        rand_len += 1
                    if use_hs:
                        h_size.push(size[j], j)
                    if use_hr:
                        h_rem.push(remaining[j], j)
                    if use_hinf:
                        key = remaining[j] if base == ADE else remaining[j] - gen[j]
                        h_inf.push(key, j)
                    if informative:
                        h_gen.push(gen[j], j)
        else:
            break

    return (np.asarray(deliver_time), np.asarray(first_start),
            np.asarray(status),
            np.asarray(log_d[:log_len]).copy(), np.asarray(log_g[:log_len]).copy(),
            np.asarray(dec_t[:dec_len]).copy(), np.asarray(dec_id[:dec_len]).copy(),
            np.asarray(dec_act[:dec_len]).copy(), horizon)


def simulate_ps(double[::1] arrivals, double[::1] sizes, bint want_decisions):
    """Replay one trace under processor sharing (see the Python twin)."""
    cdef Py_ssize_t n = arrivals.shape[0]
    cdef double[::1] gen = arrivals
    cdef double[::1] size = sizes
    cdef signed char[::1] status = np.full(n, ST_NOT_ARRIVED, dtype=np.int8)
    cdef double[::1] deliver_time = np.full(n, -1.0, dtype=np.float64)
    cdef double[::1] first_start = np.full(n, -1.0, dtype=np.float64)

    cdef Heap pool = Heap(n)
    cdef double V = 0.0
    cdef double t_prev = 0.0
    cdef Py_ssize_t k = 0
    cdef double freshest = 0.0
    cdef double horizon = 0.0

    cdef double[::1] log_d = np.empty(n, dtype=np.float64)
    cdef double[::1] log_g = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t log_len = 0
    cdef Py_ssize_t dec_cap = 2 * n + 8 if want_decisions else 1
    cdef double[::1] dec_t = np.empty(dec_cap, dtype=np.float64)
    cdef long[::1] dec_id = np.empty(dec_cap, dtype=np.int64)
    cdef signed char[::1] dec_act = np.empty(dec_cap, dtype=np.int8)
    cdef Py_ssize_t dec_len = 0

    cdef Py_ssize_t i = 0
    cdef long j, uid
    cdef double t, ta, td

    while True:
        ta = gen[i] if i < n else INF
        if k > 0:
            td = t_prev + (pool.key[0] - V) * k
            if td <= t_prev:
                # rounding drift or float absorption: events strictly advance
                td = nextafter(t_prev, INF)
        else:
            td = INF
        if k > 0 and td <= ta:
            t = td
            V += (t - t_prev) / k
            t_prev = t
            uid = pool.val[0]
            pool.drop_top()
            k -= 1
            horizon = t
            status[uid] = ST_DELIVERED
            deliver_time[uid] = t
            if want_decisions:
                dec_t[dec_len] = t
                dec_id[dec_len] = uid
                dec_act[dec_len] = ACT_DELIVER
                dec_len += 1
            if gen[uid] > freshest:
                freshest = gen[uid]
                log_d[log_len] = t
                log_g[log_len] = gen[uid]
                log_len += 1
        elif i < n:
            t = ta
            if k > 0:
                V += (t - t_prev) / k
            t_prev = t
            j = i
            i += 1
            status[j] = ST_IN_SERVICE
            first_start[j] = t
            pool.push(V + size[j], j)
            k += 1
            if want_decisions:
                dec_t[dec_len] = t
                dec_id[dec_len] = j
                dec_act[dec_len] = ACT_START
                dec_len += 1
        else:
            break

    return (np.asarray(deliver_time), np.asarray(first_start),
            np.asarray(status),
            np.asarray(log_d[:log_len]).copy(), np.asarray(log_g[:log_len]).copy(),
            np.asarray(dec_t[:dec_len]).copy(), np.asarray(dec_id[:dec_len]).copy(),
            np.asarray(dec_act[:dec_len]).copy(), horizon)
