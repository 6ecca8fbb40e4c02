"""Pure-Python event-loop kernel.

Reference implementation of the replay loop; aoisim._kernel_cy is a typed
transliteration of the same algorithm and must produce bit-identical output
(the test suite enforces this).  Event times are compared exactly, with
departures processed before arrivals on ties.

State per policy base:
  fcfs                 fifo list + head index
  lcfs / lcfs_p / adm  stack (stays id-ordered; see select)
  random               id-ordered list scanned under a uniform index draw
  sjf / sjf_p          min-heap on (size, id)
  srpt                 min-heap on (remaining, id)
  ade / ads            min-heap on the age key over informative updates,
                       plus the shared (size, id) fallback heap
Informative variants track waiting updates in a (gen, id) heap so obsolete
ones are discarded eagerly at each delivery.  Stale heap entries (an update
that left the queue, or an age key superseded after a preemption) are
dropped lazily; a superseding entry always has a strictly smaller key, so
the first live entry popped carries the current key.
"""

from __future__ import annotations

from heapq import heappop, heappush
from math import nextafter

import numpy as np

from ._codes import (ADE, ADM, ADS, DELIVER, DELIVERED, DISCARD, DISCARDED,
                     FCFS, IN_SERVICE, LCFS, LCFS_P, NOT_ARRIVED, PREEMPT,
                     RANDOM, RESUME, SJF, SJF_P, SRPT, START, WAITING)

_INF = float("inf")


def simulate(arrivals, sizes, base, aoi_preempt, informative, rng,
             want_decisions):
    """Replay one trace under one non-sharing policy.

    Returns (deliver_time, first_start, status, log_d, log_g,
             dec_t, dec_id, dec_act, horizon) with numpy arrays; the
    delivery log holds informative deliveries only (no virtual entry).
    """
    gen = arrivals.tolist()
    size = sizes.tolist()
    n = len(gen)
    remaining = list(size)
    status = [NOT_ARRIVED] * n
    deliver_time = [-1.0] * n
    first_start = [-1.0] * n

    use_fifo = base == FCFS
    use_stack = base in (LCFS, LCFS_P, ADM)
    use_rand = base == RANDOM
    use_hs = base in (SJF, SJF_P, ADE, ADS, ADM)
    use_hr = base == SRPT
    use_hinf = base in (ADE, ADS)

    fifo: list[int] = []
    fifo_head = 0
    stack: list[int] = []
    rand_list: list[int] = []
    h_size: list[tuple[float, int]] = []
    h_rem: list[tuple[float, int]] = []
    h_inf: list[tuple[float, int]] = []
    h_gen: list[tuple[float, int]] = []

    waiting_count = 0
    cur = -1
    dep = _INF
    freshest = 0.0
    horizon = 0.0

    log_d: list[float] = []
    log_g: list[float] = []
    dec_t: list[float] = []
    dec_id: list[int] = []
    dec_act: list[int] = []

    def record(t, uid, act):
        dec_t.append(t)
        dec_id.append(uid)
        dec_act.append(act)

    def join_waiting(uid):
        nonlocal waiting_count
        status[uid] = WAITING
        waiting_count += 1
        if use_fifo:
            fifo.append(uid)
        if use_stack:
            stack.append(uid)
        if use_rand:
            rand_list.append(uid)
        if use_hs:
            heappush(h_size, (size[uid], uid))
        if use_hr:
            heappush(h_rem, (remaining[uid], uid))
        if use_hinf:
            key = remaining[uid] if base == ADE else remaining[uid] - gen[uid]
            heappush(h_inf, (key, uid))
        if informative:
            heappush(h_gen, (gen[uid], uid))

    def pop_heap_waiting(heap):
        # First live entry; stale ones are dead for good, drop them.
        while heap:
            _, uid = heappop(heap)
            if status[uid] == WAITING:
                return uid
        return -1

    def select():
        nonlocal fifo_head, rand_list
        if use_fifo:
            while fifo_head < len(fifo) and status[fifo[fifo_head]] != WAITING:
                fifo_head += 1
            if fifo_head < len(fifo):
                uid = fifo[fifo_head]
                fifo_head += 1
                return uid
            return -1
        if base == LCFS or base == LCFS_P:
            while stack and status[stack[-1]] != WAITING:
                stack.pop()
            return stack.pop() if stack else -1
        if use_rand:
            if waiting_count == 0:
                return -1
            k = int(rng.integers(waiting_count))
            if len(rand_list) > 2 * waiting_count + 16:
                rand_list = [u for u in rand_list if status[u] == WAITING]
            for uid in rand_list:
                if status[uid] == WAITING:
                    if k == 0:
                        return uid
                    k -= 1
            return -1
        if base == SJF or base == SJF_P:
            return pop_heap_waiting(h_size)
        if base == SRPT:
            return pop_heap_waiting(h_rem)
        if base == ADM:
            while stack and status[stack[-1]] != WAITING:
                stack.pop()
            if stack and gen[stack[-1]] > freshest:
                return stack.pop()  # freshest waiting update is informative
            return pop_heap_waiting(h_size)  # all obsolete: smallest size
        # ade / ads: earliest-drop or smallest-post-drop key over informative
        while h_inf:
            _, uid = heappop(h_inf)
            if status[uid] == WAITING and gen[uid] > freshest:
                return uid
        return pop_heap_waiting(h_size)

    def min_waiting_size():
        while h_size and status[h_size[0][1]] != WAITING:
            heappop(h_size)
        return h_size[0][0] if h_size else _INF

    def wants_preempt(j, t):
        if base == LCFS_P:
            return True
        if base == SRPT:
            return size[j] < dep - t
        if base == SJF_P:
            return size[j] < size[cur] and size[j] < min_waiting_size()
        if aoi_preempt:
            if base == ADE:
                return size[j] < dep - t
            if base == ADS:
                return size[j] - gen[j] < (dep - t) - gen[cur]
            return True  # adm: the arrival is the freshest update
        return False

    def start_service(uid, t):
        nonlocal cur, dep
        status[uid] = IN_SERVICE
        cur = uid
        dep = t + remaining[uid]
        if dep <= t:
            # tiny remaining absorbed by float addition: event times (and so
            # delivery times) must still strictly increase
            dep = nextafter(t, _INF)
        if want_decisions:
            if first_start[uid] < 0:
                record(t, uid, START)
            else:
                record(t, uid, RESUME)
        if first_start[uid] < 0:
            first_start[uid] = t

    i = 0
    while True:
        ta = gen[i] if i < n else _INF
        if cur >= 0 and dep <= ta:
            t = dep
            horizon = t
            remaining[cur] = 0.0
            status[cur] = DELIVERED
            deliver_time[cur] = t
            if want_decisions:
                record(t, cur, DELIVER)
            if gen[cur] > freshest:
                freshest = gen[cur]
                log_d.append(t)
                log_g.append(gen[cur])
            if informative:
                while h_gen and h_gen[0][0] <= freshest:
                    _, uid = heappop(h_gen)
                    if status[uid] == WAITING:
                        status[uid] = DISCARDED
                        waiting_count -= 1
                        if want_decisions:
                            record(t, uid, DISCARD)
            nxt = select()
            if nxt >= 0:
                waiting_count -= 1
                start_service(nxt, t)
            else:
                cur = -1
                dep = _INF
        elif i < n:
            t = ta
            j = i
            i += 1
            if cur < 0:
                start_service(j, t)
            elif wants_preempt(j, t):
                remaining[cur] = dep - t
                if want_decisions:
                    record(t, cur, PREEMPT)
                join_waiting(cur)
                start_service(j, t)
            else:
                join_waiting(j)
        else:
            break

    return (np.asarray(deliver_time), np.asarray(first_start),
            np.asarray(status, dtype=np.int8),
            np.asarray(log_d), np.asarray(log_g),
            np.asarray(dec_t), np.asarray(dec_id, dtype=np.int64),
            np.asarray(dec_act, dtype=np.int8), horizon)


def simulate_ps(arrivals, sizes, want_decisions):
    """Replay one trace under processor sharing (equal split among k in system).

    Work is tracked in virtual time V with dV = dt/k: a job arriving at
    virtual time v finishes when V reaches v + size, so the next departure is
    always the smallest virtual finish time in the pool.
    """
    gen = arrivals.tolist()
    size = sizes.tolist()
    n = len(gen)
    status = [NOT_ARRIVED] * n
    deliver_time = [-1.0] * n
    first_start = [-1.0] * n

    pool: list[tuple[float, int]] = []  # (virtual finish, id)
    V = 0.0
    t_prev = 0.0
    k = 0
    freshest = 0.0
    horizon = 0.0

    log_d: list[float] = []
    log_g: list[float] = []
    dec_t: list[float] = []
    dec_id: list[int] = []
    dec_act: list[int] = []

    i = 0
    while True:
        ta = gen[i] if i < n else _INF
        if k > 0:
            td = t_prev + (pool[0][0] - V) * k
            if td <= t_prev:
                # rounding drift or float absorption: events strictly advance
                td = nextafter(t_prev, _INF)
        else:
            td = _INF
        if k > 0 and td <= ta:
            t = td
            V += (t - t_prev) / k
            t_prev = t
            _, uid = heappop(pool)
            k -= 1
            horizon = t
            status[uid] = DELIVERED
            deliver_time[uid] = t
            if want_decisions:
                dec_t.append(t)
                dec_id.append(uid)
                dec_act.append(DELIVER)
            if gen[uid] > freshest:
                freshest = gen[uid]
                log_d.append(t)
                log_g.append(gen[uid])
        elif i < n:
            t = ta
            if k > 0:
                V += (t - t_prev) / k
            t_prev = t
            j = i
            i += 1
            status[j] = IN_SERVICE
            first_start[j] = t
            heappush(pool, (V + size[j], j))
            k += 1
            if want_decisions:
                dec_t.append(t)
                dec_id.append(j)
                dec_act.append(START)
        else:
            break

    return (np.asarray(deliver_time), np.asarray(first_start),
            np.asarray(status, dtype=np.int8),
            np.asarray(log_d), np.asarray(log_g),
            np.asarray(dec_t), np.asarray(dec_id, dtype=np.int64),
            np.asarray(dec_act, dtype=np.int8), horizon)
