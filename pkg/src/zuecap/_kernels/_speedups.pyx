# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``reference.py``.

Statement-for-statement mirror of the pure kernels; both must return
identical results, witnesses included.  Read reference.py for the
contracts, soundness notes and the witness guarantees.
"""

DEF MAX_PARTS = 512
# 0/1-BFS ring buffer: pushes per search are bounded by one strict
# distance improvement per (vertex, value) pair plus the seeds
DEF DQ_CAP = 8448
DEF DQ_MID = 4224

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

ctypedef unsigned long long u64


cdef struct SearchState:
    u64 *conflict
    u64 *out_masks
    u64 *in_masks
    u64 *part_masks
    long *part_limits
    int *fam_start
    u64 *fam_uncovered
    int n_fams
    int n
    long *dist
    int *parent
    int *dq_v
    long *dq_d
    u64 best_mask
    long best_size
    bint found
    bint done
    bint stop_first


cdef long _cover_bound(u64 cand, u64 *conflict) noexcept nogil:
    cdef long bound = 0
    cdef u64 m = cand
    cdef u64 b, pb
    cdef u64 pool
    while m:
        b = m & (0 - m)
        m ^= b
        bound += 1
        pool = conflict[__builtin_ctzll(b)] & m
        while pool:
            pb = pool & (0 - pool)
            m ^= pb
            pool &= conflict[__builtin_ctzll(pb)]
    return bound


cdef long _parts_bound(u64 live, SearchState *st) noexcept nogil:
    cdef long best = -1
    cdef long total, inside
    cdef int f, i
    for f in range(st.n_fams):
        total = __builtin_popcountll(live & st.fam_uncovered[f])
        for i in range(st.fam_start[f], st.fam_start[f + 1]):
            inside = __builtin_popcountll(live & st.part_masks[i])
            total += inside if inside < st.part_limits[i] else st.part_limits[i]
        if best < 0 or total < best:
            best = total
    return best


cdef void _dfs_independent(SearchState *st, u64 chosen, long csize, u64 cand) noexcept nogil:
    cdef u64 forced = 0
    cdef u64 m = cand
    cdef u64 b
    while m:
        b = m & (0 - m)
        m ^= b
        if st.conflict[__builtin_ctzll(b)] & cand == 0:
            forced |= b
    if forced:
        chosen |= forced
        csize += __builtin_popcountll(forced)
        cand &= ~forced
    if csize + __builtin_popcountll(cand) <= st.best_size:
        return
    if cand == 0:
        if csize > st.best_size:
            st.best_size = csize
            st.best_mask = chosen
            st.found = True
        return
    if st.n_fams and _parts_bound(chosen | cand, st) <= st.best_size:
        return
    if csize + _cover_bound(cand, st.conflict) <= st.best_size:
        return
    b = cand & (0 - cand)
    _dfs_independent(st, chosen | b, csize + 1, cand & ~st.conflict[__builtin_ctzll(b)] & ~b)
    _dfs_independent(st, chosen, csize, cand & ~b)


cdef bint _creates_cycle(SearchState *st, int v, u64 chosen) noexcept nogil:
    cdef u64 s = chosen | (<u64>1 << v)
    cdef u64 target = st.in_masks[v] & s
    if target == 0:
        return False
    cdef u64 reach = st.out_masks[v] & s
    cdef u64 frontier = reach
    cdef u64 nxt, m, b
    while frontier and reach & target == 0:
        nxt = 0
        m = frontier
        while m:
            b = m & (0 - m)
            m ^= b
            nxt |= st.out_masks[__builtin_ctzll(b)]
        frontier = nxt & s & ~reach
        reach |= frontier
    return reach & target != 0


cdef long _cycle_through(SearchState *st, int v, u64 world, u64 weighted,
                         u64 *members_out) noexcept nogil:
    # cheapest directed cycle through v inside world, cost counting
    # members that lie in weighted; fills the member mask and returns the
    # cost, or -1 when no cycle uses v
    cdef int i, u, w, head, tail
    cdef long d, c, vcost, best_cost
    cdef int best_end
    cdef u64 m, b
    for i in range(st.n):
        st.dist[i] = -1
    head = DQ_MID
    tail = DQ_MID
    m = st.out_masks[v] & world
    while m:
        b = m & (0 - m)
        m ^= b
        u = __builtin_ctzll(b)
        c = 1 if (weighted >> u) & 1 else 0
        st.dist[u] = c
        st.parent[u] = -1
        if c:
            st.dq_v[tail] = u
            st.dq_d[tail] = c
            tail += 1
        else:
            head -= 1
            st.dq_v[head] = u
            st.dq_d[head] = c
    while head < tail:
        u = st.dq_v[head]
        d = st.dq_d[head]
        head += 1
        if d > st.dist[u]:
            continue
        m = st.out_masks[u] & world
        while m:
            b = m & (0 - m)
            m ^= b
            w = __builtin_ctzll(b)
            c = d + (1 if (weighted >> w) & 1 else 0)
            if st.dist[w] < 0 or c < st.dist[w]:
                st.dist[w] = c
                st.parent[w] = u
                if c == d:
                    head -= 1
                    st.dq_v[head] = w
                    st.dq_d[head] = c
                else:
                    st.dq_v[tail] = w
                    st.dq_d[tail] = c
                    tail += 1
    vcost = 1 if (weighted >> v) & 1 else 0
    best_cost = -1
    best_end = -1
    m = st.in_masks[v] & world
    while m:
        b = m & (0 - m)
        m ^= b
        u = __builtin_ctzll(b)
        if st.dist[u] >= 0 and (best_cost < 0 or vcost + st.dist[u] < best_cost):
            best_cost = vcost + st.dist[u]
            best_end = u
    if best_cost < 0:
        members_out[0] = 0
        return -1
    cdef u64 members = <u64>1 << v
    i = best_end
    while i >= 0:
        members |= <u64>1 << i
        i = st.parent[i]
    members_out[0] = members
    return best_cost


cdef long _packing_bound(SearchState *st, u64 chosen, u64 cand) noexcept nogil:
    # cycles pairwise disjoint on undecided vertices; each one forces a
    # distinct exclusion among the candidates
    cdef long nu = 0
    cdef u64 avail = cand
    cdef u64 m = avail
    cdef u64 b, p, members
    cdef int v
    cdef long cost
    while m:
        b = m & (0 - m)
        m ^= b
        v = __builtin_ctzll(b)
        if (avail >> v) & 1 == 0:
            continue
        p = st.conflict[v] & avail & ~b
        if p:
            avail &= ~(b | (p & (0 - p)))
            nu += 1
    m = avail
    while m:
        b = m & (0 - m)
        m ^= b
        v = __builtin_ctzll(b)
        if (avail >> v) & 1 == 0:
            continue
        cost = _cycle_through(st, v, chosen | avail, avail, &members)
        if cost >= 0:
            avail &= ~members
            nu += 1
    return nu


cdef long _min_undecided_cycle(SearchState *st, u64 chosen, u64 cand,
                               u64 *members_out) noexcept nogil:
    cdef u64 world = chosen | cand
    cdef long best_cost = -1
    cdef u64 best_members = 0
    cdef u64 m = cand
    cdef u64 b, members
    cdef int v
    cdef long cost
    while m:
        b = m & (0 - m)
        m ^= b
        v = __builtin_ctzll(b)
        cost = _cycle_through(st, v, world, cand, &members)
        if cost >= 0 and (best_cost < 0 or cost < best_cost):
            best_cost = cost
            best_members = members
            if cost <= 1:
                break
    members_out[0] = best_members
    return best_cost


cdef void _dfs_acyclic(SearchState *st, u64 chosen, long csize, u64 cand) noexcept nogil:
    cdef u64 live, forced, m, b, members
    cdef int v
    cdef long cost
    while True:
        live = chosen | cand
        # a candidate no cycle inside live can use is in every maximum
        forced = 0
        m = cand
        while m:
            b = m & (0 - m)
            m ^= b
            v = __builtin_ctzll(b)
            if st.in_masks[v] & live == 0 or st.out_masks[v] & live == 0:
                forced |= b
        if forced:
            chosen |= forced
            csize += __builtin_popcountll(forced)
            cand &= ~forced
        if csize + __builtin_popcountll(cand) <= st.best_size:
            return
        if cand == 0:
            if csize > st.best_size:
                st.best_size = csize
                st.best_mask = chosen
                st.found = True
                if st.stop_first:
                    st.done = True
            return
        if st.n_fams and _parts_bound(chosen | cand, st) <= st.best_size:
            return
        if csize + _cover_bound(cand, st.conflict) <= st.best_size:
            return
        if csize + __builtin_popcountll(cand) - _packing_bound(st, chosen, cand) <= st.best_size:
            return
        cost = _min_undecided_cycle(st, chosen, cand, &members)
        if cost < 0:
            # no cycle left: every candidate joins
            csize += __builtin_popcountll(cand)
            if csize > st.best_size:
                st.best_size = csize
                st.best_mask = chosen | cand
                st.found = True
                if st.stop_first:
                    st.done = True
            return
        if cost == 1:
            # the cycle is otherwise committed; its one undecided vertex
            # can never join
            cand &= ~(members & cand)
            continue
        break
    # some undecided member of the cycle must go; taking them all would
    # close it
    m = members & cand
    while m:
        b = m & (0 - m)
        m ^= b
        _dfs_acyclic(st, chosen, csize, cand & ~b)
        if st.done:
            return
        if m == 0:
            break
        if _creates_cycle(st, __builtin_ctzll(b), chosen):
            break
        chosen |= b
        csize += 1
        cand &= ~b


cdef int _load_families(partitions, u64 full, u64 *part_masks, long *part_limits,
                        int *fam_start, u64 *fam_uncovered) except -1:
    cdef int n_fams = 0
    cdef int total = 0
    cdef u64 covered, pm
    for fam in partitions:
        covered = 0
        fam_start[n_fams] = total
        empty = True
        for mask, cap in fam:
            if total >= MAX_PARTS:
                raise ValueError("too many partition facts for the compiled kernel")
            pm = <u64>mask & full
            part_masks[total] = pm
            part_limits[total] = cap
            covered |= pm
            total += 1
            empty = False
        if empty:
            continue
        fam_uncovered[n_fams] = full & ~covered
        n_fams += 1
        fam_start[n_fams] = total
    return n_fams


def solve_independent(n, conflict, lower_hint=0, partitions=()):
    if n > 64:
        raise ValueError("compiled kernel is limited to 64 vertices")
    cdef u64 conf_buf[64]
    cdef u64 part_masks[MAX_PARTS]
    cdef long part_limits[MAX_PARTS]
    cdef int fam_start[MAX_PARTS + 1]
    cdef u64 fam_uncovered[MAX_PARTS]
    cdef SearchState st
    cdef u64 full = <u64>0xFFFFFFFFFFFFFFFF if n == 64 else (<u64>1 << n) - 1
    cdef int i
    for i in range(n):
        conf_buf[i] = <u64>conflict[i]
    st.conflict = conf_buf
    st.out_masks = NULL
    st.in_masks = NULL
    st.part_masks = part_masks
    st.part_limits = part_limits
    st.fam_start = fam_start
    st.fam_uncovered = fam_uncovered
    st.n_fams = _load_families(partitions, full, part_masks, part_limits,
                               fam_start, fam_uncovered)
    st.n = n
    st.dist = NULL
    st.parent = NULL
    st.dq_v = NULL
    st.dq_d = NULL
    st.best_mask = 0
    st.best_size = <long>lower_hint - 1
    st.found = False
    st.done = False
    st.stop_first = False
    with nogil:
        _dfs_independent(&st, 0, 0, full)
    if not st.found:
        raise ValueError("lower_hint exceeds the true maximum")
    return st.best_size, st.best_mask


def solve_acyclic(n, out_masks, in_masks, lower_hint=0, partitions=(), stop_first=False):
    if n > 64:
        raise ValueError("compiled kernel is limited to 64 vertices")
    cdef u64 out_buf[64]
    cdef u64 in_buf[64]
    cdef u64 conf_buf[64]
    cdef u64 part_masks[MAX_PARTS]
    cdef long part_limits[MAX_PARTS]
    cdef int fam_start[MAX_PARTS + 1]
    cdef u64 fam_uncovered[MAX_PARTS]
    cdef long dist_buf[64]
    cdef int parent_buf[64]
    cdef int dq_v_buf[DQ_CAP]
    cdef long dq_d_buf[DQ_CAP]
    cdef SearchState st
    cdef u64 full = <u64>0xFFFFFFFFFFFFFFFF if n == 64 else (<u64>1 << n) - 1
    cdef int i
    for i in range(n):
        out_buf[i] = <u64>out_masks[i]
        in_buf[i] = <u64>in_masks[i]
        conf_buf[i] = out_buf[i] & in_buf[i] & full
    st.conflict = conf_buf
    st.out_masks = out_buf
    st.in_masks = in_buf
    st.part_masks = part_masks
    st.part_limits = part_limits
    st.fam_start = fam_start
    st.fam_uncovered = fam_uncovered
    st.n_fams = _load_families(partitions, full, part_masks, part_limits,
                               fam_start, fam_uncovered)
    st.n = n
    st.dist = dist_buf
    st.parent = parent_buf
    st.dq_v = dq_v_buf
    st.dq_d = dq_d_buf
    st.best_mask = 0
    st.best_size = <long>lower_hint - 1
    st.found = False
    st.done = False
    st.stop_first = stop_first
    with nogil:
        _dfs_acyclic(&st, 0, 0, full)
    if not st.found:
        raise ValueError("lower_hint exceeds the true maximum")
    return st.best_size, st.best_mask
