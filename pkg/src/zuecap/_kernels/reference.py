"""Branch and bound kernels on 64-bit vertex sets.

Vertex sets are plain ints used as bitmasks: bit v is vertex v.  The
compiled twin in ``_speedups.pyx`` mirrors this module statement for
statement; any change here must land there too, and the two must return
identical results, witnesses included.

``solve_independent`` branches on the lowest-index undecided vertex and
tries "include" before "exclude", so the first maximum it encounters is
the lexicographically least one, and that is the witness it returns.
Every pruning rule preserves that contract: a branch is discarded only
when it cannot hold a set strictly larger than the incumbent, and a
vertex is forced into the solution only when every maximum of the
current subproblem provably contains it.

``solve_acyclic`` instead branches on a directed cycle with the fewest
undecided vertices: one of them has to go, so the children exclude each
in turn (with the earlier ones committed to the solution), and the
all-include child is dropped as infeasible.  A cycle whose undecided
part is a single vertex excludes that vertex outright.  The witness is
a deterministic maximum but not necessarily the lexicographically least
one.

``lower_hint`` starts the incumbent at ``lower_hint - 1`` so subtrees
that cannot beat the hint are cut immediately.  If the hint overshoots
the true maximum nothing is ever recorded and ValueError is raised.

``partitions`` is a sequence of families, each family a sequence of
pruning facts ``(mask, cap)``: every feasible set meets ``mask`` in at
most ``cap`` vertices.  Masks must be pairwise disjoint within their
family; vertices a family leaves uncovered count one-for-one.  Each
family yields a valid upper bound on its own, so the search prunes with
the smallest one.  Soundness is the caller's problem: a cap that only
holds for a narrower class than the kernel's feasible sets would prune
living branches.
"""

from collections import deque

__all__ = ["solve_independent", "solve_acyclic"]


def _cover_bound(cand, conflict):
    # greedy clique cover of the candidates; a feasible set meets each
    # clique at most once, so the number of cliques bounds the additions
    bound = 0
    m = cand
    while m:
        b = m & -m
        m ^= b
        bound += 1
        pool = conflict[b.bit_length() - 1] & m
        while pool:
            pb = pool & -pool
            m ^= pb
            pool &= conflict[pb.bit_length() - 1]
    return bound


def _parts_bound(live, families):
    best = -1
    for parts, uncovered in families:
        total = (live & uncovered).bit_count()
        for mask, cap in parts:
            inside = (live & mask).bit_count()
            total += inside if inside < cap else cap
        if best < 0 or total < best:
            best = total
    return best


def _family_data(partitions, full):
    families = []
    for fam in partitions:
        parts = [(int(mask) & full, int(cap)) for mask, cap in fam]
        covered = 0
        for mask, _ in parts:
            covered |= mask
        if parts:
            families.append((parts, full & ~covered))
    return families


def solve_independent(n, conflict, lower_hint=0, partitions=()):
    """Largest set with no two members in conflict, plus its witness.

    ``conflict[v]`` is the bitmask of vertices incompatible with v; it
    must be symmetric and self-free.  Returns ``(size, mask)`` for the
    lexicographically least maximum.
    """
    full = (1 << n) - 1
    best_size = lower_hint - 1
    best_mask = 0
    found = False
    families = _family_data(partitions, full)

    def dfs(chosen, csize, cand):
        nonlocal best_size, best_mask, found
        # a conflict-free candidate is in every maximum; take it now
        forced = 0
        m = cand
        while m:
            b = m & -m
            m ^= b
            if conflict[b.bit_length() - 1] & cand == 0:
                forced |= b
        if forced:
            chosen |= forced
            csize += forced.bit_count()
            cand &= ~forced
        if csize + cand.bit_count() <= best_size:
            return
        if cand == 0:
            if csize > best_size:
                best_size, best_mask, found = csize, chosen, True
            return
        if families and _parts_bound(chosen | cand, families) <= best_size:
            return
        if csize + _cover_bound(cand, conflict) <= best_size:
            return
        b = cand & -cand
        dfs(chosen | b, csize + 1, cand & ~conflict[b.bit_length() - 1] & ~b)
        dfs(chosen, csize, cand & ~b)

    dfs(0, 0, full)
    if not found:
        raise ValueError("lower_hint exceeds the true maximum")
    return best_size, best_mask


def solve_acyclic(n, out_masks, in_masks, lower_hint=0, partitions=(), stop_first=False):
    """Largest vertex set inducing no directed cycle, plus its witness.

    ``out_masks``/``in_masks`` are successor and predecessor bitmasks.
    Branching follows a directed cycle with the fewest undecided
    vertices, found by 0/1 breadth-first search (entering an undecided
    vertex costs 1, a committed one 0).  Besides the clique cover over
    two-cycles and the partition caps, subtrees are cut with a packing
    bound: cycles sharing no undecided vertex each force one more
    exclusion.

    With ``stop_first`` the search ends at the first improvement over
    the incumbent; useful when ``lower_hint`` equals the exact maximum
    and only a witness is wanted.
    """
    full = (1 << n) - 1
    best_size = lower_hint - 1
    best_mask = 0
    found = False
    done = False
    families = _family_data(partitions, full)
    conflict = [out_masks[v] & in_masks[v] & full for v in range(n)]
    dist = [0] * n
    parent = [0] * n

    def creates_cycle(v, chosen):
        # any new cycle must pass through v: walk forward from v inside
        # chosen + v and see whether a predecessor of v is reachable
        s = chosen | 1 << v
        target = in_masks[v] & s
        if target == 0:
            return False
        reach = out_masks[v] & s
        frontier = reach
        while frontier and reach & target == 0:
            nxt = 0
            m = frontier
            while m:
                b = m & -m
                m ^= b
                nxt |= out_masks[b.bit_length() - 1]
            frontier = nxt & s & ~reach
            reach |= frontier
        return reach & target != 0

    def cycle_through(v, world, weighted):
        # cheapest directed cycle through v inside world, cost counting
        # members that lie in weighted; returns (cost, members mask) or
        # (-1, 0) when no cycle uses v
        for i in range(n):
            dist[i] = -1
        dq = deque()
        m = out_masks[v] & world
        while m:
            b = m & -m
            m ^= b
            u = b.bit_length() - 1
            c = 1 if weighted >> u & 1 else 0
            dist[u] = c
            parent[u] = -1
            if c:
                dq.append((u, c))
            else:
                dq.appendleft((u, c))
        while dq:
            u, d = dq.popleft()
            if d > dist[u]:
                continue
            m = out_masks[u] & world
            while m:
                b = m & -m
                m ^= b
                w = b.bit_length() - 1
                c = d + (1 if weighted >> w & 1 else 0)
                if dist[w] < 0 or c < dist[w]:
                    dist[w] = c
                    parent[w] = u
                    if c == d:
                        dq.appendleft((w, c))
                    else:
                        dq.append((w, c))
        vcost = 1 if weighted >> v & 1 else 0
        best_cost = -1
        best_end = -1
        m = in_masks[v] & world
        while m:
            b = m & -m
            m ^= b
            u = b.bit_length() - 1
            if dist[u] >= 0 and (best_cost < 0 or vcost + dist[u] < best_cost):
                best_cost = vcost + dist[u]
                best_end = u
        if best_cost < 0:
            return -1, 0
        members = 1 << v
        u = best_end
        while u >= 0:
            members |= 1 << u
            u = parent[u]
        return best_cost, members

    def packing_bound(chosen, cand):
        # cycles pairwise disjoint on undecided vertices; each one forces
        # a distinct exclusion among the candidates
        nu = 0
        avail = cand
        m = avail
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            if avail >> v & 1 == 0:
                continue
            p = conflict[v] & avail & ~b
            if p:
                avail &= ~(b | (p & -p))
                nu += 1
        m = avail
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            if avail >> v & 1 == 0:
                continue
            cost, members = cycle_through(v, chosen | avail, avail)
            if cost >= 0:
                avail &= ~members
                nu += 1
        return nu

    def min_undecided_cycle(chosen, cand):
        world = chosen | cand
        best_cost = -1
        best_members = 0
        m = cand
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            cost, members = cycle_through(v, world, cand)
            if cost >= 0 and (best_cost < 0 or cost < best_cost):
                best_cost = cost
                best_members = members
                if cost <= 1:
                    break
        return best_cost, best_members

    def dfs(chosen, csize, cand):
        nonlocal best_size, best_mask, found, done
        while True:
            live = chosen | cand
            # a candidate no cycle inside live can use is in every maximum
            forced = 0
            m = cand
            while m:
                b = m & -m
                m ^= b
                v = b.bit_length() - 1
                if in_masks[v] & live == 0 or out_masks[v] & live == 0:
                    forced |= b
            if forced:
                chosen |= forced
                csize += forced.bit_count()
                cand &= ~forced
            if csize + cand.bit_count() <= best_size:
                return
            if cand == 0:
                if csize > best_size:
                    best_size, best_mask, found = csize, chosen, True
                    if stop_first:
                        done = True
                return
            if families and _parts_bound(chosen | cand, families) <= best_size:
                return
            if csize + _cover_bound(cand, conflict) <= best_size:
                return
            if csize + cand.bit_count() - packing_bound(chosen, cand) <= best_size:
                return
            cost, members = min_undecided_cycle(chosen, cand)
            if cost < 0:
                # no cycle left: every candidate joins
                csize += cand.bit_count()
                if csize > best_size:
                    best_size, best_mask, found = csize, chosen | cand, True
                    if stop_first:
                        done = True
                return
            if cost == 1:
                # the cycle is otherwise committed; its one undecided
                # vertex can never join
                cand &= ~(members & cand)
                continue
            break
        # some undecided member of the cycle must go; taking them all
        # would close it
        m = members & cand
        while m:
            b = m & -m
            m ^= b
            dfs(chosen, csize, cand & ~b)
            if done:
                return
            if m == 0:
                break
            if creates_cycle(b.bit_length() - 1, chosen):
                break
            chosen |= b
            csize += 1
            cand &= ~b

    dfs(0, 0, full)
    if not found:
        raise ValueError("lower_hint exceeds the true maximum")
    return best_size, best_mask
