"""Maximum bipartite matching via Hopcroft-Karp (BFS layering + DFS phases)."""

from __future__ import annotations

from collections import deque
from typing import Sequence

_INF = -1


def maximum_matching(adjacency: Sequence[Sequence[int]], n_right: int
                     ) -> tuple[int, list[int]]:
    """Maximum matching of left vertices 0..len(adjacency)-1 to right vertices.

    adjacency[u] lists the right neighbours of left vertex u.  Returns the
    matching size and, per left vertex, its matched right vertex or -1.
    Processing order is fixed, so the result is deterministic.
    """
    n_left = len(adjacency)
    match_left = [-1] * n_left
    match_right = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_left[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        reachable_free = False
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                w = match_right[v]
                if w == -1:
                    reachable_free = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return reachable_free

    def dfs(u: int) -> bool:
        for v in adjacency[u]:
            w = match_right[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_left[u] = v
                match_right[v] = u
                return True
        dist[u] = _INF
        return False

    size = 0
    while bfs():
        for u in range(n_left):
            if match_left[u] == -1 and dfs(u):
                size += 1
    return size, match_left


def perfect_matching(adjacency: Sequence[Sequence[int]], n_right: int
                     ) -> list[int] | None:
    """Perfect matching of all left vertices, or None if none exists."""
    if len(adjacency) > n_right:
        return None
    size, match_left = maximum_matching(adjacency, n_right)
    if size != len(adjacency):
        return None
    return match_left
