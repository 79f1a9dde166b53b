"""Compiled graph kernels. All take CSR adjacency (indptr, indices) plus an
alive mask; dead nodes and their incident edges are invisible."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def component_labels(indptr, indices, alive):
    """Label alive nodes by connected component (order of discovery); dead -> -1."""
    n = alive.shape[0]
    labels = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    comp = 0
    for s in range(n):
        if alive[s] and labels[s] < 0:
            labels[s] = comp
            queue[0] = s
            head, tail = 0, 1
            while head < tail:
                u = queue[head]
                head += 1
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if alive[v] and labels[v] < 0:
                        labels[v] = comp
                        queue[tail] = v
                        tail += 1
            comp += 1
    return labels


@njit(cache=True)
def top2_component_sizes(indptr, indices, alive):
    """Sizes of the largest and second-largest connected components."""
    n = alive.shape[0]
    seen = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int64)
    best = 0
    second = 0
    for s in range(n):
        if alive[s] and not seen[s]:
            seen[s] = True
            queue[0] = s
            head, tail = 0, 1
            while head < tail:
                u = queue[head]
                head += 1
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if alive[v] and not seen[v]:
                        seen[v] = True
                        queue[tail] = v
                        tail += 1
            if tail > best:
                second = best
                best = tail
            elif tail > second:
                second = tail
    return best, second


@njit(cache=True)
def betweenness_scores(indptr, indices, alive):
    """Exact shortest-path betweenness over unordered node pairs.

    Single-pass accumulation: one BFS per source, then dependencies pushed
    back down the shortest-path DAG in reverse visit order. The ordered-pair
    sum is halved at the end. Disconnected pairs contribute nothing.
    """
    n = alive.shape[0]
    bc = np.zeros(n, np.float64)
    dist = np.empty(n, np.int64)
    sigma = np.empty(n, np.float64)
    delta = np.empty(n, np.float64)
    queue = np.empty(n, np.int64)
    for s in range(n):
        if not alive[s]:
            continue
        for i in range(n):
            dist[i] = -1
            sigma[i] = 0.0
            delta[i] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if not alive[v]:
                    continue
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue[tail] = v
                    tail += 1
                if dist[v] == du + 1:
                    sigma[v] += sigma[u]
        # BFS order is nondecreasing in dist, so the reverse walk sees every
        # node after all of its followers
        for idx in range(tail - 1, 0, -1):
            w = queue[idx]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w]
            for k in range(indptr[w], indptr[w + 1]):
                v = indices[k]
                if alive[v] and dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            bc[w] += delta[w]
    return bc * 0.5


@njit(cache=True)
def static_attack_curve(indptr, indices, alive0, order):
    """Component sizes after each removal of a fixed order. Returns integer
    s1, s2 arrays of length len(order) + 1 (entry 0 is the intact graph)."""
    steps = order.shape[0]
    alive = alive0.copy()
    s1 = np.empty(steps + 1, np.int64)
    s2 = np.empty(steps + 1, np.int64)
    b, c = top2_component_sizes(indptr, indices, alive)
    s1[0] = b
    s2[0] = c
    for i in range(steps):
        alive[order[i]] = False
        b, c = top2_component_sizes(indptr, indices, alive)
        s1[i + 1] = b
        s2[i + 1] = c
    return s1, s2


@njit(cache=True)
def betweenness_attack(indptr, indices, alive0):
    """Remove the alive node of maximum recomputed betweenness (ties: smallest
    id) until none remain. Returns (order, s1, s2) with integer sizes."""
    n = alive0.shape[0]
    alive = alive0.copy()
    remaining = 0
    for i in range(n):
        if alive[i]:
            remaining += 1
    order = np.empty(remaining, np.int64)
    s1 = np.empty(remaining + 1, np.int64)
    s2 = np.empty(remaining + 1, np.int64)
    b, c = top2_component_sizes(indptr, indices, alive)
    s1[0] = b
    s2[0] = c
    for step in range(remaining):
        bc = betweenness_scores(indptr, indices, alive)
        target = -1
        best = -1.0
        for i in range(n):
            if alive[i] and bc[i] > best:
                best = bc[i]
                target = i
        alive[target] = False
        order[step] = target
        b, c = top2_component_sizes(indptr, indices, alive)
        s1[step + 1] = b
        s2[step + 1] = c
    return order, s1, s2
