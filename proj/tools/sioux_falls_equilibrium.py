#!/usr/bin/env python3
"""Regenerates data/sioux_falls/SiouxFalls_flow.tntp.

Solves the BPR user equilibrium of the TNTP network and trip table with a
path-based gradient projection method down to a relative gap of 1e-13. Link
flows at user equilibrium are unique, so the output reproduces the published
best-known Sioux Falls flows.

usage: sioux_falls_equilibrium.py [data/sioux_falls]
"""
import heapq
import pathlib
import re
import sys

import numpy as np


def read_links(path):
    links = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith(("<", "~")):
            continue
        f = line.rstrip(";").split()
        links.append((int(f[0]) - 1, int(f[1]) - 1, float(f[2]), float(f[4]), float(f[5]), float(f[6])))
    return links


def read_trips(path, zones):
    demand = np.zeros((zones, zones))
    origin = None
    for line in path.read_text().splitlines():
        if line.startswith("Origin"):
            origin = int(line.split()[1]) - 1
        elif origin is not None:
            for dest, value in re.findall(r"(\d+)\s*:\s*([0-9.eE+-]+)", line):
                demand[origin, int(dest) - 1] = float(value)
    return demand


def main():
    base = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/sioux_falls")
    links = read_links(base / "SiouxFalls_net.tntp")
    nodes = 1 + max(max(l[0], l[1]) for l in links)
    demand = read_trips(base / "SiouxFalls_trips.tntp", nodes)
    tail = [l[0] for l in links]
    head = [l[1] for l in links]
    cap = np.array([l[2] for l in links])
    fft = np.array([l[3] for l in links])
    b = np.array([l[4] for l in links])
    power = np.array([l[5] for l in links])
    out = [[] for _ in range(nodes)]
    for i, t in enumerate(tail):
        out[t].append(i)

    def cost(x):
        return fft * (1 + b * (x / cap) ** power)

    def slope(x):
        return fft * b * power * x ** (power - 1) / cap ** power

    def shortest(origin, c):
        dist = [float("inf")] * nodes
        pred = [-1] * nodes
        dist[origin] = 0.0
        heap = [(0.0, origin)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for a in out[u]:
                nd = d + c[a]
                if nd < dist[head[a]]:
                    dist[head[a]] = nd
                    pred[head[a]] = a
                    heapq.heappush(heap, (nd, head[a]))
        return dist, pred

    def trace(pred, origin, dest):
        path = []
        v = dest
        while v != origin:
            path.append(pred[v])
            v = tail[pred[v]]
        return tuple(reversed(path))

    x = np.zeros(len(links))
    od_paths = {}
    for o in range(nodes):
        _, pred = shortest(o, cost(x))
        for d in range(nodes):
            if o != d and demand[o, d] > 0:
                p = trace(pred, o, d)
                od_paths[(o, d)] = {p: demand[o, d]}
                x[list(p)] += demand[o, d]

    for iteration in range(1000):
        for o in range(nodes):
            _, pred = shortest(o, cost(x))
            for d in range(nodes):
                flows = od_paths.get((o, d))
                if flows is None:
                    continue
                best = trace(pred, o, d)
                flows.setdefault(best, 0.0)
                for p in list(flows):
                    if p == best or flows[p] <= 0:
                        continue
                    c, g = cost(x), slope(x)
                    excess = sum(c[a] for a in p) - sum(c[a] for a in best)
                    curvature = sum(g[a] for a in set(p) ^ set(best))
                    if curvature <= 0 or excess <= 0:
                        continue
                    step = min(flows[p], excess / curvature)
                    flows[p] -= step
                    flows[best] += step
                    x[list(p)] -= step
                    x[list(best)] += step
                for p in [p for p, f in flows.items() if f <= 1e-12 and p != best]:
                    del flows[p]
        c = cost(x)
        total = c @ x
        lower = sum(demand[o] @ np.nan_to_num(np.array(shortest(o, c)[0]), posinf=0) for o in range(nodes))
        gap = (total - lower) / total
        if gap < 1e-13:
            break
    print(f"relative gap {gap:.3e} after {iteration + 1} sweeps", file=sys.stderr)

    c = cost(x)
    with open(base / "SiouxFalls_flow.tntp", "w") as fh:
        fh.write("From \tTo \tVolume \tCost \n")
        for (t, h, *_), v, cv in zip(links, x, c):
            fh.write(f"{t + 1} \t{h + 1} \t{v:.6f} \t{cv:.6f} \n")


if __name__ == "__main__":
    main()
