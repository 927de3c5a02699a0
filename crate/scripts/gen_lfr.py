#!/usr/bin/env python3
"""Generate LFR benchmark instances with networkit.

Layout: OUT/mu_<mu>/trial_<k>/network.dat and community.dat, both
one-indexed. network.dat lists every edge in both directions, tab-separated,
as the reference LFR tool does.
"""
import argparse
import os

import networkit as nk


def write_instance(path: str, graph, partition) -> None:
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, "network.dat"), "w") as f:
        for u, v in graph.iterEdges():
            f.write(f"{u + 1}\t{v + 1}\n{v + 1}\t{u + 1}\n")
    with open(os.path.join(path, "community.dat"), "w") as f:
        for u in range(graph.numberOfNodes()):
            f.write(f"{u + 1}\t{partition[u] + 1}\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/lfr")
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--avg-degree", type=float, default=10)
    ap.add_argument("--max-degree", type=int, default=50)
    ap.add_argument("--degree-exp", type=float, default=2)
    ap.add_argument("--min-community", type=int, default=20)
    ap.add_argument("--max-community", type=int, default=100)
    ap.add_argument("--community-exp", type=float, default=1)
    ap.add_argument("--mus", default="0.1,0.2,0.3,0.4,0.5,0.6")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    for i, mu in enumerate(float(x) for x in args.mus.split(",")):
        for k in range(args.trials):
            nk.setSeed(args.seed * 1_000_003 + i * 1000 + k, False)
            gen = nk.generators.LFRGenerator(args.n)
            gen.generatePowerlawDegreeSequence(args.avg_degree, args.max_degree, -args.degree_exp)
            gen.generatePowerlawCommunitySizeSequence(
                args.min_community, args.max_community, -args.community_exp
            )
            gen.setMu(mu)
            gen.run()
            graph, partition = gen.getGraph(), gen.getPartition()
            path = os.path.join(args.out, f"mu_{mu}", f"trial_{k:02d}")
            write_instance(path, graph, partition)
            print(
                f"{path}: n={graph.numberOfNodes()} m={graph.numberOfEdges()} "
                f"communities={partition.numberOfSubsets()}"
            )


if __name__ == "__main__":
    main()
