#!/usr/bin/env python3
"""Write Zachary's karate club network (as shipped with networkx) to GML.

Each node's `value` is its faction after the split (0 = Mr. Hi, 1 = Officer).
"""
import argparse

import networkx as nx


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/karate.gml")
    args = ap.parse_args()

    g = nx.karate_club_graph()
    lines = ["graph", "[", "  directed 0"]
    for v in sorted(g.nodes):
        club = g.nodes[v]["club"]
        lines += [
            "  node",
            "  [",
            f"    id {v}",
            f'    label "{v + 1}"',
            f"    value {0 if club == 'Mr. Hi' else 1}",
            "  ]",
        ]
    for u, v in sorted(tuple(sorted(e)) for e in g.edges):
        lines += ["  edge", "  [", f"    source {u}", f"    target {v}", "  ]"]
    lines.append("]")
    with open(args.out, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"{args.out}: n={g.number_of_nodes()} m={g.number_of_edges()}")


if __name__ == "__main__":
    main()
