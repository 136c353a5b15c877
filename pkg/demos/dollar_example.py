"""Splitting a dollar between a risk-neutral and a risk-averse type.

Prints the interim utility set of symmetric mechanisms and the mechanism
each solution concept picks, with interim utilities per type.
"""
from bayesbargain import solve
from bayesbargain.feasible import project_interim
from bayesbargain.fixtures import dollar_problem
from bayesbargain.numerics import fmt
from bayesbargain.solutions import table10


def main():
    p = dollar_problem()
    poly = project_interim(p, symmetric=True)
    print("symmetric interim set, vertices (neutral, averse):")
    for x, y in poly.vertices():
        print(f"  ({fmt(x)}, {fmt(y)})")
    for concept in ("utilitarian", "nash", "principal:1", "random-dictatorship"):
        sol = solve(p, concept)
        u = sol.interim.values[0]
        print(f"\n{concept}: player 1 interim neutral {float(u[0]):.4f}, averse {float(u[1]):.4f}")
        for row in table10(sol.mechanism):
            print("  " + "  ".join("(" + ", ".join(fmt(x) for x in cell) + ")" for cell in row))


if __name__ == "__main__":
    main()
