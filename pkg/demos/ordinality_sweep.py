"""Random problems with a linear frontier: how far can efficient IC IR
mechanisms separate a player's types?  With full support, not at all.
On a curve-shaped prior with zero cells they can."""
import sys

from bayesbargain import ordinality_gap
from bayesbargain.generators import curve_problem, instance_rng, random_problem
from bayesbargain.numerics import fmt


def main(count=10):
    for i in range(count):
        p = random_problem(instance_rng("demo", i), linear=True)
        print(f"full support {p.n_types(0)}x{p.n_types(1)}: gap {fmt(ordinality_gap(p).value)}")
    for i in range(3):
        p = curve_problem(instance_rng("demo-curve", i))
        gap = ordinality_gap(p)
        print(f"curve prior {p.n_types(0)}x{p.n_types(1)}: gap {fmt(gap.value)}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 10)
