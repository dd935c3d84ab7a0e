import argparse
import math

from mms_sampler.diagnostics import connected_components, exact_posterior
from mms_sampler.enumeration import decide_mms, enumerate_exact
from mms_sampler.evaluation import TypeProjection, expected_frequencies_q
from mms_sampler.generators import (
    brute_force_satisfiable,
    cycle_block_indices,
    encode_3sat,
    gen_disconnected_example,
    gen_example1,
    gen_high_mixing_family,
    high_mixing_matrix,
    random_3sat,
)
from mms_sampler.core import Solution, restrict_columns


def check_disconnected() -> list[tuple[str, bool]]:
    inst = gen_disconnected_example()
    found = enumerate_exact(inst, 10)
    expected = {Solution.of([1, 1, 1, 0]), Solution.of([0, 0, 0, 3])}
    return [
        ("disconnected block has exactly two solutions", set(found.solutions) == expected),
        ("2-swap chain has two components", len(connected_components(inst, 2)) == 2),
        ("3-swap chain is connected", len(connected_components(inst, 3)) == 1),
    ]


def check_example1() -> list[tuple[str, bool]]:
    blocks = gen_example1()
    post = exact_posterior(blocks[1])
    pair = post.prob(Solution.of([1, 0, 1]))
    double = post.prob(Solution.of([0, 2, 0]))
    projection = TypeProjection.from_preset(blocks[0], "example1")
    q = expected_frequencies_q(blocks, projection)
    return [
        ("block B posterior is (1/3, 2/3)", math.isclose(pair, 1 / 3) and math.isclose(double, 2 / 3)),
        ("toy state frequencies are (1/3, 1/3, 1/3)", all(math.isclose(w, 1 / 3) for w in q.weights.values())),
    ]


def check_high_mixing() -> list[tuple[str, bool]]:
    v = high_mixing_matrix(3)
    inst = gen_high_mixing_family(3)
    restricted = restrict_columns(inst, cycle_block_indices(3))
    return [
        ("V_3 is 6 x 27", v.shape == (6, 27)),
        ("restricted family has 5 solutions", len(enumerate_exact(restricted, 100).solutions) == 5),
    ]


def check_threesat(count: int, seed: int) -> list[tuple[str, bool]]:
    agree = 0
    for i in range(count):
        formula = random_3sat(seed + i, num_vars=6, num_clauses=12)
        agree += decide_mms(encode_3sat(formula)) == brute_force_satisfiable(formula)
    return [(f"decision agrees with brute force on {count} formulas", agree == count)]


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
        description="Run the worked examples and print a checklist",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Usage examples:
  python scripts/check_examples.py
  python scripts/check_examples.py --formulas 25 --seed 3
        """,
    )
    parser.add_argument("--formulas", type=int, default=10, help="Random 3SAT formulas (default: 10)")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the first formula (default: 0)")
    args = parser.parse_args()

    print("Checking worked examples...")
    print("=" * 80)

    results = []
    for section in (check_disconnected, check_example1, check_high_mixing):
        results.extend(section())
    results.extend(check_threesat(args.formulas, args.seed))

    for name, passed in results:
        print(f"{'✅' if passed else '❌'} {name}")
    print("=" * 80)

    failed = sum(1 for _, passed in results if not passed)
    if failed:
        print(f"\n{failed} check(s) failed")
        exit(1)
    print("\nAll checks passed")
