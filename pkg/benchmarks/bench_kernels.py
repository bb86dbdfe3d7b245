"""Compare the numba and numpy Hamiltonian-assembly backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Uses the mode sectors of the default circuit at M = 3..6 with the standard
2e5 budget, checks that both backends emit identical entries and prints
the best-of-N wall time for each.
"""

import argparse
import time

import numpy as np

from mmrabi.circuit import REFERENCE_PARAMS, derived_mode_parameters
from mmrabi.constants import HBAR
from mmrabi.cpb import diagonalize_cpb, transition_frequency
from mmrabi.hamiltonian import truncation_plan
from mmrabi.kernels import upper_entries


def setup(m_count, cj=0.0):
    params = REFERENCE_PARAMS.replace(cj=cj)
    d = derived_mode_parameters(params, m_count)
    spec = diagonalize_cpb(d.e_c, params.ej)
    plan = truncation_plan(d.omega, transition_frequency(spec, 0, 1))
    n_a = plan.atom_levels
    coupling = HBAR * d.gbar[:, None, None] * spec.n_elem[None, :n_a, :n_a]
    gmat = d.gmat if cj > 0 else None
    return (spec.eps[:n_a], HBAR * d.omega, np.asarray(plan.photons), coupling, gmat), plan


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    # warm-up compiles (or loads from cache) the numba kernels
    inputs, _ = setup(1)
    upper_entries(*inputs, backend="numba")

    print(f"{'M':>2} {'C_J':>5} {'dim':>8} {'nnz':>9} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for m_count in (3, 4, 5, 6):
        for cj in (0.0, 5e-15):
            inputs, plan = setup(m_count, cj)
            ref = upper_entries(*inputs, backend="numpy")
            out = upper_entries(*inputs, backend="numba")
            for a, b in zip(ref, out):
                assert np.array_equal(a, b), "backends disagree"
            t_np = best_time(lambda: upper_entries(*inputs, backend="numpy"), args.repeat)
            t_nb = best_time(lambda: upper_entries(*inputs, backend="numba"), args.repeat)
            print(f"{m_count:>2} {cj * 1e15:>5.1f} {plan.total_dim:>8} {ref[0].size:>9} "
                  f"{t_np:>9.4f} {t_nb:>9.4f} {t_np / t_nb:>8.2f}")


if __name__ == "__main__":
    main()
