// Benchmark: OpenMP enumeration kernels against their serial references.
// The outputs are compared for equality while timing both paths.

#include "coverforge/covers.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace coverforge;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

Fan p1xp1() {
    return make_fan(2,
                    {{Int(1), Int(0)}, {Int(-1), Int(0)}, {Int(0), Int(1)},
                     {Int(0), Int(-1)}},
                    {{0, 2}, {1, 2}, {1, 3}, {0, 3}}, true);
}

} // namespace

int main(int argc, char** argv) {
    long order = argc > 1 ? std::atol(argv[1]) : 4;   // per-divisor branch order
    long copies = argc > 2 ? std::atol(argv[2]) : 5;  // Z_2^copies subgroup lattice

#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (OpenMP disabled)\n";
#endif

    // Kernel 1: subgroup lattice of Z_2^copies.
    {
        std::vector<Int> factors(copies, Int(2));
        FgAbGroup g = from_invariant_factors(factors, 0);
        auto t0 = std::chrono::steady_clock::now();
        auto serial = subgroups(g, Int(1000000), Exec::serial);
        auto t1 = std::chrono::steady_clock::now();
        auto parallel = subgroups(g, Int(1000000), Exec::parallel);
        auto t2 = std::chrono::steady_clock::now();
        bool same = serial.size() == parallel.size();
        for (std::size_t i = 0; same && i < serial.size(); ++i)
            same = serial[i].lattice == parallel[i].lattice;
        std::cout << "subgroups(Z_2^" << copies << "): " << serial.size()
                  << " subgroups; serial " << seconds(t0, t1) << " s, openmp "
                  << seconds(t1, t2) << " s, outputs "
                  << (same ? "identical" : "DIFFER") << "\n";
        if (!same)
            return 1;
    }

    // Kernel 2: cover enumeration over P1 x P1.
    {
        Fan fan = p1xp1();
        std::vector<Int> orders(4, Int(order));
        BranchData branch = make_branch(orders);
        auto t0 = std::chrono::steady_clock::now();
        auto serial = enumerate_covers(fan, branch, Int(1000000), Exec::serial);
        auto t1 = std::chrono::steady_clock::now();
        auto parallel = enumerate_covers(fan, branch, Int(1000000), Exec::parallel);
        auto t2 = std::chrono::steady_clock::now();
        bool same = serial.size() == parallel.size();
        for (std::size_t i = 0; same && i < serial.size(); ++i)
            same = serial[i].sublattice.basis == parallel[i].sublattice.basis;
        std::cout << "enumerate_covers(P1xP1, d=" << order << "): " << serial.size()
                  << " covers; serial " << seconds(t0, t1) << " s, openmp "
                  << seconds(t1, t2) << " s, outputs "
                  << (same ? "identical" : "DIFFER") << "\n";
        if (!same)
            return 1;
    }
    return 0;
}
