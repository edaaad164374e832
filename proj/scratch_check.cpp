// temporary numeric validation harness (not part of the build)
#include <chrono>
#include <cstdio>

#include "farey/dyadic.hpp"
#include "farey/partition.hpp"
#include "farey/spectrum.hpp"
#include "farey/theory.hpp"
#include "farey/words.hpp"

using namespace farey;

int main() {
    auto t0 = std::chrono::steady_clock::now();
    // pi_bar checks (criterion 3)
    for (int k : {18, 20, 22}) {
        auto s = level_stats(k, Domain::full, 4);
        std::printf("pi_bar_%d = %.6f  (2pi/ln2 = %.6f) count=%llu len_sum=%.15f maxden=%llu\n", k,
                    s.pi_bar, 2 * s.pi_bar / 0.6931471805599453, (unsigned long long)s.interval_count,
                    s.length_sum, (unsigned long long)s.max_denominator);
    }
    auto t1 = std::chrono::steady_clock::now();
    std::printf("stats time: %.2f s\n", std::chrono::duration<double>(t1 - t0).count());

    // Table 3: alpha_k = 1/beta_k
    const double paper_b[] = {1.2220, 1.2398, 1.2564, 1.2722, 1.2871, 1.3012, 1.3147,
                              1.3276, 1.3399, 1.3518, 1.3632, 1.3741, 1.3847};
    for (int k = 10; k <= 22; ++k) {
        double a = 1.0 / beta_k(k, Domain::full, {.workers = 4});
        std::printf("alpha_%d = %.6f  paper %.4f  diff %+.2e\n", k, a, paper_b[k - 10],
                    a - paper_b[k - 10]);
    }
    auto t2 = std::chrono::steady_clock::now();
    std::printf("beta time: %.2f s\n", std::chrono::duration<double>(t2 - t1).count());

    // tau identities at k=12
    auto taus = tau_bar(12, QGrid({-25.0, -4.16, 0.0, 0.339, 1.0, 2.0, 40.0}), Domain::full,
                        {.workers = 2});
    for (auto& t : taus)
        std::printf("q=%8.3f tau=%.12f tau'=%.12f\n", t.q, t.tau, t.tau_prime);

    // Table 1 solver
    struct Row { double m; unsigned K; double y, z, a, f; };
    const Row rows[] = {
        {1.01, 10, 0.8892, 0.0099, 0.7325, 0.0587}, {1.02, 20, 0.8152, 0.0196, 0.7336, 0.1021},
        {1.04, 20, 0.7074, 0.0383, 0.7358, 0.1730}, {1.08, 20, 0.5689, 0.0733, 0.7404, 0.2821},
        {1.2, 20, 0.3744, 0.1596, 0.7561, 0.4912},  {1.4, 25, 0.2582, 0.2561, 0.7863, 0.6770},
        {1.8, 30, 0.1863, 0.3531, 0.8562, 0.8402},  {2, 30, 0.1717, 0.3780, 0.8942, 0.8809},
        {2.4, 50, 0.1560, 0.4070, 0.9736, 0.9290},  {3, 60, 0.1456, 0.4268, 1.0988, 0.9633},
        {3.5, 70, 0.1416, 0.4346, 1.2061, 0.9773},  {4, 100, 0.1393, 0.4386, 1.3173, 0.9854},
        {5, 300, 0.1371, 0.4419, 1.5528, 0.9936},   {6, 300, 0.1362, 0.4437, 1.6879, 0.9968},
        {7, 400, 0.1358, 0.4443, 2.032, 0.9983}};
    auto t3 = std::chrono::steady_clock::now();
    for (const auto& r : rows) {
        auto p = theoretical_point(r.m, r.K);
        double sum = 0, mean = 0;
        for (unsigned d = 1; d <= r.K; ++d) {
            sum += p.lambda[d - 1];
            mean += d * p.lambda[d - 1];
        }
        std::printf(
            "m=%-5g K=%-3u y=%.6f(%+.1e) z=%.6f(%+.1e) a=%.6f(%+.1e) f=%.6f(%+.1e) "
            "iter=%d res=%.1e sum-1=%.1e mean-m=%.1e\n",
            r.m, r.K, p.y, p.y - r.y, p.z, p.z - r.z, p.alpha, p.alpha - r.a, p.f_H, p.f_H - r.f,
            p.solution.iterations,
            std::max(std::fabs(p.solution.f_residual), std::fabs(p.solution.g_residual)), sum - 1,
            mean - r.m);
    }
    auto t4 = std::chrono::steady_clock::now();
    std::printf("table1 time: %.2f s\n", std::chrono::duration<double>(t4 - t3).count());

    // alpha_of_m_large cross-check
    for (double m : {4.0, 5.0, 6.0, 7.0})
        std::printf("alpha_large(%g) = %.4f\n", m, alpha_of_m_large(m));

    // k=37 dyadic demo
    auto d = dyadic_measure(1265, 11, Domain::half);
    auto red = d.measure.reduced();
    std::printf("measure(1265/2^11, half): resolution=%d tiles=%zu value=%.12e num=%llu den=2^%u\n",
                d.resolution_level, d.measure.tile_levels.size(), d.measure.value(),
                (unsigned long long)red.numerator, red.log2_denominator);
    std::printf("partition exact j=11 full: %d\n", (int)dyadic_partition_is_exact(11));

    // golden alpha convergence
    CFExpansion golden;
    golden.digits.assign(200, 1);
    auto as = alpha_sequence(golden, 200);
    std::printf("alpha at N=100: %.7f (limit 0.7202121)  N=125: %.7f  N=130: %.7f\n",
                as[99].alpha, as[124].alpha, as[129].alpha);

    // words
    std::printf("RLRL -> %s  RLR -> %s  word(5/8) = %s  word(3/5) = %s\n",
                endpoint_of_word("RLRL").str().c_str(), endpoint_of_word("RLR").str().c_str(),
                word_of(Fraction(5, 8)).c_str(), word_of(Fraction(3, 5)).c_str());
    return 0;
}
