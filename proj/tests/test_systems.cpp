#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "narxsel/fitness.hpp"
#include "narxsel/systems.hpp"

using namespace narxsel;

TEST(Systems, DefinitionsMatchTableOne)
{
    const std::size_t sizes[] = {66, 66, 84, 66};
    const std::size_t counts[] = {4, 5, 4, 23};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto sys = system_definition(all_systems[i]);
        const TermDictionary dict(sys.dictionary);
        EXPECT_EQ(dict.size(), sizes[i]);
        EXPECT_EQ(sys.terms.size(), counts[i]);
        EXPECT_EQ(sys.true_structure(dict).cardinality(), counts[i]);
        EXPECT_EQ(parse_system_id(to_string(sys.id)), sys.id);
    }
    EXPECT_EQ(parse_system_id("s3"), SystemId::s3);
    EXPECT_THROW((void)parse_system_id("S5"), std::invalid_argument);
}

TEST(Input, RangeMeanAndDeterminism)
{
    Rng a(1), b(1);
    const auto u = generate_input(2000, 1.0, a);
    EXPECT_EQ(u, generate_input(2000, 1.0, b));
    for (double v : u)
        EXPECT_TRUE(v >= -1.0 && v <= 1.0);
    const double mean = std::accumulate(u.begin(), u.end(), 0.0) / 2000.0;
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_THROW((void)generate_input(0, 1.0, a), std::invalid_argument);
    EXPECT_THROW((void)generate_input(5, 0.0, a), std::invalid_argument);
}

TEST(Simulate, S1ZeroInput)
{
    for (double v : simulate_system(SystemId::s1, std::vector<double>(100, 0.0)))
        EXPECT_EQ(v, 0.0);
}

TEST(Simulate, S2FixedPoint)
{
    const auto y = simulate_system(SystemId::s2, std::vector<double>(300, 0.0));
    EXPECT_NEAR(y.back(), (-10.0 + std::sqrt(140.0)) / 2.0, 1e-12);
}

TEST(Simulate, S3SteadyState)
{
    const auto y = simulate_system(SystemId::s3, std::vector<double>(400, 0.5));
    EXPECT_NEAR(y.back(), 1.75, 1e-12);
}

TEST(Simulate, RecursionMatchesTermSum)
{
    Rng rng(2);
    const auto u = generate_input(200, 1.0, rng);
    for (auto id : all_systems) {
        const auto sys = system_definition(id);
        const auto y = simulate_system(sys, u);
        for (std::size_t k = static_cast<std::size_t>(sys.max_lag()); k < y.size(); ++k) {
            double v = 0.0;
            for (const auto& t : sys.terms)
                v += t.coefficient * term_value(t.term, u, y, k);
            EXPECT_NEAR(y[k], v, 1e-12);
        }
    }
}

TEST(Simulate, TooShortInputRejected)
{
    EXPECT_THROW((void)simulate_system(SystemId::s4, std::vector<double>(3, 0.0)),
                 std::invalid_argument);
}

TEST(Noise, VarianceAndEmpiricalSnr)
{
    Rng rng(3);
    const auto y = simulate_system(SystemId::s1, generate_input(2000, 1.0, rng));
    const auto noisy = add_measurement_noise(y, {30.0}, rng);
    ASSERT_EQ(noisy.size(), y.size());
    double py = 0.0, pe = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        py += y[k] * y[k];
        pe += (noisy[k] - y[k]) * (noisy[k] - y[k]);
    }
    EXPECT_NEAR(10.0 * std::log10(py / pe), 30.0, 1.0);
    EXPECT_EQ(add_measurement_noise(y, {}, rng), y);
}

TEST(Noise, IndependentOfInput)
{
    DataOptions small, large;
    small.noise.snr_db = large.noise.snr_db = 40.0;
    large.amplitude = 0.5;
    Rng a(4), b(4);
    const auto sys = system_definition(SystemId::s3);
    const auto d1 = make_dataset(sys, small, a);
    const auto d2 = make_dataset(sys, large, b);
    const auto c1 = simulate_system(sys, d1.u);
    const auto c2 = simulate_system(sys, d2.u);
    auto sigma = [](const std::vector<double>& y) {
        double p = 0.0;
        for (double v : y)
            p += v * v;
        return std::sqrt(p / static_cast<double>(y.size()) / 1e4);
    };
    for (std::size_t k = 0; k < d1.size(); ++k)
        EXPECT_NEAR((d1.y[k] - c1[k]) / sigma(c1), (d2.y[k] - c2[k]) / sigma(c2), 1e-9);
}

TEST(Dataset, DefaultSplit)
{
    Rng rng(5);
    const auto d = make_dataset(SystemId::s2, {}, rng);
    EXPECT_EQ(d.size(), 2000U);
    EXPECT_EQ(d.validation_length(), 600U);
    EXPECT_EQ(d.split_index, 1400U);
}

TEST(Dataset, TransientIsDiscarded)
{
    Rng a(6), b(6);
    DataOptions o;
    o.transient = 50;
    const auto d = make_dataset(SystemId::s1, o, a);
    EXPECT_EQ(d.size(), 2000U);
    Rng input(b());
    const auto full = generate_input(2050, 1.0, input);
    EXPECT_EQ(d.u.front(), full[50]);
}

TEST(Estimation, RecoversTrueThetaNoiseFree)
{
    for (auto id : all_systems) {
        Rng rng(7);
        const auto sys = system_definition(id);
        const TermDictionary dict(sys.dictionary);
        const auto d = make_dataset(sys, {}, rng);
        const auto model = estimate_model(dict, sys.true_structure(dict), d);
        const auto theta = sys.true_theta(dict);
        const double tol = id == SystemId::s4 ? 1e-4 : 1e-6;
        for (std::size_t i = 0; i < theta.size(); ++i)
            EXPECT_NEAR(model.theta[i], theta[i], tol) << to_string(id) << ' ' << i;
    }
}

TEST(Estimation, BicPenaltyDominatesSpuriousAdditions)
{
    for (auto id : all_systems) {
        Rng rng(8);
        const auto sys = system_definition(id);
        const auto d = make_dataset(sys, {}, rng);
        FitnessProblem problem(TermDictionary(sys.dictionary), d, FitnessSpec::bic());
        const auto truth = sys.true_structure(problem.dictionary());
        const double j_true = problem(truth);
        for (int i = 0; i < 20; ++i) {
            std::size_t extra;
            do
                extra = static_cast<std::size_t>(rng.index(truth.size()));
            while (truth[extra]);
            Bits bits = truth.bits();
            bits[extra] = 1;
            EXPECT_LT(j_true, problem(Structure(bits))) << to_string(id) << " + " << extra;
        }
    }
}
