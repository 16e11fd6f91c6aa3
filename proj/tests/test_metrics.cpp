#include <gtest/gtest.h>

#include <sstream>

#include "narxsel/metrics.hpp"
#include "narxsel/systems.hpp"

using namespace narxsel;

namespace
{

FrequencyTable table_from_nu(const std::vector<double>& nu, std::size_t runs, Bits system = {})
{
    FrequencyTable t;
    t.runs = runs;
    for (double v : nu)
        t.counts.push_back(static_cast<std::size_t>(v * static_cast<double>(runs) + 0.5));
    t.system_terms = std::move(system);
    return t;
}

} // namespace

TEST(SelectionFrequency, Ratios)
{
    std::vector<Structure> finals;
    for (int r = 0; r < 40; ++r)
        finals.push_back(Structure{1, r < 38 ? 1 : 0, r == 0 ? 1 : 0});
    const auto t = selection_frequency(finals, 3);
    EXPECT_EQ(t.nu(0), 1.0);
    EXPECT_EQ(t.nu(1), 0.95);
    EXPECT_EQ(t.nu(2), 1.0 / 40.0);
    EXPECT_THROW((void)selection_frequency({}, 3), std::invalid_argument);
    EXPECT_THROW((void)selection_frequency(finals, 4), std::invalid_argument);
}

TEST(SelectionFrequency, MatchesRecount)
{
    Rng rng(1);
    std::vector<Structure> finals;
    for (int r = 0; r < 37; ++r)
        finals.push_back(random_structure(20, rng));
    const auto t = selection_frequency(finals, 20);
    for (std::size_t i = 0; i < 20; ++i) {
        std::size_t count = 0;
        for (const auto& s : finals)
            count += s.bits()[i];
        EXPECT_EQ(t.nu(i), static_cast<double>(count) / 37.0);
    }
}

TEST(Spurious, EmptyAndCounted)
{
    const Bits system{1, 1, 0, 0};
    const auto clean = table_from_nu({1, 1, 0, 0}, 10, system);
    const auto s0 = spurious_stats(clean);
    EXPECT_EQ(s0.r, 0.0);
    EXPECT_EQ(s0.nu_max, 0.0);

    const auto noisy = table_from_nu({1, 0.9, 0.1, 0.3}, 10, system);
    const auto s1 = spurious_stats(noisy);
    EXPECT_EQ(s1.n_spur, 2U);
    EXPECT_DOUBLE_EQ(s1.r, 0.5);
    EXPECT_DOUBLE_EQ(s1.nu_max, 0.3);
    EXPECT_DOUBLE_EQ(min_system_nu(noisy), 0.9);
}

TEST(Spurious, ThirteenOfSixtySix)
{
    const auto sys = system_definition(SystemId::s1);
    const TermDictionary dict(sys.dictionary);
    const auto truth = sys.true_structure(dict);
    std::vector<double> nu(66, 0.0);
    std::size_t added = 0;
    for (std::size_t i = 0; i < 66; ++i) {
        if (truth[i])
            nu[i] = 1.0;
        else if (added < 13) {
            nu[i] = 0.05;
            ++added;
        }
    }
    const auto st = spurious_stats(table_from_nu(nu, 40, truth.bits()));
    EXPECT_DOUBLE_EQ(st.r, 13.0 / 66.0);
    EXPECT_NEAR(st.r, 0.197, 5e-4);
    EXPECT_DOUBLE_EQ(st.nu_max, 0.05);
}

TEST(Extract, ThresholdExamples)
{
    const auto t = table_from_nu({1, 1, 0.15, 0.9}, 20);
    EXPECT_EQ(extract_structure(t, 0.9), (Structure{1, 1, 0, 1}));
    EXPECT_EQ(extract_structure(table_from_nu({0.5, 1, 0.2}, 10), 1.0), (Structure{0, 1, 0}));
    EXPECT_THROW((void)extract_structure(table_from_nu({0.5, 0.2}, 10), 0.9),
                 NoStructureAboveThreshold);
    EXPECT_THROW((void)extract_structure(t, 0.0), std::invalid_argument);
}

TEST(Extract, MonotoneInThreshold)
{
    Rng rng(2);
    std::vector<Structure> finals;
    for (int r = 0; r < 40; ++r)
        finals.push_back(random_structure(30, rng));
    const auto t = selection_frequency(finals, 30);
    std::size_t previous = 31;
    for (double th = 0.05; th <= 1.0; th += 0.05) {
        std::size_t card = 0;
        try {
            card = extract_structure(t, th).cardinality();
        } catch (const NoStructureAboveThreshold&) {
        }
        EXPECT_LE(card, previous);
        previous = card;
    }
}

TEST(Spurious, TermsAboveNuMaxAreSystemTerms)
{
    Rng rng(3);
    Bits system(25, 0);
    for (std::size_t i = 0; i < 25; i += 4)
        system[i] = 1;
    std::vector<Structure> finals;
    for (int r = 0; r < 40; ++r)
        finals.push_back(random_structure(25, rng));
    auto t = selection_frequency(finals, 25, system);
    const auto st = spurious_stats(t);
    EXPECT_DOUBLE_EQ(st.r * 25.0, static_cast<double>(st.n_spur));
    for (std::size_t i = 0; i < 25; ++i) {
        if (t.nu(i) > st.nu_max) {
            EXPECT_TRUE(t.is_system_term(i));
        }
    }
}

TEST(FrequencyCsv, Format)
{
    const TermDictionary dict({1, 1, 0, 1});
    const auto t = table_from_nu({1, 0.5, 0}, 2, Bits{0, 1, 0});
    std::ostringstream out;
    write_frequency_csv(out, t, dict);
    EXPECT_EQ(out.str(), "term,rendered_term,nu,is_system_term\n"
                         "0,1,1.0,0\n"
                         "1,y(k-1),0.5,1\n"
                         "2,u(k-1),0.0,0\n");
}
