#ifndef NARXSEL_STRUCTURE_HPP
#define NARXSEL_STRUCTURE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "random.hpp"

namespace narxsel
{

using Bits = std::vector<std::uint8_t>;

/**
 * A candidate model: inclusion bits over a term dictionary.  Always holds
 * at least one set bit; the empty model is rejected at construction.
 */
class Structure
{
public:
    Structure() = default;

    explicit Structure(Bits bits) : bits_(std::move(bits))
    {
        for (auto& b : bits_)
            b = b ? 1 : 0;
        cardinality_ = count(bits_);
        if (cardinality_ == 0)
            throw std::invalid_argument("structure must select at least one term");
    }

    Structure(std::initializer_list<int> bits) : Structure(Bits(bits.begin(), bits.end())) {}

    /// Structure of length n selecting the given indices.
    static Structure from_indices(std::size_t n, const std::vector<std::size_t>& indices)
    {
        Bits bits(n, 0);
        for (auto i : indices) {
            if (i >= n)
                throw std::out_of_range("term index out of range");
            bits[i] = 1;
        }
        return Structure(std::move(bits));
    }

    /// Parse a string of '0'/'1' characters.
    static Structure from_string(std::string_view text)
    {
        Bits bits;
        bits.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("structure string must contain only 0 and 1");
            bits.push_back(c == '1');
        }
        return Structure(std::move(bits));
    }

    [[nodiscard]] std::size_t size() const { return bits_.size(); }
    [[nodiscard]] std::size_t cardinality() const { return cardinality_; }
    [[nodiscard]] const Bits& bits() const { return bits_; }
    [[nodiscard]] bool operator[](std::size_t i) const { return bits_[i] != 0; }

    [[nodiscard]] std::vector<std::size_t> indices() const
    {
        std::vector<std::size_t> out;
        out.reserve(cardinality_);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i])
                out.push_back(i);
        return out;
    }

    [[nodiscard]] std::string to_string() const
    {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i])
                s[i] = '1';
        return s;
    }

    friend bool operator==(const Structure& a, const Structure& b) { return a.bits_ == b.bits_; }

    static std::size_t count(const Bits& bits)
    {
        std::size_t n = 0;
        for (auto b : bits)
            n += b ? 1 : 0;
        return n;
    }

private:
    Bits bits_;
    std::size_t cardinality_ = 0;
};

/// Uniformly random non-empty structure: Bernoulli(0.5) bits, redrawn while empty.
inline Structure random_structure(std::size_t n, Rng& rng)
{
    if (n == 0)
        throw std::invalid_argument("structure length must be positive");
    Bits bits(n);
    do {
        for (auto& b : bits)
            b = rng.bernoulli(0.5) ? 1 : 0;
    } while (Structure::count(bits) == 0);
    return Structure(std::move(bits));
}

struct StructureHash
{
    std::size_t operator()(const Structure& s) const noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto b : s.bits()) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(splitmix64(h));
    }
};

} // namespace narxsel

#endif
