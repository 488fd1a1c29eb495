#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mixprior {

using Symbol = std::uint32_t;
using SymbolString = std::vector<Symbol>;

// Finite alphabet {0, ..., size-1}, size >= 2.
class Alphabet {
  public:
    explicit Alphabet(std::uint32_t size) : size_(size) {
        if (size < 2)
            throw InputError("alphabet size must be at least 2");
    }

    std::uint32_t size() const { return size_; }
    // M := log2 |X|
    double log2_size() const { return std::log2(static_cast<double>(size_)); }
    bool contains(Symbol a) const { return a < size_; }

    void check(const SymbolString &x) const {
        for (Symbol a : x)
            if (!contains(a))
                throw InputError("symbol " + std::to_string(a) +
                                 " outside alphabet of size " + std::to_string(size_));
    }

    friend bool operator==(const Alphabet &a, const Alphabet &b) {
        return a.size_ == b.size_;
    }

  private:
    std::uint32_t size_;
};

// |X|^n, guarding against overflow of the rank arithmetic
inline std::uint64_t string_count(const Alphabet &alphabet, int n) {
    if (n < 0)
        throw InputError("horizon must be nonnegative");
    std::uint64_t count = 1;
    for (int t = 0; t < n; ++t) {
        if (count > (std::uint64_t{1} << 62) / alphabet.size())
            throw InputError("string space too large to index");
        count *= alphabet.size();
    }
    return count;
}

// lexicographic rank of x within X^|x|
inline std::uint64_t rank_of(const Alphabet &alphabet, const SymbolString &x) {
    std::uint64_t r = 0;
    for (Symbol a : x)
        r = r * alphabet.size() + a;
    return r;
}

inline SymbolString unrank(const Alphabet &alphabet, int n, std::uint64_t rank) {
    SymbolString x(static_cast<std::size_t>(n));
    for (int t = n - 1; t >= 0; --t) {
        x[static_cast<std::size_t>(t)] = static_cast<Symbol>(rank % alphabet.size());
        rank /= alphabet.size();
    }
    return x;
}

// "0110" for alphabets up to 10 symbols, dot-separated otherwise
inline std::string format_symbols(const Alphabet &alphabet, const SymbolString &x) {
    std::string out;
    bool compact = alphabet.size() <= 10;
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (!compact && t > 0)
            out += '.';
        out += std::to_string(x[t]);
    }
    return out;
}

inline SymbolString parse_symbols(const Alphabet &alphabet, const std::string &text) {
    SymbolString x;
    if (alphabet.size() <= 10) {
        for (char c : text) {
            if (c < '0' || c > '9')
                throw InputError("invalid symbol character in string: " + text);
            x.push_back(static_cast<Symbol>(c - '0'));
        }
    } else {
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t dot = text.find('.', pos);
            std::string tok = text.substr(pos, dot == std::string::npos ? dot : dot - pos);
            Symbol a = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), a);
            if (res.ec != std::errc{})
                throw InputError("invalid symbol token: " + tok);
            x.push_back(a);
            pos = dot == std::string::npos ? text.size() : dot + 1;
        }
    }
    alphabet.check(x);
    return x;
}

// shortest decimal form that parses back to the identical double
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace mixprior
