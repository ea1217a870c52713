#pragma once

// Rotation-equivalence classes of the 2^n subboxes produced by bisecting an
// n-cube in every dimension at one shared point. Each class is identified by
// a binary string of length n (0 = lower half, 1 = upper half); the chosen
// representative is the smallest string of its class in binary order. A
// representative other than the all-zeros string is stored as a zero-run
// code: the i-th entry is the number of 0's before the i-th 1.
//
// This header provides generation (the recursive bounded-digit search and
// its lower-period concatenation wrapper), validity checking (single-pass
// control scan), period computation, and exact class counting via divisor
// recurrences.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "symprune/interval.hpp"  // Error base

namespace symprune {

struct TrailingZero : Error {
    using Error::Error;
};

// Counting values reach 2^64 at n = 64, one past uint64; 128-bit arithmetic
// covers the full supported range exactly.
using BigUint = unsigned __int128;

inline std::string to_string(BigUint v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

// Zero-run code of one class representative. `runs` is empty iff the code is
// the all-zeros string; otherwise runs.size() = number of 1's (m) and
// sum(runs) = n - m.
struct ClassCode {
    std::vector<int> runs;
    int n = 0;
    bool all_zeros = false;

    int ones() const { return all_zeros ? 0 : static_cast<int>(runs.size()); }

    friend bool operator==(const ClassCode& a, const ClassCode& b) {
        return a.n == b.n && a.all_zeros == b.all_zeros && a.runs == b.runs;
    }
};

struct ClassEntry {
    ClassCode code;
    int period = 0;
};

struct RepresentativeSet {
    int n = 0;
    std::vector<ClassEntry> entries;

    std::size_t size() const { return entries.size(); }
};

inline ClassCode make_run_code(std::vector<int> runs, int n) {
    ClassCode c;
    c.runs = std::move(runs);
    c.n = n;
    assert(!c.runs.empty());
    assert(std::accumulate(c.runs.begin(), c.runs.end(), 0) ==
           n - static_cast<int>(c.runs.size()));
    return c;
}

inline ClassCode make_all_zeros_code(int n) {
    ClassCode c;
    c.n = n;
    c.all_zeros = true;
    return c;
}

inline std::string code_to_binary(const ClassCode& c) {
    std::string s;
    s.reserve(static_cast<std::size_t>(c.n));
    if (c.all_zeros) {
        s.assign(static_cast<std::size_t>(c.n), '0');
        return s;
    }
    for (int r : c.runs) {
        s.append(static_cast<std::size_t>(r), '0');
        s.push_back('1');
    }
    assert(static_cast<int>(s.size()) == c.n);
    return s;
}

// Inverse of code_to_binary. Only strings ending in 1 (or all zeros) have a
// run code; every class has such a member.
inline ClassCode binary_to_code(std::string_view s) {
    assert(!s.empty());
    if (s.find('1') == std::string_view::npos) {
        return make_all_zeros_code(static_cast<int>(s.size()));
    }
    if (s.back() != '1') {
        throw TrailingZero("binary string ends in 0; rotate to a member ending in 1");
    }
    std::vector<int> runs;
    int zeros = 0;
    for (char ch : s) {
        assert(ch == '0' || ch == '1');
        if (ch == '0') {
            ++zeros;
        } else {
            runs.push_back(zeros);
            zeros = 0;
        }
    }
    return make_run_code(std::move(runs), static_cast<int>(s.size()));
}

// Rotation period of the decoded binary string, computed on the run chain:
// the smallest divisor d of m with a d-periodic chain gives binary period
// d + sum(first d runs).
inline int code_period(const ClassCode& c) {
    if (c.all_zeros) return 1;
    const int m = c.ones();
    for (int d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        bool periodic = true;
        for (int i = d; i < m && periodic; ++i) {
            periodic = c.runs[i] == c.runs[i % d];
        }
        if (periodic) {
            int p = d;
            for (int i = 0; i < d; ++i) p += c.runs[i];
            return p;
        }
    }
    return c.n;  // unreachable: d = m is always periodic
}

// Single-pass scan deciding whether a run code is both full-period and the
// representative (numerically largest rotation) of its class. The control
// index tracks the prefix position being compared while equal stretches are
// pending.
inline bool code_validity(const ClassCode& c) {
    assert(!c.all_zeros && "validity is defined on run codes");
    const int m = c.ones();
    if (m == 1) return true;  // single 1 is always full-period and canonical
    const std::vector<int>& a = c.runs;
    int ctrol = 0;
    for (int i = 1; i < m - 1; ++i) {
        if (a[i] > a[ctrol]) return false;
        if (a[i] < a[ctrol]) {
            ctrol = 0;
        } else {
            ++ctrol;
        }
    }
    return a[m - 1] < a[ctrol];
}

namespace detail {

// Recursive bounded-digit generation of full-period representatives: writes
// position `pos`, keeping every prefix compatible, so no emitted code needs
// a validity filter. Codes come out in decreasing numerical order.
template <typename Sink>
void classgen_recurse(int sum, int pos, int ctrol, int m, std::vector<int>& a, Sink&& sink) {
    if (pos == m - 1) {
        if (sum < a[ctrol]) {
            a[pos] = sum;
            sink(const_cast<const std::vector<int>&>(a));
        }
        return;
    }
    int lower, upper;
    if (pos == 0) {
        lower = (sum + m - 1) / m;  // below this the first run cannot stay maximal
        upper = sum;
    } else {
        lower = 0;
        upper = std::min(a[ctrol], sum);
    }
    for (int i = upper; i >= lower; --i) {
        a[pos] = i;
        if (i == a[ctrol] && pos != 0) {
            classgen_recurse(sum - i, pos + 1, ctrol + 1, m, a, sink);
        } else {
            classgen_recurse(sum - i, pos + 1, 0, m, a, sink);
        }
    }
}

}  // namespace detail

// Streams every full-period representative with m ones over n bits, in
// decreasing numerical (run-chain) order. sink receives (const ClassCode&).
template <typename Sink>
void generate_full_period(int n, int m, Sink&& sink) {
    assert(n >= 1 && m >= 1 && m <= n);
    if (m == 1) {
        // The recursion would read an unwritten control slot; the single-1
        // code [n-1] is always valid.
        sink(make_run_code({n - 1}, n));
        return;
    }
    if (m == n) return;  // all-ones has period 1; no full-period code exists
    std::vector<int> a(static_cast<std::size_t>(m), 0);
    detail::classgen_recurse(n - m, 0, 0, m, a, [&](const std::vector<int>& runs) {
        sink(make_run_code(runs, n));
    });
}

inline std::vector<ClassCode> generate_full_period(int n, int m) {
    std::vector<ClassCode> out;
    generate_full_period(n, m, [&](const ClassCode& c) { out.push_back(c); });
    return out;
}

// Lower-period representatives: concatenate each full-period base chain f
// times. A base over p bits with m/f ones yields a code over n = p*f bits
// with period p.
inline std::vector<ClassCode> expand_lower_period(const std::vector<ClassCode>& base, int f) {
    assert(f >= 2);
    std::vector<ClassCode> out;
    out.reserve(base.size());
    for (const ClassCode& b : base) {
        assert(!b.all_zeros);
        std::vector<int> runs;
        runs.reserve(b.runs.size() * static_cast<std::size_t>(f));
        for (int i = 0; i < f; ++i) runs.insert(runs.end(), b.runs.begin(), b.runs.end());
        out.push_back(make_run_code(std::move(runs), b.n * f));
    }
    return out;
}

namespace detail {

inline std::vector<int> divisors(int n) {
    std::vector<int> d;
    for (int i = 1; i * i <= n; ++i) {
        if (n % i == 0) {
            d.push_back(i);
            if (i != n / i) d.push_back(n / i);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

// Common divisors of n and m; for m = 0 every divisor of n qualifies.
inline std::vector<int> common_divisors(int n, int m) {
    return divisors(m == 0 ? n : std::gcd(n, m));
}

}  // namespace detail

// Streams every class representative of length n with its period, in the
// canonical order: number of ones ascending, then period ascending, then the
// generator's native (decreasing) order. sink receives (const ClassCode&, int period).
template <typename Sink>
void for_each_representative(int n, Sink&& sink) {
    assert(n >= 1);
    sink(make_all_zeros_code(n), 1);
    for (int m = 1; m <= n; ++m) {
        std::vector<int> factors = detail::common_divisors(n, m);
        // Larger concatenation factor = smaller period first.
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
            const int f = *it;
            const int p = n / f;
            generate_full_period(p, m / f, [&](const ClassCode& base) {
                if (f == 1) {
                    sink(base, p);
                } else {
                    std::vector<int> runs;
                    runs.reserve(base.runs.size() * static_cast<std::size_t>(f));
                    for (int i = 0; i < f; ++i) {
                        runs.insert(runs.end(), base.runs.begin(), base.runs.end());
                    }
                    sink(make_run_code(std::move(runs), n), p);
                }
            });
        }
    }
}

inline RepresentativeSet representative_set(int n) {
    RepresentativeSet sr;
    sr.n = n;
    for_each_representative(n, [&](ClassCode code, int period) {
        sr.entries.push_back(ClassEntry{std::move(code), period});
    });
    return sr;
}

inline BigUint pow2(int n) {
    assert(n >= 0 && n <= 100);
    return BigUint(1) << n;
}

// Multiplicative binomial coefficient; every intermediate value is integral.
inline BigUint binomial(int n, int m) {
    assert(n >= 0 && m >= 0);
    if (m > n) return 0;
    m = std::min(m, n - m);
    BigUint c = 1;
    for (int i = 1; i <= m; ++i) {
        c = c * static_cast<BigUint>(n - m + i) / static_cast<BigUint>(i);
    }
    return c;
}

// Number of full-period classes of length n. The divisor closure
// sum_{p | n} p * FP_p = 2^n turns into a recurrence with FP_1 = 2.
inline BigUint count_full_period(int n) {
    assert(n >= 1 && n <= 64);
    std::map<int, BigUint> fp;
    for (int d : detail::divisors(n)) {
        if (d == 1) {
            fp[1] = 2;
            continue;
        }
        BigUint lower = 0;
        for (int p : detail::divisors(d)) {
            if (p < d) lower += static_cast<BigUint>(p) * fp.at(p);
        }
        fp[d] = (pow2(d) - lower) / static_cast<BigUint>(d);
    }
    return fp.at(n);
}

// Total number of classes |SR_n| = sum of FP_p over divisors p of n.
inline BigUint count_classes(int n) {
    assert(n >= 1 && n <= 64);
    BigUint total = 0;
    for (int p : detail::divisors(n)) total += count_full_period(p);
    return total;
}

namespace detail {

inline BigUint count_full_period_nm_impl(int n, int m, std::map<std::pair<int, int>, BigUint>& memo) {
    if (m == 0 || m == n) return n == 1 ? 1 : 0;
    const auto key = std::make_pair(n, m);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    BigUint lower = 0;
    for (int f : common_divisors(n, m)) {
        if (f == 1) continue;
        lower += static_cast<BigUint>(n / f) * count_full_period_nm_impl(n / f, m / f, memo);
    }
    BigUint v = (binomial(n, m) - lower) / static_cast<BigUint>(n);
    memo.emplace(key, v);
    return v;
}

}  // namespace detail

// Full-period classes of length n with exactly m ones. Closure:
// sum over common divisors f of (n/f) * FP_{n/f, m/f} = C(n, m).
inline BigUint count_full_period(int n, int m) {
    assert(n >= 1 && n <= 64 && m >= 0 && m <= n);
    std::map<std::pair<int, int>, BigUint> memo;
    return detail::count_full_period_nm_impl(n, m, memo);
}

// Classes of length n with m ones, summed over all admissible periods.
inline BigUint count_classes(int n, int m) {
    assert(n >= 1 && n <= 64 && m >= 0 && m <= n);
    std::map<std::pair<int, int>, BigUint> memo;
    BigUint total = 0;
    for (int f : detail::common_divisors(n, m)) {
        total += detail::count_full_period_nm_impl(n / f, m / f, memo);
    }
    return total;
}

// Classes of length n with period exactly p. Admissible periods are the
// divisors of n.
inline BigUint count_classes_with_period(int n, int p) {
    assert(n >= 1 && n <= 64);
    if (p < 1 || n % p != 0) return 0;
    return count_full_period(p);
}

// Classes of length n with m ones and period exactly p; requires the
// concatenation factor n/p to divide m.
inline BigUint count_classes_with_period(int n, int m, int p) {
    assert(n >= 1 && n <= 64 && m >= 0 && m <= n);
    if (p < 1 || n % p != 0) return 0;
    const int f = n / p;
    if (m % f != 0) return 0;
    return count_full_period(p, m / f);
}

// Idealized speedup of symmetry exploitation: total boxes over representatives.
inline double ifdp(int n) {
    assert(n >= 1 && n <= 64);
    return static_cast<double>(pow2(n)) / static_cast<double>(count_classes(n));
}

// Exhaustive oracle: canonicalize all 2^n strings by minimal rotation.
// Quadratic in 2^n strings; intended for tests (n <= 20).
inline RepresentativeSet brute_force_representative_set(int n) {
    assert(n >= 1 && n <= 20);
    const std::uint32_t total = 1u << n;
    const std::uint32_t mask = total - 1;
    auto rotate_left = [&](std::uint32_t v, int k) {
        return ((v << k) | (v >> (n - k))) & mask;
    };
    std::vector<ClassEntry> entries;
    std::vector<bool> seen(total, false);
    for (std::uint32_t v = 0; v < total; ++v) {
        if (seen[v]) continue;
        std::uint32_t canon = v;
        int period = n;
        for (int k = 1; k < n; ++k) {
            const std::uint32_t r = rotate_left(v, k);
            seen[r] = true;
            canon = std::min(canon, r);
            if (r == v && k < period) period = k;
        }
        seen[v] = true;
        std::string bits(static_cast<std::size_t>(n), '0');
        for (int i = 0; i < n; ++i) {
            if (canon & (1u << (n - 1 - i))) bits[static_cast<std::size_t>(i)] = '1';
        }
        entries.push_back(ClassEntry{binary_to_code(bits), period});
    }
    std::sort(entries.begin(), entries.end(), [](const ClassEntry& a, const ClassEntry& b) {
        return code_to_binary(a.code) < code_to_binary(b.code);
    });
    RepresentativeSet sr;
    sr.n = n;
    sr.entries = std::move(entries);
    return sr;
}

}  // namespace symprune
