#include "conc/binomial.hpp"

#include <mutex>

namespace conc {

mpz_class binom(long n, long m) {
    if (m < 0 || m > n) return 0;  // out-of-range convention (covers n < 0)
    mpz_class z;
    mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(m));
    return z;
}

const std::vector<mpz_class>& BinomialTable::row(long n, long jmax) {
    if (n < 0) throw std::invalid_argument("BinomialTable: negative n");
    if (jmax > n) jmax = n;
    {
        std::shared_lock lk(mu_);
        auto it = rows_.find(n);
        if (it != rows_.end() && static_cast<long>(it->second.size()) > jmax)
            return it->second;
    }
    std::unique_lock lk(mu_);
    auto& r = rows_[n];
    if (r.empty()) r.emplace_back(1);  // C(n,0)
    // C(n,j+1) = C(n,j) * (n-j) / (j+1), exact division
    for (long j = static_cast<long>(r.size()) - 1; j < jmax; ++j) {
        mpz_class next = r.back() * (n - j);
        mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(),
                        static_cast<unsigned long>(j + 1));
        r.push_back(std::move(next));
    }
    return r;
}

bool BinomialTable::pascal_consistent() {
    std::shared_lock lk(mu_);
    for (auto& [n, r] : rows_) {
        if (r[0] != 1) return false;
        if (static_cast<long>(r.size()) == n + 1 && r.back() != 1) return false;
        for (long j = 1; j < static_cast<long>(r.size()); ++j) {
            if (r[j] != binom(n - 1, j - 1) + binom(n - 1, j)) return false;
        }
    }
    return true;
}

size_t BinomialTable::cached_rows() const {
    std::shared_lock lk(mu_);
    return rows_.size();
}

}  // namespace conc
