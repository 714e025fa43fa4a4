#pragma once
// Binomial coefficients under the totalizing convention C(n,m) = 0 whenever
// m < 0 or m > n (this is what makes the union-bound triple sum a sum over a
// full index box: out-of-range shapes contribute nothing).  A row cache keeps
// the big-denominator rows that the sum evaluator hits over and over.

#include <gmpxx.h>
#include <map>
#include <shared_mutex>
#include <vector>

namespace conc {

// Exact C(n,m); 0 when m < 0 or m > n.  n may be negative, in which case
// every m falls out of range and the result is 0.
mpz_class binom(long n, long m);

// Cache of partial rows C(n, 0..jmax), extended lazily with the
// multiplicative recurrence C(n,j+1) = C(n,j)*(n-j)/(j+1).  Reads during a
// parallel sum must either hit pre-warmed rows or take the shared lock.
class BinomialTable {
  public:
    // Row for n, guaranteed to contain entries 0..jmax.  The returned
    // reference stays valid until the table is destroyed (rows only grow).
    const std::vector<mpz_class>& row(long n, long jmax);

    // Check the Pascal identity on everything currently cached (and the
    // boundary values C(n,0) = C(n,n) = 1).  Used by tests.
    bool pascal_consistent();

    size_t cached_rows() const;

  private:
    std::map<long, std::vector<mpz_class>> rows_;
    mutable std::shared_mutex mu_;
};

}  // namespace conc
