// Gaussian-rational root search by the rational root theorem over Z[i].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "symkit/error.hpp"
#include "symkit/linalg.hpp"

namespace symkit {

namespace {

// Norms above this bound are not searched (trial division cost).
constexpr std::uint64_t kNormLimit = 1'000'000'000'000ULL;

struct GaussInt {
  mpz_class re;
  mpz_class im;
};

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small;
  std::vector<std::uint64_t> large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// All Gaussian integers of norm d.
std::vector<GaussInt> with_norm(std::uint64_t d) {
  std::vector<GaussInt> out;
  for (std::uint64_t a = 0; a * a <= d; ++a) {
    std::uint64_t rest = d - a * a;
    std::uint64_t b = isqrt(rest);
    if (b * b != rest) continue;
    for (int sa : {1, -1}) {
      if (a == 0 && sa < 0) continue;
      for (int sb : {1, -1}) {
        if (b == 0 && sb < 0) continue;
        out.push_back(GaussInt{mpz_class(static_cast<unsigned long>(a)) * sa,
                               mpz_class(static_cast<unsigned long>(b)) * sb});
      }
    }
  }
  return out;
}

bool divides(const GaussInt& d, const GaussInt& n) {
  // n / d = n * conj(d) / N(d)
  mpz_class norm = d.re * d.re + d.im * d.im;
  if (norm == 0) return false;
  mpz_class re = n.re * d.re + n.im * d.im;
  mpz_class im = n.im * d.re - n.re * d.im;
  return re % norm == 0 && im % norm == 0;
}

std::optional<std::uint64_t> small_norm(const GaussInt& g) {
  mpz_class n = g.re * g.re + g.im * g.im;
  if (n > mpz_class(static_cast<unsigned long>(kNormLimit))) return std::nullopt;
  return n.get_ui();
}

std::vector<GaussInt> gaussian_divisors(const GaussInt& n, bool one_associate) {
  std::vector<GaussInt> out;
  auto norm = small_norm(n);
  if (!norm) return out;
  for (std::uint64_t d : divisors(*norm)) {
    for (auto& g : with_norm(d)) {
      if (one_associate && !(sgn(g.re) > 0 && sgn(g.im) >= 0)) continue;
      if (divides(g, n)) out.push_back(g);
    }
  }
  return out;
}

}  // namespace

RootSplit gaussian_rational_roots(const UniPoly& p) {
  RootSplit out;
  if (p.degree() < 1) {
    out.cofactor = p;
    return out;
  }

  UniPoly q = p;
  unsigned zero_mult = 0;
  while (q.degree() >= 1 && q.coeff(0).is_zero()) {
    q = q.deflate(GaussRat{});
    ++zero_mult;
  }
  if (zero_mult > 0) out.roots.emplace_back(GaussRat{}, zero_mult);

  if (q.degree() >= 1) {
    mpz_class den = 1;
    for (const auto& c : q.coeffs()) {
      den = lcm(den, c.re().get_den());
      den = lcm(den, c.im().get_den());
    }
    auto as_int = [&](const GaussRat& c) {
      mpq_class re = c.re() * den;
      mpq_class im = c.im() * den;
      return GaussInt{re.get_num(), im.get_num()};
    };
    GaussInt c0 = as_int(q.coeff(0));
    GaussInt cn = as_int(q.leading());

    if (!small_norm(c0) || !small_norm(cn)) {
      out.search_incomplete = true;
    } else {
      auto numerators = gaussian_divisors(c0, false);
      auto denominators = gaussian_divisors(cn, true);
      std::set<GaussRat> tried;
      std::vector<std::pair<GaussRat, unsigned>> found;
      for (const auto& a : numerators) {
        for (const auto& b : denominators) {
          if (q.degree() < 1) break;
          GaussRat r = GaussRat(mpq_class(a.re), mpq_class(a.im)) / GaussRat(mpq_class(b.re), mpq_class(b.im));
          if (!tried.insert(r).second) continue;
          unsigned mult = 0;
          while (q.degree() >= 1 && q.eval(r).is_zero()) {
            q = q.deflate(r);
            ++mult;
          }
          if (mult > 0) found.emplace_back(r, mult);
        }
      }
      out.roots.insert(out.roots.end(), found.begin(), found.end());
    }
  }

  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  if (q.degree() >= 1) {
    GaussRat lead = q.leading().inv();
    std::vector<GaussRat> monic = q.coeffs();
    for (auto& c : monic) c *= lead;
    out.cofactor = UniPoly(std::move(monic));
  } else {
    out.cofactor = UniPoly({GaussRat(1)});
  }
  return out;
}

}  // namespace symkit
