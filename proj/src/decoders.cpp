#include "grouptest/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grouptest/infomath.hpp"

namespace grouptest {

namespace {

// Scores candidates against a fixed (matrix, outcome) pair, reusing an epoch
// mark so one call is O(total column length of the candidate).
class Scorer {
 public:
  Scorer(const TestMatrix& m, const std::vector<std::uint8_t>& y)
      : m_(m), y_(y), mark_(static_cast<std::size_t>(m.n), 0) {
    if (static_cast<std::int64_t>(y.size()) != m.n)
      throw std::invalid_argument("outcome vector length must equal n");
    for (std::uint8_t b : y)
      if (!b) ++n_y0_;
  }

  std::int64_t score(const std::vector<std::int32_t>& s) {
    ++epoch_;
    std::int64_t pos_hit = 0, zero_hit = 0;
    for (std::int32_t j : s) {
      for (std::int32_t t : m_.columns[static_cast<std::size_t>(j)]) {
        auto& mk = mark_[static_cast<std::size_t>(t)];
        if (mk == epoch_) continue;
        mk = epoch_;
        if (y_[static_cast<std::size_t>(t)])
          ++pos_hit;
        else
          ++zero_hit;
      }
    }
    return pos_hit + (n_y0_ - zero_hit);
  }

 private:
  const TestMatrix& m_;
  const std::vector<std::uint8_t>& y_;
  std::vector<std::int64_t> mark_;
  std::int64_t epoch_ = 0;
  std::int64_t n_y0_ = 0;
};

// Calls fn for every r-subset of {0,...,n-1}; fn may return false to stop.
template <typename Fn>
void for_each_combination(std::int64_t n, std::int64_t r, Fn&& fn) {
  if (r < 0 || r > n) return;
  std::vector<std::int32_t> idx(static_cast<std::size_t>(r));
  for (std::int64_t i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
  while (true) {
    if (!fn(static_cast<const std::vector<std::int32_t>&>(idx))) return;
    std::int64_t i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < r; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

BigInt combination_count(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) return 0;
  return big_binomial(static_cast<int>(n), static_cast<int>(r));
}

void check_candidate_budget(const BigInt& count, std::int64_t budget,
                            const char* what) {
  if (count > budget)
    throw budget_error(std::string(what) + ": candidate budget exceeded (" +
                       count.str() + " > " + std::to_string(budget) + ")");
}

struct BestTracker {
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  std::int64_t hits = 0;
  std::vector<std::int32_t> argbest;

  void offer(std::int64_t score, const std::vector<std::int32_t>& s) {
    if (score > best) {
      best = score;
      hits = 1;
      argbest = s;
    } else if (score == best) {
      ++hits;
    }
  }

  DecodeResult result() const {
    DecodeResult r;
    r.correct_tests = best;
    if (hits == 1) {
      r.status = DecodeStatus::unique;
      r.estimate = argbest;
      std::sort(r.estimate.begin(), r.estimate.end());
    } else {
      r.status = DecodeStatus::tie;
    }
    return r;
  }
};

}  // namespace

const char* decode_status_name(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::unique: return "unique";
    case DecodeStatus::tie: return "tie";
    case DecodeStatus::none_satisfied: return "none_satisfied";
    case DecodeStatus::multiple_satisfied: return "multiple_satisfied";
  }
  return "unknown";
}

std::int64_t count_correct(const TestMatrix& m,
                           const std::vector<std::uint8_t>& y,
                           const std::vector<std::int32_t>& s) {
  Scorer scorer(m, y);
  return scorer.score(s);
}

DecodeResult mle_exact(const TestMatrix& m, const std::vector<std::uint8_t>& y,
                       std::int64_t k, std::int64_t max_candidates) {
  if (k < 1 || k > m.p) throw std::invalid_argument("mle_exact: need 1 <= k <= p");
  check_candidate_budget(combination_count(m.p, k), max_candidates, "mle_exact");
  Scorer scorer(m, y);
  BestTracker best;
  for_each_combination(m.p, k, [&](const std::vector<std::int32_t>& s) {
    best.offer(scorer.score(s), s);
    return true;
  });
  return best.result();
}

std::int64_t default_swap_radius(std::int64_t k) {
  if (k <= 1) return 1;
  const auto r = static_cast<std::int64_t>(std::floor(
      static_cast<double>(k) / std::log(static_cast<double>(k))));
  return std::min(std::max<std::int64_t>(r, 1), k);
}

DecodeResult mle_restricted(const TestMatrix& m,
                            const std::vector<std::uint8_t>& y,
                            const std::vector<std::int32_t>& reference,
                            std::int64_t radius, std::int64_t max_candidates) {
  const auto k = static_cast<std::int64_t>(reference.size());
  if (k < 1) throw std::invalid_argument("mle_restricted: empty reference");
  if (radius < 0) radius = default_swap_radius(k);
  radius = std::min(radius, k);

  std::vector<std::int32_t> ref(reference);
  std::sort(ref.begin(), ref.end());
  std::vector<std::int32_t> comp;
  comp.reserve(static_cast<std::size_t>(m.p - k));
  for (std::int32_t j = 0; j < m.p; ++j)
    if (!std::binary_search(ref.begin(), ref.end(), j)) comp.push_back(j);

  BigInt total = 0;
  for (std::int64_t ell = 0; ell <= radius; ++ell)
    total += combination_count(k, ell) *
             combination_count(static_cast<std::int64_t>(comp.size()), ell);
  check_candidate_budget(total, max_candidates, "mle_restricted");

  Scorer scorer(m, y);
  BestTracker best;
  std::vector<std::int32_t> cand;
  for (std::int64_t ell = 0; ell <= radius; ++ell) {
    for_each_combination(k, ell, [&](const std::vector<std::int32_t>& rem) {
      for_each_combination(
          static_cast<std::int64_t>(comp.size()), ell,
          [&](const std::vector<std::int32_t>& add) {
            cand.clear();
            std::size_t ri = 0;
            for (std::int64_t i = 0; i < k; ++i) {
              if (ri < rem.size() && rem[ri] == i) {
                ++ri;
                continue;
              }
              cand.push_back(ref[static_cast<std::size_t>(i)]);
            }
            for (std::int32_t a : add)
              cand.push_back(comp[static_cast<std::size_t>(a)]);
            best.offer(scorer.score(cand), cand);
            return true;
          });
      return true;
    });
  }
  return best.result();
}

InfoDensity info_density(const TestMatrix& m,
                         const std::vector<std::uint8_t>& y,
                         const std::vector<std::int32_t>& s_dif,
                         const std::vector<std::int32_t>& s_eq, double rho) {
  if (!(rho >= 0.0 && rho < 0.5))
    throw std::invalid_argument("info_density: rho must lie in [0, 1/2)");
  if (s_dif.empty()) throw std::invalid_argument("info_density: s_dif is empty");
  const auto k = static_cast<std::int64_t>(s_dif.size() + s_eq.size());

  InfoDensity out;
  double miss;  // probability a test avoids every s_dif item a priori
  if (m.design == Design::bern) {
    const double q = m.nu / static_cast<double>(k);
    miss = std::pow(1.0 - q, static_cast<double>(s_dif.size()));
  } else {
    std::int64_t placements = 0;
    for (std::int32_t j : s_dif)
      placements += static_cast<std::int64_t>(m.columns[static_cast<std::size_t>(j)].size());
    miss = std::pow(1.0 - 1.0 / static_cast<double>(m.n),
                    static_cast<double>(placements));
    out.surrogate = true;
  }

  std::vector<std::uint8_t> hit_eq(static_cast<std::size_t>(m.n), 0);
  std::vector<std::uint8_t> hit_dif(static_cast<std::size_t>(m.n), 0);
  for (std::int32_t j : s_eq)
    for (std::int32_t t : m.columns[static_cast<std::size_t>(j)])
      hit_eq[static_cast<std::size_t>(t)] = 1;
  for (std::int32_t j : s_dif)
    for (std::int32_t t : m.columns[static_cast<std::size_t>(j)])
      hit_dif[static_cast<std::size_t>(t)] = 1;

  double sum = 0.0;
  for (std::int64_t t = 0; t < m.n; ++t) {
    if (hit_eq[static_cast<std::size_t>(t)]) continue;  // ratio is 1
    const bool hd = hit_dif[static_cast<std::size_t>(t)] != 0;
    const bool one = y[static_cast<std::size_t>(t)] != 0;
    const double num = one == hd ? 1.0 - rho : rho;
    const double den = one ? (1.0 - miss) * (1.0 - rho) + miss * rho
                           : (1.0 - miss) * rho + miss * (1.0 - rho);
    if (num == den) continue;  // exact zero contribution
    sum += std::log(num) - std::log(den);
  }
  out.value = sum;
  return out;
}

double GammaSchedule::at(std::int64_t ell) const {
  const auto idx = ell - ell_min;
  if (idx < 0 || idx >= static_cast<std::int64_t>(gamma.size()))
    throw std::invalid_argument("GammaSchedule::at: ell outside schedule");
  return gamma[static_cast<std::size_t>(idx)];
}

GammaSchedule gamma_schedule(std::int64_t p, std::int64_t k, double delta1) {
  if (k < 1 || k >= p) throw std::invalid_argument("gamma_schedule: need 1 <= k < p");
  if (!(delta1 > 0.0)) throw std::invalid_argument("gamma_schedule: delta1 must be positive");
  GammaSchedule sc;
  sc.delta1 = delta1;
  sc.ell_min = 1;
  if (k > 1) {
    const auto base = static_cast<std::int64_t>(std::floor(
        static_cast<double>(k) / std::log(static_cast<double>(k))));
    sc.ell_min = std::min<std::int64_t>(1 + base, k);
  }
  const double lk = std::log(static_cast<double>(k) / delta1);
  for (std::int64_t ell = sc.ell_min; ell <= k; ++ell)
    sc.gamma.push_back(log_binomial(p - k, ell) + lk + log_binomial(k, ell));
  return sc;
}

namespace {

// Shared accept-loop for the two list decoders. `accept` decides one
// candidate; statuses follow from how many candidates pass.
template <typename AcceptFn>
DecodeResult accept_scan(const TestMatrix& m,
                         const std::vector<std::uint8_t>& y, std::int64_t k,
                         std::int64_t max_candidates, AcceptFn&& accept) {
  check_candidate_budget(combination_count(m.p, k), max_candidates,
                         "accept_scan");
  DecodeResult res;
  std::int64_t accepted = 0;
  std::vector<std::int32_t> winner;
  for_each_combination(m.p, k, [&](const std::vector<std::int32_t>& s) {
    if (accept(s)) {
      ++accepted;
      if (accepted == 1) winner = s;
    }
    return accepted < 2;
  });
  if (accepted == 0) {
    res.status = DecodeStatus::none_satisfied;
  } else if (accepted == 1) {
    res.status = DecodeStatus::unique;
    res.estimate = winner;
    res.correct_tests = count_correct(m, y, winner);
  } else {
    res.status = DecodeStatus::multiple_satisfied;
  }
  return res;
}

}  // namespace

DecodeResult threshold_decoder(const TestMatrix& m,
                               const std::vector<std::uint8_t>& y,
                               std::int64_t k, const GammaSchedule& schedule,
                               double rho, std::int64_t max_candidates) {
  if (k < 1 || k > m.p)
    throw std::invalid_argument("threshold_decoder: need 1 <= k <= p");
  std::vector<std::int32_t> s_dif, s_eq;
  return accept_scan(
      m, y, k, max_candidates, [&](const std::vector<std::int32_t>& s) {
        for (std::int64_t ell = schedule.ell_min; ell <= k; ++ell) {
          const double gamma = schedule.at(ell);
          bool ok = true;
          for_each_combination(k, ell, [&](const std::vector<std::int32_t>& pick) {
            s_dif.clear();
            s_eq.clear();
            std::size_t pi = 0;
            for (std::int64_t i = 0; i < k; ++i) {
              if (pi < pick.size() && pick[pi] == i) {
                s_dif.push_back(s[static_cast<std::size_t>(i)]);
                ++pi;
              } else {
                s_eq.push_back(s[static_cast<std::size_t>(i)]);
              }
            }
            if (info_density(m, y, s_dif, s_eq, rho).value < gamma) ok = false;
            return ok;
          });
          if (!ok) return false;
        }
        return true;
      });
}

DecodeResult hybrid_decoder(const TestMatrix& m,
                            const std::vector<std::uint8_t>& y, std::int64_t k,
                            const GammaSchedule& schedule, double rho,
                            std::int64_t max_candidates) {
  if (k < 1 || k > m.p)
    throw std::invalid_argument("hybrid_decoder: need 1 <= k <= p");
  const std::int64_t radius = default_swap_radius(k);
  Scorer scorer(m, y);
  std::vector<std::int32_t> s_dif, s_eq, cand, comp;
  return accept_scan(
      m, y, k, max_candidates, [&](const std::vector<std::int32_t>& s) {
        const std::int64_t own = scorer.score(s);
        // Strict likelihood dominance over every distinct set within the
        // swap radius.
        comp.clear();
        for (std::int32_t j = 0; j < m.p; ++j)
          if (!std::binary_search(s.begin(), s.end(), j)) comp.push_back(j);
        for (std::int64_t ell = 1; ell <= std::min(radius, k); ++ell) {
          bool ok = true;
          for_each_combination(k, ell, [&](const std::vector<std::int32_t>& rem) {
            for_each_combination(
                static_cast<std::int64_t>(comp.size()), ell,
                [&](const std::vector<std::int32_t>& add) {
                  cand.clear();
                  std::size_t ri = 0;
                  for (std::int64_t i = 0; i < k; ++i) {
                    if (ri < rem.size() && rem[ri] == i) {
                      ++ri;
                      continue;
                    }
                    cand.push_back(s[static_cast<std::size_t>(i)]);
                  }
                  for (std::int32_t a : add)
                    cand.push_back(comp[static_cast<std::size_t>(a)]);
                  if (scorer.score(cand) >= own) ok = false;
                  return ok;
                });
            return ok;
          });
          if (!ok) return false;
        }
        // Info-density thresholds for the partitions beyond the radius.
        for (std::int64_t ell = radius + 1; ell <= k; ++ell) {
          const double gamma = schedule.at(ell);
          bool ok = true;
          for_each_combination(k, ell, [&](const std::vector<std::int32_t>& pick) {
            s_dif.clear();
            s_eq.clear();
            std::size_t pi = 0;
            for (std::int64_t i = 0; i < k; ++i) {
              if (pi < pick.size() && pick[pi] == i) {
                s_dif.push_back(s[static_cast<std::size_t>(i)]);
                ++pi;
              } else {
                s_eq.push_back(s[static_cast<std::size_t>(i)]);
              }
            }
            if (info_density(m, y, s_dif, s_eq, rho).value < gamma) ok = false;
            return ok;
          });
          if (!ok) return false;
        }
        return true;
      });
}

std::vector<std::int32_t> ncomp_baseline(const TestMatrix& m,
                                         const std::vector<std::uint8_t>& y,
                                         std::int64_t k,
                                         double threshold_fraction) {
  if (k < 1 || k > m.p)
    throw std::invalid_argument("ncomp_baseline: need 1 <= k <= p");
  std::vector<std::pair<double, std::int32_t>> scored;
  scored.reserve(static_cast<std::size_t>(m.p));
  for (std::int32_t j = 0; j < m.p; ++j) {
    const auto& col = m.columns[static_cast<std::size_t>(j)];
    double frac = 1.0;  // untested items sort behind everything useful
    if (!col.empty()) {
      std::int64_t neg = 0;
      for (std::int32_t t : col)
        if (!y[static_cast<std::size_t>(t)]) ++neg;
      frac = static_cast<double>(neg) / static_cast<double>(col.size());
    }
    if (frac > threshold_fraction) frac += 1.0;
    scored.emplace_back(frac, j);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::int32_t> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i)
    out.push_back(scored[static_cast<std::size_t>(i)].second);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace grouptest
