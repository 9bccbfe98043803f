#include "tworound/dsic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "tworound/errors.hpp"

#if defined(TWOROUND_HAVE_OPENMP)
#include <omp.h>
#endif

namespace tworound {

const char* to_string(DsicCondition c) {
  switch (c) {
    case DsicCondition::kNone: return "none";
    case DsicCondition::kCondition1: return "condition-1";
    case DsicCondition::kCondition2: return "condition-2";
  }
  return "none";
}

DsicVerdict check_theorem1(const Mechanism& mech) {
  DsicVerdict verdict;
  verdict.marginals = marginal_probabilities(mech.selection());
  const auto& y = verdict.marginals;
  const auto k = static_cast<std::size_t>(mech.competition_depth());
  const double yk = y[k - 1];
  bool equal_top = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (std::abs(y[i] - yk) > kMarginalTolerance) equal_top = false;
  }
  bool bounded_tail = true;
  for (std::size_t i = k; i < y.size(); ++i) {
    if (y[i] > yk + kMarginalTolerance) bounded_tail = false;
  }
  if (!equal_top) {
    verdict.violated = DsicCondition::kCondition2;
  } else if (!bounded_tail) {
    verdict.violated = DsicCondition::kCondition1;
  }
  verdict.is_dsic = verdict.violated == DsicCondition::kNone;
  return verdict;
}

std::vector<double> BidGrid::points() const {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo || lo < 0.0) {
    raise(ErrorKind::kInvalidArgument, "bid grid needs 0 <= lo <= hi and step > 0");
  }
  const double span = (hi - lo) / step;
  if (span > 1e6) raise(ErrorKind::kResourceLimit, "bid grid has too many points");
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

BidGrid BidGrid::parse(const std::string& text) {
  std::istringstream in(text);
  BidGrid g;
  char c1 = 0;
  char c2 = 0;
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' || !in.eof()) {
    in.clear();
    raise(ErrorKind::kInvalidArgument, "grid must look like lo:hi:step, got '" + text + "'");
  }
  g.points();
  return g;
}

namespace {

// One opponent context is a non-increasing sequence of opponent first-round
// bids (a chunk) times every choice of second-round bids s' >= b'.
class DeviationSearch {
 public:
  DeviationSearch(const Mechanism& mech, const BidGrid& grid, int bidders, const SearchLimits& limits)
      : mech_(mech), points_(grid.points()) {
    n_ = bidders == 0 ? mech.theta() : bidders;
    if (static_cast<int>(points_.size()) > limits.max_points) {
      raise(ErrorKind::kResourceLimit, "grid has " + std::to_string(points_.size()) + " points, limit " +
                                           std::to_string(limits.max_points));
    }
    if (n_ > limits.max_bidders) {
      raise(ErrorKind::kResourceLimit, "oracle supports at most " + std::to_string(limits.max_bidders) + " bidders");
    }
    if (n_ < mech.theta()) raise(ErrorKind::kConfiguration, "oracle needs at least theta bidders");
    m_ = n_ - 1;
    g_ = static_cast<int>(points_.size());
    std::vector<int> seq(static_cast<std::size_t>(m_), g_ - 1);
    build_sequences(seq, 0, g_ - 1);
    double contexts = 0.0;
    for (const auto& s : sequences_) {
      double c = 1.0;
      for (int b : s) c *= static_cast<double>(g_ - b);
      contexts += c;
    }
    contexts *= 2.0;
    if (contexts > static_cast<double>(limits.max_contexts)) {
      raise(ErrorKind::kResourceLimit, "oracle search needs " + std::to_string(static_cast<long long>(contexts)) +
                                           " contexts, limit " + std::to_string(limits.max_contexts));
    }
  }

  std::size_t chunk_count() const noexcept { return 2 * sequences_.size(); }

  std::optional<DeviationWitness> search_chunk(std::size_t chunk) const {
    const bool deviator_wins_ties = chunk < sequences_.size();
    const auto& bseq = sequences_[chunk % sequences_.size()];
    std::vector<int> sseq(bseq.begin(), bseq.end());
    Tables tables(n_, g_);
    while (true) {
      fill_tables(bseq, sseq, tables);
      if (auto w = scan(bseq, sseq, deviator_wins_ties, tables)) return w;
      // Next s' combination, last opponent fastest.
      int i = m_ - 1;
      while (i >= 0 && sseq[static_cast<std::size_t>(i)] == g_ - 1) {
        sseq[static_cast<std::size_t>(i)] = bseq[static_cast<std::size_t>(i)];
        --i;
      }
      if (i < 0) break;
      ++sseq[static_cast<std::size_t>(i)];
    }
    return std::nullopt;
  }

 private:
  struct Tables {
    Tables(int n, int g) : g(g), a(static_cast<std::size_t>(n * g), 0.0), b(static_cast<std::size_t>(n * g), 0.0) {}
    int g;
    std::vector<double> a;  // sum P * x for the deviator at rank r with second bid s
    std::vector<double> b;  // sum P * p
    double& at_a(int r, int s) { return a[static_cast<std::size_t>((r - 1) * g + s)]; }
    double& at_b(int r, int s) { return b[static_cast<std::size_t>((r - 1) * g + s)]; }
    double get_a(int r, int s) const { return a[static_cast<std::size_t>((r - 1) * g + s)]; }
    double get_b(int r, int s) const { return b[static_cast<std::size_t>((r - 1) * g + s)]; }
  };

  void build_sequences(std::vector<int>& seq, int pos, int max_index) {
    if (pos == m_) {
      sequences_.push_back(seq);
      return;
    }
    for (int b = max_index; b >= 0; --b) {
      seq[static_cast<std::size_t>(pos)] = b;
      build_sequences(seq, pos + 1, b);
    }
  }

  void fill_tables(const std::vector<int>& bseq, const std::vector<int>& sseq, Tables& t) const {
    (void)bseq;
    std::fill(t.a.begin(), t.a.end(), 0.0);
    std::fill(t.b.begin(), t.b.end(), 0.0);
    const auto& x = mech_.allocation();
    const int beta = x.beta();
    const int alpha = mech_.alpha();
    const auto& subsets = mech_.selection().subsets();
    const auto probs = mech_.selection().probs();
    struct Opp {
      double s;
      int pos;
    };
    std::vector<Opp> selected;
    selected.reserve(static_cast<std::size_t>(alpha));
    for (int r = 1; r <= std::min(n_, mech_.theta()); ++r) {
      for (std::size_t k = 0; k < subsets.size(); ++k) {
        const double pk = probs[k];
        if (pk <= 0.0) continue;
        const auto& sub = subsets[k];
        if (!std::binary_search(sub.begin(), sub.end(), r)) continue;
        selected.clear();
        for (int pos : sub) {
          if (pos == r) continue;
          // Opponents fill the positions around the deviator in id order.
          const int opp = pos < r ? pos - 1 : pos - 2;
          selected.push_back({points_[static_cast<std::size_t>(sseq[static_cast<std::size_t>(opp)])], pos});
        }
        std::sort(selected.begin(), selected.end(), [](const Opp& l, const Opp& rr) {
          return l.s != rr.s ? l.s > rr.s : l.pos < rr.pos;
        });
        const auto opp_bid = [&](int idx) {
          return idx < static_cast<int>(selected.size()) ? selected[static_cast<std::size_t>(idx)].s : 0.0;
        };
        for (int s = 0; s < g_; ++s) {
          const double own = points_[static_cast<std::size_t>(s)];
          int j = 1;
          for (const auto& o : selected) {
            if (o.s > own || (o.s == own && o.pos < r)) ++j;
          }
          if (j > beta) continue;
          double pay = 0.0;
          for (int mm = j; mm <= beta; ++mm) pay += opp_bid(mm - 1) * (x.at(mm) - x.at(mm + 1));
          t.at_a(r, s) += pk * x.at(j);
          t.at_b(r, s) += pk * pay;
        }
      }
    }
  }

  int rank_of(const std::vector<int>& bseq, int b, bool deviator_wins_ties) const {
    int r = 1;
    for (int ob : bseq) {
      if (ob > b || (ob == b && !deviator_wins_ties)) ++r;
    }
    return r;
  }

  double utility(const Tables& t, int v, int r, int s) const {
    if (r > mech_.theta()) return 0.0;
    return points_[static_cast<std::size_t>(v)] * t.get_a(r, s) - t.get_b(r, s);
  }

  std::optional<DeviationWitness> scan(const std::vector<int>& bseq, const std::vector<int>& sseq,
                                       bool deviator_wins_ties, const Tables& t) const {
    for (int v = 0; v < g_; ++v) {
      const double truthful = utility(t, v, rank_of(bseq, v, deviator_wins_ties), v);
      for (int b = 0; b < g_; ++b) {
        const int r = rank_of(bseq, b, deviator_wins_ties);
        for (int s = b; s < g_; ++s) {
          if (b == v && s == v) continue;
          const double u = utility(t, v, r, s);
          if (u > truthful + kGainTolerance) {
            return make_witness(bseq, sseq, deviator_wins_ties, v, b, s, truthful, u);
          }
        }
      }
    }
    return std::nullopt;
  }

  DeviationWitness make_witness(const std::vector<int>& bseq, const std::vector<int>& sseq, bool deviator_wins_ties,
                                int v, int b, int s, double truthful, double u) const {
    DeviationWitness w;
    w.deviator = deviator_wins_ties ? 0 : m_;
    w.value = points_[static_cast<std::size_t>(v)];
    w.first_bid = points_[static_cast<std::size_t>(b)];
    w.second_bid = points_[static_cast<std::size_t>(s)];
    w.truthful_utility = truthful;
    w.deviation_utility = u;
    auto& p = w.profile;
    p.first_round.reserve(static_cast<std::size_t>(n_));
    p.second_round.reserve(static_cast<std::size_t>(n_));
    if (deviator_wins_ties) {
      p.first_round.push_back(w.first_bid);
      p.second_round.push_back(w.second_bid);
    }
    for (int i = 0; i < m_; ++i) {
      p.first_round.push_back(points_[static_cast<std::size_t>(bseq[static_cast<std::size_t>(i)])]);
      p.second_round.push_back(points_[static_cast<std::size_t>(sseq[static_cast<std::size_t>(i)])]);
    }
    if (!deviator_wins_ties) {
      p.first_round.push_back(w.first_bid);
      p.second_round.push_back(w.second_bid);
    }
    return w;
  }

  const Mechanism& mech_;
  std::vector<double> points_;
  int n_ = 0;
  int m_ = 0;
  int g_ = 0;
  std::vector<std::vector<int>> sequences_;
};

}  // namespace

std::optional<DeviationWitness> find_deviation_serial(const Mechanism& mech, const BidGrid& grid, int bidders,
                                                      const SearchLimits& limits) {
  const DeviationSearch search(mech, grid, bidders, limits);
  for (std::size_t c = 0; c < search.chunk_count(); ++c) {
    if (auto w = search.search_chunk(c)) return w;
  }
  return std::nullopt;
}

std::optional<DeviationWitness> find_deviation(const Mechanism& mech, const BidGrid& grid, int bidders,
                                               const SearchLimits& limits) {
#if defined(TWOROUND_HAVE_OPENMP)
  const DeviationSearch search(mech, grid, bidders, limits);
  const auto chunks = static_cast<long>(search.chunk_count());
  long best = chunks;
  std::optional<DeviationWitness> found;
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < chunks; ++c) {
    long current;
#pragma omp atomic read
    current = best;
    if (c > current) continue;
    auto w = search.search_chunk(static_cast<std::size_t>(c));
    if (w) {
#pragma omp critical(tworound_dsic_best)
      {
        if (c < best) {
          found = std::move(w);
#pragma omp atomic write
          best = c;
        }
      }
    }
  }
  return found;
#else
  return find_deviation_serial(mech, grid, bidders, limits);
#endif
}

DsicVerdict check_dsic(const Mechanism& mech, const std::optional<BidGrid>& oracle_grid, int bidders) {
  DsicVerdict verdict = check_theorem1(mech);
  if (oracle_grid && !verdict.is_dsic) verdict.witness = find_deviation(mech, *oracle_grid, bidders);
  return verdict;
}

}  // namespace tworound
