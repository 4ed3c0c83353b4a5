#include "lrsplit/ordering.hpp"

#include "lrsplit/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>

namespace lrsplit {

namespace {

enum class Status : std::uint8_t { Variable, Element, Absorbed, Dead };

class QuotientGraph {
 public:
  explicit QuotientGraph(const CsrMatrix& m)
      : n_(m.rows()),
        status_(n_, Status::Variable),
        weight_(n_, 1),
        degree_(n_, 0),
        vars_(n_),
        elems_(n_),
        members_(n_),
        mark_(n_, 0),
        wmark_(n_, 0),
        w_(n_, 0) {
    const CsrMatrix sym = m.symmetric_pattern();
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j : sym.row_cols(i)) {
        if (j != i) vars_[i].push_back(j);
      }
      degree_[i] = vars_[i].size();
      members_[i].push_back(i);
      queue_.emplace(degree_[i], i);
    }
  }

  Permutation run() {
    Permutation order;
    order.reserve(n_);
    std::size_t eliminated = 0;
    while (eliminated < n_) {
      const std::size_t p = queue_.begin()->second;
      queue_.erase(queue_.begin());
      eliminate(p, eliminated, order);
    }
    return order;
  }

 private:
  void eliminate(std::size_t p, std::size_t& eliminated, Permutation& order) {
    const std::size_t stamp = ++stamp_;
    mark_[p] = stamp;

    // New element p: union of the variable lists of adjacent elements plus
    // the variable neighbours of p. Adjacent elements are absorbed into p.
    std::vector<std::size_t> lp;
    for (std::size_t e : elems_[p]) {
      if (status_[e] != Status::Element) continue;
      for (std::size_t i : elem_vars_[e]) {
        if (status_[i] == Status::Variable && mark_[i] != stamp) {
          mark_[i] = stamp;
          lp.push_back(i);
        }
      }
      status_[e] = Status::Dead;
      elem_vars_[e].clear();
      elem_vars_[e].shrink_to_fit();
    }
    for (std::size_t i : vars_[p]) {
      if (status_[i] == Status::Variable && mark_[i] != stamp) {
        mark_[i] = stamp;
        lp.push_back(i);
      }
    }
    std::sort(lp.begin(), lp.end());

    status_[p] = Status::Element;
    vars_[p].clear();
    elems_[p].clear();
    emit(p, order);
    eliminated += weight_[p];

    // |Le \ Lp| for every element adjacent to a variable of Lp.
    for (std::size_t i : lp) {
      for (std::size_t e : elems_[i]) {
        if (status_[e] != Status::Element || e == p) continue;
        if (wmark_[e] != stamp) {
          wmark_[e] = stamp;
          auto& le = elem_vars_[e];
          le.erase(std::remove_if(le.begin(), le.end(),
                                  [&](std::size_t v) { return status_[v] != Status::Variable; }),
                   le.end());
          std::size_t total = 0;
          for (std::size_t v : le) total += weight_[v];
          w_[e] = static_cast<std::ptrdiff_t>(total);
        }
        w_[e] -= static_cast<std::ptrdiff_t>(weight_[i]);
      }
    }

    // Clean adjacency of Lp members; elements wholly inside Lp are absorbed.
    for (std::size_t i : lp) {
      auto& el = elems_[i];
      std::vector<std::size_t> kept;
      kept.reserve(el.size() + 1);
      for (std::size_t e : el) {
        if (status_[e] != Status::Element || e == p) continue;
        if (wmark_[e] == stamp && w_[e] == 0) {
          status_[e] = Status::Dead;
          elem_vars_[e].clear();
          continue;
        }
        kept.push_back(e);
      }
      kept.push_back(p);
      std::sort(kept.begin(), kept.end());
      kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
      el = std::move(kept);

      auto& vl = vars_[i];
      vl.erase(std::remove_if(vl.begin(), vl.end(),
                              [&](std::size_t v) {
                                return status_[v] != Status::Variable || mark_[v] == stamp;
                              }),
               vl.end());
      std::sort(vl.begin(), vl.end());
    }

    detect_supervariables(lp);

    std::size_t lp_weight = 0;
    for (std::size_t i : lp) {
      if (status_[i] == Status::Variable) lp_weight += weight_[i];
    }
    const std::size_t remaining = n_ - eliminated;
    for (std::size_t i : lp) {
      if (status_[i] != Status::Variable) continue;
      const std::size_t external_lp = lp_weight - weight_[i];
      std::size_t from_elements = 0;
      for (std::size_t e : elems_[i]) {
        if (e != p && status_[e] == Status::Element && wmark_[e] == stamp && w_[e] > 0) {
          from_elements += static_cast<std::size_t>(w_[e]);
        }
      }
      std::size_t from_vars = 0;
      for (std::size_t v : vars_[i]) {
        if (status_[v] == Status::Variable) from_vars += weight_[v];
      }
      std::size_t d = std::min(degree_[i] + external_lp, from_vars + external_lp + from_elements);
      d = std::min(d, remaining - weight_[i]);
      queue_.erase({degree_[i], i});
      degree_[i] = d;
      queue_.emplace(d, i);
    }

    auto& le = elem_vars_[p];
    le.clear();
    for (std::size_t i : lp) {
      if (status_[i] == Status::Variable) le.push_back(i);
    }
  }

  // Variables of Lp with identical quotient-graph adjacency are merged into
  // the lowest-index one.
  void detect_supervariables(const std::vector<std::size_t>& lp) {
    std::map<std::uint64_t, std::vector<std::size_t>> buckets;
    for (std::size_t i : lp) {
      std::uint64_t h = 0;
      for (std::size_t e : elems_[i]) h = h * 1000003ULL + e + 1;
      h ^= 0x9E3779B97F4A7C15ULL;
      for (std::size_t v : vars_[i]) h = h * 1000033ULL + v + 1;
      buckets[h].push_back(i);
    }
    for (auto& [hash, group] : buckets) {
      (void)hash;
      for (std::size_t a = 0; a < group.size(); ++a) {
        const std::size_t i = group[a];
        if (status_[i] != Status::Variable) continue;
        for (std::size_t b = a + 1; b < group.size(); ++b) {
          const std::size_t j = group[b];
          if (status_[j] != Status::Variable) continue;
          if (elems_[i] != elems_[j] || vars_[i] != vars_[j]) continue;
          weight_[i] += weight_[j];
          weight_[j] = 0;
          status_[j] = Status::Absorbed;
          members_[i].insert(members_[i].end(), members_[j].begin(), members_[j].end());
          members_[j].clear();
          vars_[j].clear();
          elems_[j].clear();
          queue_.erase({degree_[j], j});
        }
      }
    }
  }

  void emit(std::size_t p, Permutation& order) {
    auto& mem = members_[p];
    std::vector<std::size_t> rest;
    for (std::size_t v : mem) {
      if (v != p) rest.push_back(v);
    }
    std::sort(rest.begin(), rest.end());
    order.insert(order.end(), rest.begin(), rest.end());
    order.push_back(p);
    mem.clear();
  }

  std::size_t n_;
  std::vector<Status> status_;
  std::vector<std::size_t> weight_;
  std::vector<std::size_t> degree_;
  std::vector<std::vector<std::size_t>> vars_;
  std::vector<std::vector<std::size_t>> elems_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::vector<std::size_t>> elem_vars_ = std::vector<std::vector<std::size_t>>(n_);
  std::vector<std::size_t> mark_;
  std::vector<std::size_t> wmark_;
  std::vector<std::ptrdiff_t> w_;
  std::size_t stamp_ = 0;
  std::set<std::pair<std::size_t, std::size_t>> queue_;
};

}  // namespace

Permutation amd_ordering(const CsrMatrix& pattern) {
  if (pattern.rows() != pattern.cols()) {
    throw InvalidArgument("amd_ordering: pattern must be square");
  }
  if (pattern.rows() == 0) return {};
  return QuotientGraph(pattern).run();
}

}  // namespace lrsplit
