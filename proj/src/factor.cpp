#include "ioscm/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ioscm/error.hpp"

namespace ioscm {

namespace {

// Merged scope of two factors with consistent cardinalities.
void merge_scope(const Factor& a, const Factor& b, std::vector<NodeId>& vars, std::vector<int>& cards) {
  std::map<NodeId, int> merged;
  for (std::size_t i = 0; i < a.vars().size(); ++i) merged[a.vars()[i]] = a.cards()[i];
  for (std::size_t i = 0; i < b.vars().size(); ++i) {
    auto [it, inserted] = merged.emplace(b.vars()[i], b.cards()[i]);
    if (!inserted && it->second != b.cards()[i])
      throw Error(ErrorCode::InvalidModel, "variable " + b.vars()[i] + " has inconsistent cardinalities",
                  b.vars()[i]);
  }
  for (const auto& [v, c] : merged) {
    vars.push_back(v);
    cards.push_back(c);
  }
}

// Strides of `f` laid out against the variable list `vars` (0 where absent).
std::vector<std::size_t> strides_in(const Factor& f, const std::vector<NodeId>& vars) {
  std::vector<std::size_t> own(f.vars().size(), 1);
  for (std::size_t i = f.vars().size(); i-- > 1;) own[i - 1] = own[i] * static_cast<std::size_t>(f.cards()[i]);
  std::vector<std::size_t> out(vars.size(), 0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = std::lower_bound(f.vars().begin(), f.vars().end(), vars[i]);
    if (it != f.vars().end() && *it == vars[i]) out[i] = own[it - f.vars().begin()];
  }
  return out;
}

// Visits every assignment of `cards` in row-major order, tracking the flat
// offsets of up to two factors.
template <typename Fn>
void for_each_joint(const std::vector<int>& cards, const std::vector<std::size_t>& sa,
                    const std::vector<std::size_t>& sb, Fn&& fn) {
  const std::size_t n = cards.size();
  std::size_t total = 1;
  for (int c : cards) total *= static_cast<std::size_t>(c);
  std::vector<int> digit(n, 0);
  std::size_t oa = 0, ob = 0;
  for (std::size_t k = 0; k < total; ++k) {
    fn(k, oa, ob);
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < cards[i]) {
        oa += sa[i];
        ob += sb[i];
        break;
      }
      oa -= sa[i] * static_cast<std::size_t>(cards[i] - 1);
      ob -= sb[i] * static_cast<std::size_t>(cards[i] - 1);
      digit[i] = 0;
    }
  }
}

}  // namespace

Factor::Factor(std::vector<NodeId> vars, std::vector<int> cards, std::vector<double> values) {
  if (vars.size() != cards.size()) throw Error(ErrorCode::InvalidModel, "factor variables and cardinalities differ");
  std::vector<std::size_t> order(vars.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vars[a] < vars[b]; });
  for (auto i : order) {
    if (!vars_.empty() && vars_.back() == vars[i])
      throw Error(ErrorCode::InvalidModel, "duplicate factor variable " + vars[i], vars[i]);
    if (cards[i] <= 0) throw Error(ErrorCode::InvalidModel, "cardinality must be positive", vars[i]);
    vars_.push_back(vars[i]);
    cards_.push_back(cards[i]);
  }
  std::size_t total = 1;
  for (int c : cards_) total *= static_cast<std::size_t>(c);
  if (values.size() != total) throw Error(ErrorCode::InvalidModel, "factor table has the wrong size");
  if (std::is_sorted(order.begin(), order.end())) {
    values_ = std::move(values);
    return;
  }
  // Transpose from the caller's variable order into sorted order.
  Factor sorted_layout;
  sorted_layout.vars_ = vars_;
  sorted_layout.cards_ = cards_;
  std::vector<int> given_cards = cards;
  std::vector<std::size_t> given_strides(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;)
    given_strides[i - 1] = given_strides[i] * static_cast<std::size_t>(given_cards[i]);
  std::vector<std::size_t> strides(vars_.size());
  for (std::size_t k = 0; k < order.size(); ++k) strides[k] = given_strides[order[k]];
  values_.assign(total, 0.0);
  std::vector<std::size_t> none(vars_.size(), 0);
  for_each_joint(cards_, strides, none, [&](std::size_t k, std::size_t src, std::size_t) { values_[k] = values[src]; });
}

Factor Factor::constant(double v) {
  Factor f;
  f.values_ = {v};
  return f;
}

Factor Factor::zeros(std::vector<NodeId> vars, std::vector<int> cards) {
  std::size_t total = 1;
  for (int c : cards) total *= static_cast<std::size_t>(c);
  return Factor(std::move(vars), std::move(cards), std::vector<double>(total, 0.0));
}

int Factor::card(const NodeId& v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) throw Error(ErrorCode::UnknownNode, "variable " + v + " not in factor", v);
  return cards_[it - vars_.begin()];
}

std::size_t Factor::offset(const Assignment& a) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = a.find(vars_[i]);
    if (it == a.end()) throw Error(ErrorCode::UnknownNode, "assignment misses " + vars_[i], vars_[i]);
    if (it->second < 0 || it->second >= cards_[i])
      throw Error(ErrorCode::InvalidModel, "value out of range for " + vars_[i], vars_[i]);
    off = off * static_cast<std::size_t>(cards_[i]) + static_cast<std::size_t>(it->second);
  }
  return off;
}

Assignment Factor::assignment(std::size_t offset) const {
  Assignment a;
  for (std::size_t i = vars_.size(); i-- > 0;) {
    a[vars_[i]] = static_cast<int>(offset % static_cast<std::size_t>(cards_[i]));
    offset /= static_cast<std::size_t>(cards_[i]);
  }
  return a;
}

Factor Factor::product(const Factor& other) const {
  std::vector<NodeId> vars;
  std::vector<int> cards;
  merge_scope(*this, other, vars, cards);
  Factor out = zeros(vars, cards);
  const auto sa = strides_in(*this, vars), sb = strides_in(other, vars);
  for_each_joint(cards, sa, sb, [&](std::size_t k, std::size_t oa, std::size_t ob) {
    out.values_[k] = values_[oa] * other.values_[ob];
  });
  return out;
}

Factor Factor::divide(const Factor& other) const {
  std::vector<NodeId> vars;
  std::vector<int> cards;
  merge_scope(*this, other, vars, cards);
  Factor out = zeros(vars, cards);
  const auto sa = strides_in(*this, vars), sb = strides_in(other, vars);
  for_each_joint(cards, sa, sb, [&](std::size_t k, std::size_t oa, std::size_t ob) {
    const double den = other.values_[ob];
    if (den == 0.0) throw Error(ErrorCode::DomainGap, "conditioning on an event of probability zero");
    out.values_[k] = values_[oa] / den;
  });
  return out;
}

Factor Factor::sum_out(const NodeSet& drop) const {
  std::vector<NodeId> vars;
  std::vector<int> cards;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (!drop.count(vars_[i])) {
      vars.push_back(vars_[i]);
      cards.push_back(cards_[i]);
    }
  if (vars.size() == vars_.size()) return *this;
  Factor out = zeros(vars, cards);
  const auto target = strides_in(out, vars_);
  std::vector<std::size_t> self(vars_.size(), 0);
  for_each_joint(cards_, target, self,
                 [&](std::size_t k, std::size_t ot, std::size_t) { out.values_[ot] += values_[k]; });
  return out;
}

Factor Factor::marginal(const NodeSet& keep) const {
  NodeSet drop;
  for (const auto& v : vars_)
    if (!keep.count(v)) drop.insert(v);
  return sum_out(drop);
}

Factor Factor::reduce(const Assignment& a) const {
  std::vector<NodeId> vars;
  std::vector<int> cards;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (!a.count(vars_[i])) {
      vars.push_back(vars_[i]);
      cards.push_back(cards_[i]);
    }
  Factor out = zeros(vars, cards);
  for (std::size_t k = 0; k < out.size(); ++k) {
    Assignment full = out.assignment(k);
    for (const auto& [v, x] : a) full[v] = x;
    out.values_[k] = values_[offset(full)];
  }
  return out;
}

double Factor::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double max_abs_diff(const Factor& a, const Factor& b) {
  std::vector<NodeId> vars;
  std::vector<int> cards;
  merge_scope(a, b, vars, cards);
  const auto sa = strides_in(a, vars), sb = strides_in(b, vars);
  double worst = 0.0;
  for_each_joint(cards, sa, sb, [&](std::size_t, std::size_t oa, std::size_t ob) {
    worst = std::max(worst, std::abs(a.values()[oa] - b.values()[ob]));
  });
  return worst;
}

}  // namespace ioscm
