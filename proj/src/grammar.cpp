#include "disco/grammar.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace disco {

Atom::Atom(std::string n) : name(std::move(n)) {
  if (name.empty()) throw parse_error("atom name must be non-empty");
  for (char c : name)
    if (c < 'a' || c > 'z')
      throw parse_error("atom name must be lowercase a-z: '" + name + "'");
}

SimpleType adjoint_right(const SimpleType& t) { return {t.base, t.adjoint + 1}; }
SimpleType adjoint_left(const SimpleType& t) { return {t.base, t.adjoint - 1}; }

PregroupType concat(const PregroupType& a, const PregroupType& b) {
  PregroupType out = a;
  out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
  return out;
}

PregroupType adjoint_right(const PregroupType& t) {
  PregroupType out;
  out.factors.reserve(t.factors.size());
  for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
    out.factors.push_back(adjoint_right(*it));
  return out;
}

PregroupType adjoint_left(const PregroupType& t) {
  PregroupType out;
  out.factors.reserve(t.factors.size());
  for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
    out.factors.push_back(adjoint_left(*it));
  return out;
}

PregroupType parse_type(const std::string& text) {
  PregroupType out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const std::size_t caret = tok.find('^');
    const std::string name = tok.substr(0, caret);
    if (name.empty())
      throw parse_error("malformed type factor '" + tok + "': empty atom name");
    for (char c : name)
      if (c < 'a' || c > 'z')
        throw parse_error("malformed type factor '" + tok +
                          "': atom names are lowercase a-z");
    int z = 0;
    if (caret != std::string::npos) {
      const std::string adj = tok.substr(caret + 1);
      if (adj.empty())
        throw parse_error("malformed type factor '" + tok +
                          "': '^' must be followed by r/l letters");
      for (char c : adj) {
        if (c == 'r') ++z;
        else if (c == 'l') --z;
        else
          throw parse_error("malformed type factor '" + tok +
                            "': adjoint marks must be r or l");
      }
    }
    out.factors.push_back(SimpleType{Atom(name), z});
  }
  return out;
}

std::string to_string(const SimpleType& t) {
  std::string out = t.base.name;
  if (t.adjoint != 0) {
    out += '^';
    const char mark = t.adjoint > 0 ? 'r' : 'l';
    for (int i = 0; i < std::abs(t.adjoint); ++i) out += mark;
  }
  return out;
}

std::string to_string(const PregroupType& t) {
  std::string out;
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    if (i) out += ' ';
    out += to_string(t.factors[i]);
  }
  return out;
}

bool contractible(const SimpleType& left, const SimpleType& right) {
  return left.base == right.base && right.adjoint == left.adjoint + 1;
}

std::vector<SimpleType> flatten(const std::vector<PregroupType>& sentence) {
  std::vector<SimpleType> out;
  for (const auto& t : sentence)
    out.insert(out.end(), t.factors.begin(), t.factors.end());
  return out;
}

bool diagram_is_valid(const LinkDiagram& d, const std::vector<SimpleType>& positions) {
  const std::size_t m = positions.size();
  if (d.n_positions != m) return false;

  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> partner(m, kFree);
  for (const auto& [i, j] : d.links) {
    if (i >= j || j >= m) return false;
    if (partner[i] != kFree || partner[j] != kFree) return false;
    if (!contractible(positions[i], positions[j])) return false;
    partner[i] = j;
    partner[j] = i;
  }
  if (!std::is_sorted(d.links.begin(), d.links.end())) return false;

  // Non-crossing and closed interiors: everything strictly under a cup is
  // linked, and linked to a position under the same cup.
  for (const auto& [i, j] : d.links) {
    for (std::size_t p = i + 1; p < j; ++p) {
      if (partner[p] == kFree) return false;
      if (partner[p] <= i || partner[p] >= j) return false;
    }
  }

  std::vector<std::size_t> expected_open;
  for (std::size_t p = 0; p < m; ++p)
    if (partner[p] == kFree) expected_open.push_back(p);
  return d.open == expected_open;
}

PregroupType diagram_residual(const LinkDiagram& d, const std::vector<SimpleType>& positions) {
  PregroupType out;
  for (std::size_t p : d.open) {
    if (p >= positions.size())
      throw validation_error("diagram open position out of range");
    out.factors.push_back(positions[p]);
  }
  return out;
}

namespace {

// Shared search state for reduce. cancellable(i, j) answers whether the
// substring [i, j) contracts fully to the unit; feasible(i, q) whether
// the suffix from position i can complete with target factors q.. still
// to be spelled. Both are memoized, so the whole search is polynomial.
class ReductionSearch {
 public:
  ReductionSearch(std::vector<SimpleType> positions, std::vector<SimpleType> target)
      : pos_(std::move(positions)),
        tgt_(std::move(target)),
        m_(pos_.size()),
        t_(tgt_.size()),
        canc_((m_ + 1) * (m_ + 1), 0),
        feas_((m_ + 1) * (t_ + 1), -1) {
    fill_cancellable();
  }

  std::optional<LinkDiagram> least() {
    if (m_ < t_ || (m_ - t_) % 2 != 0) return std::nullopt;
    if (!feasible(0, 0)) return std::nullopt;

    LinkDiagram d;
    d.n_positions = m_;
    std::size_t i = 0, q = 0;
    while (i < m_) {
      bool linked = false;
      for (std::size_t j = i + 1; j < m_; j += 2) {
        if (pair_ok(i, j) && cancellable(i + 1, j) && feasible(j + 1, q)) {
          d.links.emplace_back(i, j);
          emit_cancel(i + 1, j, d.links);
          i = j + 1;
          linked = true;
          break;
        }
      }
      if (!linked) {
        if (!(q < t_ && pos_[i] == tgt_[q] && feasible(i + 1, q + 1)))
          throw std::logic_error("reduce: feasible state has no move");
        d.open.push_back(i);
        ++i;
        ++q;
      }
    }
    std::sort(d.links.begin(), d.links.end());
    return d;
  }

 private:
  bool pair_ok(std::size_t i, std::size_t j) const {
    return contractible(pos_[i], pos_[j]);
  }

  bool cancellable(std::size_t i, std::size_t j) const {
    return canc_[i * (m_ + 1) + j] != 0;
  }

  void fill_cancellable() {
    for (std::size_t i = 0; i <= m_; ++i) canc_[i * (m_ + 1) + i] = 1;
    for (std::size_t len = 2; len <= m_; len += 2) {
      for (std::size_t i = 0; i + len <= m_; ++i) {
        const std::size_t j = i + len;
        for (std::size_t k = i + 1; k < j; k += 2) {
          if (pair_ok(i, k) && cancellable(i + 1, k) && cancellable(k + 1, j)) {
            canc_[i * (m_ + 1) + j] = 1;
            break;
          }
        }
      }
    }
  }

  bool feasible(std::size_t i, std::size_t q) {
    signed char& memo = feas_[i * (t_ + 1) + q];
    if (memo >= 0) return memo != 0;
    bool ok = false;
    if (i == m_) {
      ok = (q == t_);
    } else {
      if (q < t_ && pos_[i] == tgt_[q] && feasible(i + 1, q + 1)) ok = true;
      for (std::size_t j = i + 1; !ok && j < m_; j += 2)
        if (pair_ok(i, j) && cancellable(i + 1, j) && feasible(j + 1, q)) ok = true;
    }
    memo = ok ? 1 : 0;
    return ok;
  }

  // Lexicographically least full cancellation of [i, j): the leftmost
  // position must carry the first cup, so the smallest workable right end
  // wins, then the interior and the remainder are minimized in turn.
  void emit_cancel(std::size_t i, std::size_t j,
                   std::vector<std::pair<std::size_t, std::size_t>>& links) {
    if (i == j) return;
    for (std::size_t k = i + 1; k < j; k += 2) {
      if (pair_ok(i, k) && cancellable(i + 1, k) && cancellable(k + 1, j)) {
        links.emplace_back(i, k);
        emit_cancel(i + 1, k, links);
        emit_cancel(k + 1, j, links);
        return;
      }
    }
    throw std::logic_error("reduce: cancellable interval has no split");
  }

  std::vector<SimpleType> pos_;
  std::vector<SimpleType> tgt_;
  std::size_t m_, t_;
  std::vector<char> canc_;
  std::vector<signed char> feas_;
};

// Exhaustive enumeration via a left-to-right scan with a stack of pending
// cup openings. A position may close the innermost pending cup, stay open
// (only outside every cup, so only at empty stack), or start a new cup.
// Each action sequence yields a distinct diagram, so no deduplication is
// needed.
struct Enumerator {
  const std::vector<SimpleType>& pos;
  const std::vector<SimpleType>& tgt;
  std::size_t m, t;
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::size_t> open;
  std::vector<LinkDiagram> out;

  void dfs(std::size_t p, std::size_t q) {
    if (p == m) {
      if (stack.empty() && q == t) {
        LinkDiagram d;
        d.n_positions = m;
        d.links = links;
        std::sort(d.links.begin(), d.links.end());
        d.open = open;
        out.push_back(std::move(d));
      }
      return;
    }
    if (!stack.empty() && contractible(pos[stack.back()], pos[p])) {
      const std::size_t i = stack.back();
      stack.pop_back();
      links.emplace_back(i, p);
      dfs(p + 1, q);
      links.pop_back();
      stack.push_back(i);
    }
    if (stack.empty() && q < t && pos[p] == tgt[q]) {
      open.push_back(p);
      dfs(p + 1, q + 1);
      open.pop_back();
    }
    if (stack.size() + 1 <= m - p - 1) {
      stack.push_back(p);
      dfs(p + 1, q);
      stack.pop_back();
    }
  }
};

}  // namespace

std::optional<LinkDiagram> reduce(const std::vector<PregroupType>& sentence,
                                  const PregroupType& target) {
  if (sentence.empty()) throw validation_error("reduce: sentence must be non-empty");
  ReductionSearch search(flatten(sentence), target.factors);
  return search.least();
}

std::vector<LinkDiagram> enumerate_reductions(const std::vector<PregroupType>& sentence,
                                              const PregroupType& target,
                                              std::size_t max_positions) {
  if (sentence.empty())
    throw validation_error("enumerate_reductions: sentence must be non-empty");
  auto positions = flatten(sentence);
  if (positions.size() > max_positions) {
    throw resource_error("enumerate_reductions: " + std::to_string(positions.size()) +
                         " simple types exceed the cap of " +
                         std::to_string(max_positions) +
                         " (the enumeration is exponential)");
  }
  Enumerator e{positions, target.factors, positions.size(), target.size(), {}, {}, {}, {}};
  e.dfs(0, 0);
  std::sort(e.out.begin(), e.out.end());
  return e.out;
}

}  // namespace disco
