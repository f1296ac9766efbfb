#include "hyperwalk/coxeter.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

namespace hyperwalk {

namespace {

constexpr double kTolerance = 1e-9;
constexpr std::size_t kMaxMinimalRoots = 200000;

bool same_root(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-7 * (1.0 + std::abs(a[i]))) return false;
  }
  return true;
}

}  // namespace

CoxeterPolygon::CoxeterPolygon(int sides, int vertex_order) : sides_(sides), order_(vertex_order) {
  if (sides < 3 || sides > 64) throw std::invalid_argument("polygon needs 3..64 sides");
  if (vertex_order < 2) throw std::invalid_argument("vertex order must be >= 2");

  for (int i = 0; i < sides_; ++i) {
    std::vector<double> r(static_cast<std::size_t>(sides_), 0.0);
    r[static_cast<std::size_t>(i)] = 1.0;
    roots_.push_back(std::move(r));
  }

  // Breadth-first closure of the simple roots under reflections that keep a
  // root minimal: s(beta) is minimal iff B(alpha_s, beta) > -1.
  std::deque<std::size_t> queue;
  for (int i = 0; i < sides_; ++i) queue.push_back(static_cast<std::size_t>(i));
  std::vector<std::vector<int>> rows;
  while (!queue.empty()) {
    const std::size_t b = queue.front();
    queue.pop_front();
    if (rows.size() <= b) rows.resize(b + 1);
    rows[b].assign(static_cast<std::size_t>(sides_), kDominant);
    for (int s = 0; s < sides_; ++s) {
      if (b == static_cast<std::size_t>(s)) {
        rows[b][static_cast<std::size_t>(s)] = kNegative;
        continue;
      }
      const std::vector<double> beta = roots_[b];
      double c = 0.0;
      for (int j = 0; j < sides_; ++j) c += form(s, j) * beta[static_cast<std::size_t>(j)];
      if (std::abs(c) < kTolerance) {
        rows[b][static_cast<std::size_t>(s)] = static_cast<int>(b);
        continue;
      }
      if (c <= -1.0 + kTolerance) {
        rows[b][static_cast<std::size_t>(s)] = kDominant;
        continue;
      }
      std::vector<double> image = beta;
      image[static_cast<std::size_t>(s)] -= 2.0 * c;
      std::size_t found = roots_.size();
      for (std::size_t k = 0; k < roots_.size(); ++k) {
        if (same_root(roots_[k], image)) {
          found = k;
          break;
        }
      }
      if (found == roots_.size()) {
        if (roots_.size() >= kMaxMinimalRoots) {
          throw std::runtime_error("minimal root enumeration did not terminate");
        }
        roots_.push_back(std::move(image));
        queue.push_back(found);
      }
      rows[b][static_cast<std::size_t>(s)] = static_cast<int>(found);
    }
  }
  table_.reserve(roots_.size() * static_cast<std::size_t>(sides_));
  for (std::size_t b = 0; b < roots_.size(); ++b) {
    for (int s = 0; s < sides_; ++s) table_.push_back(rows[b][static_cast<std::size_t>(s)]);
  }
}

bool CoxeterPolygon::adjacent(int i, int j) const {
  const int d = ((i - j) % sides_ + sides_) % sides_;
  return d == 1 || d == sides_ - 1;
}

double CoxeterPolygon::form(int i, int j) const {
  if (i == j) return 1.0;
  if (adjacent(i, j)) return -std::cos(std::numbers::pi / order_);
  return -1.0;
}

bool CoxeterPolygon::multiply_right(std::vector<Label>& word, Label s) const {
  int beta = s;
  for (std::size_t j = word.size(); j-- > 0;) {
    const int t = word[j];
    if (beta == t) {
      word.erase(word.begin() + static_cast<std::ptrdiff_t>(j));
      return true;
    }
    beta = reflect(beta, t);
    if (beta == kDominant) break;
  }
  word.push_back(s);
  return false;
}

bool CoxeterPolygon::multiply_left(Label s, std::vector<Label>& word) const {
  int beta = s;
  for (std::size_t j = 0; j < word.size(); ++j) {
    const int t = word[j];
    if (beta == t) {
      word.erase(word.begin() + static_cast<std::ptrdiff_t>(j));
      return true;
    }
    beta = reflect(beta, t);
    if (beta == kDominant) break;
  }
  word.insert(word.begin(), s);
  return false;
}

bool CoxeterPolygon::is_reduced(const std::vector<Label>& word) const {
  std::vector<Label> built;
  built.reserve(word.size());
  for (Label s : word) {
    if (multiply_right(built, s)) return false;
  }
  return true;
}

}  // namespace hyperwalk
