#include "hardymod/grid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hardymod/error.hpp"

namespace hardymod {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent in multi-index");
  }
}

MultiIndex MultiIndex::zero(std::size_t n) { return MultiIndex(std::vector<int>(n, 0)); }

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  std::vector<int> e(n, 0);
  e.at(i) = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::total_degree() const noexcept {
  return std::accumulate(entries_.begin(), entries_.end(), 0);
}

bool MultiIndex::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](int e) { return e == 0; });
}

bool MultiIndex::fits_within(const MultiIndex& caps) const {
  if (caps.size() != size()) {
    throw Error(ErrorKind::DimensionMismatch, "multi-index length differs from grid");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (entries_[i] > caps.entries_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.size() != size()) throw Error(ErrorKind::DimensionMismatch, "multi-index length mismatch");
  std::vector<int> e(entries_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.entries_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (other.size() != size()) throw Error(ErrorKind::DimensionMismatch, "multi-index length mismatch");
  std::vector<int> e(entries_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= other.entries_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::with(std::size_t i, int value) const {
  std::vector<int> e(entries_);
  e.at(i) = value;
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i];
  }
  os << ')';
  return os.str();
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const int da = a.total_degree();
  const int db = b.total_degree();
  if (da != db) return da < db;
  // Within a degree, (1,0) precedes (0,1).
  return std::lexicographical_compare(b.entries().begin(), b.entries().end(),
                                      a.entries().begin(), a.entries().end());
}

std::vector<int> shrink(const MultiIndex& caps, const MultiIndex& margin) {
  if (caps.size() != margin.size()) throw Error(ErrorKind::DimensionMismatch, "margin length differs from grid");
  std::vector<int> out(caps.size());
  for (std::size_t i = 0; i < caps.size(); ++i) out[i] = caps[i] - margin[i];
  return out;
}

// Mixed-radix lookup from the raw exponent tuple to the graded-lex position.
struct TruncationGrid::Tables {
  std::vector<MultiIndex> order;
  std::vector<Index> radix_to_position;
  std::vector<Index> strides;
};

TruncationGrid::TruncationGrid(MultiIndex caps, int coeff_dim)
    : caps_(std::move(caps)), coeff_dim_(coeff_dim) {
  if (caps_.size() == 0) throw Error(ErrorKind::InvalidArgument, "grid needs at least one variable");
  if (coeff_dim_ < 1) throw Error(ErrorKind::InvalidArgument, "coefficient dimension must be >= 1");

  auto t = std::make_shared<Tables>();
  const std::size_t n = caps_.size();
  t->strides.resize(n);
  Index total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    t->strides[i] = total;
    total *= caps_[i] + 1;
  }
  t->order.reserve(static_cast<std::size_t>(total));
  std::vector<int> e(n, 0);
  for (Index r = 0; r < total; ++r) {
    Index rem = r;
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = static_cast<int>(rem % (caps_[i] + 1));
      rem /= caps_[i] + 1;
    }
    t->order.emplace_back(e);
  }
  std::sort(t->order.begin(), t->order.end(), graded_lex_less);
  t->radix_to_position.assign(static_cast<std::size_t>(total), 0);
  for (std::size_t p = 0; p < t->order.size(); ++p) {
    Index r = 0;
    for (std::size_t i = 0; i < n; ++i) r += t->order[p][i] * t->strides[i];
    t->radix_to_position[static_cast<std::size_t>(r)] = static_cast<Index>(p);
  }
  tables_ = std::move(t);
}

Index TruncationGrid::monomial_count() const noexcept {
  return static_cast<Index>(tables_->order.size());
}

const std::vector<MultiIndex>& TruncationGrid::monomials() const noexcept { return tables_->order; }

Index TruncationGrid::monomial_position(const MultiIndex& k) const {
  if (!k.fits_within(caps_)) {
    throw Error(ErrorKind::InvalidArgument, "monomial " + k.to_string() + " outside grid caps");
  }
  Index r = 0;
  for (std::size_t i = 0; i < k.size(); ++i) r += k[i] * tables_->strides[i];
  return tables_->radix_to_position[static_cast<std::size_t>(r)];
}

Index TruncationGrid::index(const MultiIndex& k, int channel) const {
  if (channel < 0 || channel >= coeff_dim_) throw Error(ErrorKind::InvalidArgument, "channel out of range");
  return monomial_position(k) * coeff_dim_ + channel;
}

std::pair<MultiIndex, int> TruncationGrid::entry(Index position) const {
  if (position < 0 || position >= size()) throw Error(ErrorKind::InvalidArgument, "basis position out of range");
  return {tables_->order[static_cast<std::size_t>(position / coeff_dim_)],
          static_cast<int>(position % coeff_dim_)};
}

std::vector<Index> TruncationGrid::window_positions(std::span<const int> window) const {
  if (window.size() != variables()) throw Error(ErrorKind::DimensionMismatch, "window length differs from grid");
  std::vector<Index> out;
  const auto& order = tables_->order;
  for (std::size_t p = 0; p < order.size(); ++p) {
    bool inside = true;
    for (std::size_t i = 0; i < window.size() && inside; ++i) inside = order[p][i] <= window[i];
    if (!inside) continue;
    for (int c = 0; c < coeff_dim_; ++c) out.push_back(static_cast<Index>(p) * coeff_dim_ + c);
  }
  return out;
}

std::vector<std::pair<MultiIndex, int>> enumerate_basis(const TruncationGrid& grid) {
  std::vector<std::pair<MultiIndex, int>> out;
  out.reserve(static_cast<std::size_t>(grid.size()));
  for (const auto& k : grid.monomials()) {
    for (int c = 0; c < grid.coeff_dim(); ++c) out.emplace_back(k, c);
  }
  return out;
}

HardyVector::HardyVector(TruncationGrid grid, Vector coefficients)
    : grid_(std::move(grid)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_.size()) throw Error(ErrorKind::DimensionMismatch, "coefficient vector length differs from grid size");
}

HardyVector HardyVector::monomial(const TruncationGrid& grid, const MultiIndex& k, int channel) {
  Vector v = Vector::Zero(grid.size());
  v(grid.index(k, channel)) = 1.0;
  return HardyVector(grid, std::move(v));
}

Complex HardyVector::coefficient(const MultiIndex& k, int channel) const {
  return coeffs_(grid_.index(k, channel));
}

Complex HardyVector::inner(const HardyVector& other) const {
  if (!(other.grid_ == grid_)) throw Error(ErrorKind::DimensionMismatch, "inner product across different grids");
  return other.coeffs_.dot(coeffs_);
}

Vector HardyVector::evaluate(std::span<const Complex> z) const {
  if (z.size() != grid_.variables()) throw Error(ErrorKind::DimensionMismatch, "evaluation point has wrong length");
  Vector out = Vector::Zero(grid_.coeff_dim());
  const auto& order = grid_.monomials();
  for (std::size_t p = 0; p < order.size(); ++p) {
    Complex zk = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) zk *= std::pow(z[i], order[p][i]);
    for (int c = 0; c < grid_.coeff_dim(); ++c) {
      out(c) += coeffs_(static_cast<Index>(p) * grid_.coeff_dim() + c) * zk;
    }
  }
  return out;
}

}  // namespace hardymod
