#include "netprice/types.hpp"

#include "netprice/error.hpp"

namespace netprice {

PricePath::PricePath(Mat prices) : prices_(std::move(prices)) {
  if (prices_.rows() < 1 || prices_.cols() < 1) {
    throw Error(ErrorKind::ShapeMismatch, "price path needs at least one round and one column");
  }
  if (!prices_.allFinite()) throw Error(ErrorKind::InvalidParameter, "price path must be finite");
}

PricePath PricePath::scalar(const Vec& chronological) { return PricePath(Mat(chronological)); }

PricePath PricePath::per_group(const Mat& chronological) { return PricePath(chronological); }

PricePath PricePath::from_remaining(const Vec& by_remaining) {
  return PricePath(Mat(by_remaining.reverse()));
}

double PricePath::at_round(int r, int group) const {
  if (r < 1 || r > T()) throw Error(ErrorKind::ShapeMismatch, "round index out of range");
  const int col = is_per_group() ? group : 0;
  if (col < 0 || col >= columns()) throw Error(ErrorKind::ShapeMismatch, "group index out of range");
  return prices_(r - 1, col);
}

double PricePath::at_remaining(int t, int group) const { return at_round(T() + 1 - t, group); }

Vec PricePath::remaining_vector(int t, int m) const {
  if (is_per_group() && columns() != m) {
    throw Error(ErrorKind::ShapeMismatch, "per-group path width does not match the network");
  }
  Vec out(m);
  for (int i = 0; i < m; ++i) out[i] = at_remaining(t, i);
  return out;
}

}  // namespace netprice
