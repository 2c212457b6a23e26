#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace remora {

// Consecutive length-n pieces. Split_0 is only defined on the empty list,
// where it yields no pieces; callers that need k empty cells build them.
template <class T>
std::vector<std::vector<T>> split_list(std::size_t n, const std::vector<T>& xs) {
  if (n == 0) {
    if (!xs.empty()) throw std::invalid_argument("split_list: zero piece size on a non-empty list");
    return {};
  }
  if (xs.size() % n != 0) throw std::invalid_argument("split_list: length not divisible by piece size");
  std::vector<std::vector<T>> out;
  out.reserve(xs.size() / n);
  for (std::size_t i = 0; i < xs.size(); i += n)
    out.emplace_back(xs.begin() + static_cast<std::ptrdiff_t>(i), xs.begin() + static_cast<std::ptrdiff_t>(i + n));
  return out;
}

// Each element repeated n times in place; inner lists are copied whole.
template <class T>
std::vector<T> rep_list(std::size_t n, const std::vector<T>& xs) {
  std::vector<T> out;
  out.reserve(xs.size() * n);
  for (const auto& x : xs)
    for (std::size_t k = 0; k < n; ++k) out.push_back(x);
  return out;
}

template <class T>
std::vector<std::vector<T>> transpose_list(const std::vector<std::vector<T>>& xss) {
  if (xss.empty()) return {};
  std::size_t w = xss[0].size();
  for (const auto& r : xss)
    if (r.size() != w) throw std::invalid_argument("transpose_list: ragged input");
  std::vector<std::vector<T>> out(w);
  for (std::size_t i = 0; i < w; ++i) {
    out[i].reserve(xss.size());
    for (const auto& r : xss) out[i].push_back(r[i]);
  }
  return out;
}

template <class T>
std::vector<T> concat_list(const std::vector<std::vector<T>>& xss) {
  std::vector<T> out;
  for (const auto& xs : xss) out.insert(out.end(), xs.begin(), xs.end());
  return out;
}

}  // namespace remora
